#pragma once

#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"
#include "propreward/strategy_space.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

struct OptimalQualityResult
{
  std::vector<std::size_t> excellent;  // original agent indices, ascending
  std::vector<std::size_t> good;
  double                   value{0.0};  // alpha*|E| + |G|
  double                   cost{0.0};
  bool                     respects_T{true};
};

struct CoverageOptResult
{
  StrategyProfile          assignment;
  std::vector<std::size_t> covered;
  int                      value{0};
};

namespace detail {

inline void require_single_proposal(const Instance& instance, const char* what)
{
  if (instance.proposals() != 1)
  {
    throw std::invalid_argument(std::string(what) + " needs a single proposal");
  }
}

inline OptimalQualityResult finish(const Instance& instance, std::vector<std::size_t> E, std::vector<std::size_t> G)
{
  std::sort(E.begin(), E.end());
  std::sort(G.begin(), G.end());
  const double         alpha = instance.alphabet().top_effort();
  const double         limit = instance.time_horizon() + instance.tolerance();
  OptimalQualityResult out;
  for (auto i : E)
  {
    out.cost += alpha * instance.skill(i, 0);
    out.respects_T = out.respects_T && alpha * instance.skill(i, 0) <= limit;
  }
  for (auto i : G)
  {
    out.cost += instance.skill(i, 0);
    out.respects_T = out.respects_T && instance.skill(i, 0) <= limit;
  }
  out.value     = alpha * static_cast<double>(E.size()) + static_cast<double>(G.size());
  out.excellent = std::move(E);
  out.good      = std::move(G);
  return out;
}

}  // namespace detail

// Cheapest agents first: excellent reviews while they fit, then good reviews
// with what is left. Skill ties break by agent index.
inline OptimalQualityResult greedy_quality_opt(const Instance& instance, bool enforce_T)
{
  detail::require_single_proposal(instance, "greedy quality optimum");
  const double beta  = instance.per_proposal_budget() + instance.tolerance();
  const double limit = instance.time_horizon() + instance.tolerance();
  const double alpha = instance.alphabet().top_effort();
  const auto   order = skill_order(instance);

  std::vector<std::size_t> E, G;
  double                   cost = 0.0;
  std::size_t              r    = 0;
  if (instance.alphabet().has_excellent())
  {
    for (; r < order.size(); ++r)
    {
      double s = instance.skill(order[r], 0);
      if (cost + alpha * s > beta || (enforce_T && alpha * s > limit))
      {
        break;
      }
      cost += alpha * s;
      E.push_back(order[r]);
    }
  }
  for (; r < order.size(); ++r)
  {
    double s = instance.skill(order[r], 0);
    if (cost + s > beta || (enforce_T && s > limit))
    {
      break;
    }
    cost += s;
    G.push_back(order[r]);
  }
  return detail::finish(instance, std::move(E), std::move(G));
}

// Exhaustive search over every assignment of qualities to agents.
inline OptimalQualityResult brute_quality_opt(const Instance& instance, bool enforce_T = true,
                                              unsigned long long cap = kDefaultCap)
{
  detail::require_single_proposal(instance, "brute-force quality optimum");
  const auto& alphabet = instance.alphabet();
  const auto  n        = instance.agents();
  if (saturating_pow(alphabet.size(), n) > cap)
  {
    throw CapExceeded("brute-force quality optimum over " + std::to_string(n) + " agents", cap);
  }
  const double beta  = instance.per_proposal_budget() + instance.tolerance();
  const double limit = instance.time_horizon() + instance.tolerance();

  std::vector<Quality>     levels(n, Quality::none);
  std::vector<Quality>     best_levels = levels;
  double                   best        = -1.0;
  auto descend = [&](auto&& self, std::size_t i, double cost, double value) -> void {
    if (i == n)
    {
      if (value > best)
      {
        best        = value;
        best_levels = levels;
      }
      return;
    }
    for (Quality level : alphabet.levels())
    {
      double c = alphabet.effort(level) * instance.skill(i, 0);
      if (cost + c > beta || (enforce_T && c > limit))
      {
        continue;
      }
      levels[i] = level;
      self(self, i + 1, cost + c, value + alphabet.value(level));
    }
    levels[i] = Quality::none;
  };
  descend(descend, 0, 0.0, 0.0);

  std::vector<std::size_t> E, G;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (best_levels[i] == Quality::excellent)
    {
      E.push_back(i);
    }
    else if (best_levels[i] == Quality::good)
    {
      G.push_back(i);
    }
  }
  return detail::finish(instance, std::move(E), std::move(G));
}

// i*: longest skill-sorted prefix whose excellent reviews fit in beta.
inline std::size_t excellent_prefix(const Instance& instance)
{
  detail::require_single_proposal(instance, "excellent prefix");
  const double alpha = instance.alphabet().top_effort();
  const double beta  = instance.per_proposal_budget() + instance.tolerance();
  double       cost  = 0.0;
  std::size_t  count = 0;
  for (auto i : skill_order(instance))
  {
    cost += alpha * instance.skill(i, 0);
    if (cost > beta)
    {
      break;
    }
    ++count;
  }
  return count;
}

// alpha * (i* + 1); with i* = 0 this is alpha.
inline double opt_upper_bound(const Instance& instance)
{
  if (!instance.alphabet().has_excellent())
  {
    throw std::invalid_argument("the optimum upper bound is stated for the {0,1,alpha} alphabet");
  }
  return instance.alphabet().top_effort() * static_cast<double>(excellent_prefix(instance) + 1);
}

// Exact maximum coverage over nsFeasible profiles. One review per covered
// proposal suffices, so the search assigns each proposal to at most one
// agent, subject to s_ij <= beta and each agent's load staying within T.
// Depth-first over proposals; the bound counts proposals some agent could
// still take.
inline CoverageOptResult coverage_opt(const Instance& instance, unsigned long long cap = kDefaultCap)
{
  if (instance.alphabet().has_excellent())
  {
    throw std::invalid_argument("coverage optimum is defined on the {0,1} alphabet");
  }
  const auto   n     = instance.agents();
  const auto   m     = instance.proposals();
  const double beta  = instance.per_proposal_budget() + instance.tolerance();
  const double limit = instance.time_horizon() + instance.tolerance();

  // candidates per proposal, cheapest first
  std::vector<std::vector<std::size_t>> candidates(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      if (instance.skill(i, j) <= beta && instance.skill(i, j) <= limit)
      {
        candidates[j].push_back(i);
      }
    }
    std::stable_sort(candidates[j].begin(), candidates[j].end(),
                     [&](std::size_t a, std::size_t b) { return instance.skill(a, j) < instance.skill(b, j); });
  }

  std::vector<double>              load(n, 0.0);
  std::vector<long>                owner(m, -1), best_owner(m, -1);
  int                              best  = -1;
  unsigned long long               nodes = 0;

  auto reachable = [&](std::size_t from) {
    int count = 0;
    for (std::size_t j = from; j < m; ++j)
    {
      for (auto i : candidates[j])
      {
        if (load[i] + instance.skill(i, j) <= limit)
        {
          ++count;
          break;
        }
      }
    }
    return count;
  };

  auto descend = [&](auto&& self, std::size_t j, int covered) -> void {
    if (++nodes > cap)
    {
      throw CapExceeded("coverage optimum search", cap);
    }
    if (j == m)
    {
      if (covered > best)
      {
        best       = covered;
        best_owner = owner;
      }
      return;
    }
    if (covered + reachable(j) <= best)
    {
      return;
    }
    for (auto i : candidates[j])
    {
      double s = instance.skill(i, j);
      if (load[i] + s > limit)
      {
        continue;
      }
      load[i] += s;
      owner[j] = static_cast<long>(i);
      self(self, j + 1, covered + 1);
      owner[j] = -1;
      load[i] -= s;
      if (best == static_cast<int>(m))
      {
        return;
      }
    }
    self(self, j + 1, covered);
  };
  descend(descend, 0, 0);

  CoverageOptResult result{instance.zero_profile(), {}, best};
  for (std::size_t j = 0; j < m; ++j)
  {
    if (best_owner[j] >= 0)
    {
      result.assignment(static_cast<std::size_t>(best_owner[j]), j) = Quality::good;
      result.covered.push_back(j);
    }
  }
  return result;
}

// Greedy Set Construction: repeatedly take the agent of D whose reviews in
// `opt_assignment` cover the most still-uncovered proposals of S. Ties go to
// the smallest agent index. Returns D* in selection order.
inline std::vector<std::size_t> greedy_set_construction(const std::vector<std::size_t>& D,
                                                        const std::vector<std::size_t>& S,
                                                        const StrategyProfile&          opt_assignment)
{
  std::set<std::size_t>    remaining(S.begin(), S.end());
  std::set<std::size_t>    pool(D.begin(), D.end());
  std::vector<std::size_t> chosen;
  while (!remaining.empty())
  {
    std::size_t best_agent = 0;
    std::size_t best_gain  = 0;
    for (auto i : pool)
    {
      std::size_t gain = 0;
      for (auto j : remaining)
      {
        gain += opt_assignment(i, j) != Quality::none;
      }
      if (gain > best_gain)
      {
        best_gain  = gain;
        best_agent = i;
      }
    }
    if (best_gain == 0)
    {
      throw std::invalid_argument("the agents in D do not cover S in the given assignment");
    }
    pool.erase(best_agent);
    chosen.push_back(best_agent);
    for (std::size_t j = 0; j < opt_assignment.cols(); ++j)
    {
      if (opt_assignment(best_agent, j) != Quality::none)
      {
        remaining.erase(j);
      }
    }
  }
  return chosen;
}

}  // namespace propreward
