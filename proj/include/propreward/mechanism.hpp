#pragma once

#include "propreward/instance.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

struct PaymentResult
{
  Matrix<double>      payments;  // p_ij
  std::vector<double> agent_totals;
  std::vector<double> costs;
  std::vector<double> utilities;
};

// Sum over proposals of f(q_ij) * s_ij.
inline double effort_cost(const Instance& instance, const StrategyProfile& q, std::size_t agent)
{
  check_agent(instance, agent);
  const auto& alphabet = instance.alphabet();
  double      total    = 0.0;
  for (std::size_t j = 0; j < instance.proposals(); ++j)
  {
    total += alphabet.effort(q(agent, j)) * instance.skill(agent, j);
  }
  return total;
}

inline std::vector<bool> is_max_effort_feasible(const Instance& instance, const StrategyProfile& q)
{
  check_profile(instance, q);
  std::vector<bool> feasible(instance.agents());
  for (std::size_t i = 0; i < instance.agents(); ++i)
  {
    feasible[i] = effort_cost(instance, q, i) <= instance.time_horizon() + instance.tolerance();
  }
  return feasible;
}

inline bool all_max_effort_feasible(const Instance& instance, const StrategyProfile& q)
{
  for (bool ok : is_max_effort_feasible(instance, q))
  {
    if (!ok)
    {
      return false;
    }
  }
  return true;
}

// One agent's share of a proposal's budget when they put in `effort` and the
// others together put in `others`. An unreviewed proposal pays nobody.
inline double proportional_share(double beta, double effort, double others) noexcept
{
  if (effort <= 0.0)
  {
    return 0.0;
  }
  return beta * effort / (others + effort);
}

inline PaymentResult proportional_payments(const Instance& instance, const StrategyProfile& q)
{
  check_profile(instance, q);
  const auto  n        = instance.agents();
  const auto  m        = instance.proposals();
  const auto& alphabet = instance.alphabet();
  const auto  beta     = instance.per_proposal_budget();

  PaymentResult result{Matrix<double>(n, m, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                       std::vector<double>(n, 0.0)};

  for (std::size_t j = 0; j < m; ++j)
  {
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      column += alphabet.effort(q(i, j));
    }
    if (column <= 0.0)
    {
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      result.payments(i, j) = beta * alphabet.effort(q(i, j)) / column;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < m; ++j)
    {
      result.agent_totals[i] += result.payments(i, j);
    }
    result.costs[i]     = effort_cost(instance, q, i);
    result.utilities[i] = result.agent_totals[i] - result.costs[i];
  }
  return result;
}

inline double utility(const Instance& instance, const StrategyProfile& q, std::size_t agent)
{
  check_agent(instance, agent);
  return proportional_payments(instance, q).utilities[agent];
}

// Qual: sum of review qualities, excellent reviews counting alpha. Computed
// from integer level counts so the only rounding is the final multiply.
inline double quality_objective(const QualityAlphabet& alphabet, const StrategyProfile& q)
{
  long long good = 0, excellent = 0;
  for (Quality level : q.data())
  {
    good += level == Quality::good;
    excellent += level == Quality::excellent;
  }
  return static_cast<double>(good) + static_cast<double>(excellent) * alphabet.top_effort();
}

inline double quality_objective(const Instance& instance, const StrategyProfile& q)
{
  return quality_objective(instance.alphabet(), q);
}

// Cov: proposals with at least one review.
inline int coverage_objective(const StrategyProfile& q)
{
  int covered = 0;
  for (std::size_t j = 0; j < q.cols(); ++j)
  {
    for (std::size_t i = 0; i < q.rows(); ++i)
    {
      if (q(i, j) != Quality::none)
      {
        ++covered;
        break;
      }
    }
  }
  return covered;
}

// Non-strategic feasibility: the reviews could be bought at cost within each
// proposal's budget, and every agent stays within the time horizon.
inline bool is_ns_feasible(const Instance& instance, const StrategyProfile& q)
{
  check_profile(instance, q);
  const auto& alphabet = instance.alphabet();
  const auto  beta     = instance.per_proposal_budget();
  for (std::size_t j = 0; j < instance.proposals(); ++j)
  {
    double cost = 0.0;
    for (std::size_t i = 0; i < instance.agents(); ++i)
    {
      cost += instance.skill(i, j) * alphabet.effort(q(i, j));
    }
    if (cost > beta + instance.tolerance())
    {
      return false;
    }
  }
  return all_max_effort_feasible(instance, q);
}

enum class Objective
{
  quality,
  coverage,
};

inline std::string to_string(Objective objective) { return objective == Objective::quality ? "quality" : "coverage"; }

inline Objective parse_objective(const std::string& text)
{
  if (text == "quality")
  {
    return Objective::quality;
  }
  if (text == "coverage")
  {
    return Objective::coverage;
  }
  throw std::invalid_argument("unknown objective '" + text + "'");
}

inline double objective_value(const Instance& instance, const StrategyProfile& q, Objective objective)
{
  return objective == Objective::quality ? quality_objective(instance, q) : static_cast<double>(coverage_objective(q));
}

}  // namespace propreward
