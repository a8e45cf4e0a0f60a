#pragma once

// Brute-force reference implementations used by the tests. They read only
// the raw instance data and deliberately share no code with the library's
// payment, search or solver routines.

#include "propreward/instance.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using propreward::Instance;
using propreward::Quality;
using propreward::StrategyProfile;

inline std::vector<Quality> levels_of(const Instance& g)
{
  if (g.alphabet().has_excellent())
  {
    return {Quality::none, Quality::good, Quality::excellent};
  }
  return {Quality::none, Quality::good};
}

inline double effort_of(const Instance& g, Quality q)
{
  switch (q)
  {
  case Quality::none:
    return 0.0;
  case Quality::good:
    return 1.0;
  case Quality::excellent:
    return g.alphabet().alpha()->value();
  }
  return 0.0;
}

inline double cost_of(const Instance& g, const StrategyProfile& q, std::size_t i)
{
  double c = 0.0;
  for (std::size_t j = 0; j < g.proposals(); ++j)
  {
    c += effort_of(g, q(i, j)) * g.skill(i, j);
  }
  return c;
}

inline double payment_of(const Instance& g, const StrategyProfile& q, std::size_t i, std::size_t j)
{
  double mine = effort_of(g, q(i, j));
  if (mine == 0.0)
  {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < g.agents(); ++a)
  {
    total += effort_of(g, q(a, j));
  }
  return g.budget() / static_cast<double>(g.proposals()) * mine / total;
}

inline double utility_of(const Instance& g, const StrategyProfile& q, std::size_t i)
{
  double u = 0.0;
  for (std::size_t j = 0; j < g.proposals(); ++j)
  {
    u += payment_of(g, q, i, j);
  }
  return u - cost_of(g, q, i);
}

inline bool time_feasible(const Instance& g, const StrategyProfile& q, std::size_t i)
{
  return cost_of(g, q, i) <= g.time_horizon() + g.tolerance();
}

// Odometer over alphabet^(cells); the last cell moves fastest, so profiles
// come out in row-major lexicographic order.
inline void for_each_assignment(std::size_t cells, const std::vector<Quality>& levels,
                                const std::function<void(const std::vector<Quality>&)>& visit)
{
  std::vector<std::size_t> digit(cells, 0);
  std::vector<Quality>     value(cells, levels[0]);
  while (true)
  {
    visit(value);
    std::size_t c = cells;
    while (c > 0)
    {
      --c;
      if (++digit[c] < levels.size())
      {
        value[c] = levels[digit[c]];
        break;
      }
      digit[c] = 0;
      value[c] = levels[0];
      if (c == 0)
      {
        return;
      }
    }
    if (cells == 0)
    {
      return;
    }
  }
}

inline void for_each_profile(const Instance& g, const std::function<void(const StrategyProfile&)>& visit)
{
  const auto n = g.agents(), m = g.proposals();
  for_each_assignment(n * m, levels_of(g), [&](const std::vector<Quality>& cells) {
    visit(StrategyProfile(n, m, cells));
  });
}

// Best utility agent i can reach by rewriting their whole row.
inline double best_row_utility(const Instance& g, const StrategyProfile& q, std::size_t i)
{
  double          best = -INFINITY;
  StrategyProfile alt  = q;
  for_each_assignment(g.proposals(), levels_of(g), [&](const std::vector<Quality>& row) {
    for (std::size_t j = 0; j < g.proposals(); ++j)
    {
      alt(i, j) = row[j];
    }
    if (time_feasible(g, alt, i))
    {
      best = std::max(best, utility_of(g, alt, i));
    }
  });
  return best;
}

inline bool is_pne(const Instance& g, const StrategyProfile& q)
{
  for (std::size_t i = 0; i < g.agents(); ++i)
  {
    if (!time_feasible(g, q, i) || best_row_utility(g, q, i) > utility_of(g, q, i) + g.tolerance())
    {
      return false;
    }
  }
  return true;
}

inline std::vector<StrategyProfile> all_pne(const Instance& g)
{
  std::vector<StrategyProfile> out;
  for_each_profile(g, [&](const StrategyProfile& q) {
    if (is_pne(g, q))
    {
      out.push_back(q);
    }
  });
  return out;
}

inline double quality_of(const Instance& g, const StrategyProfile& q)
{
  double v = 0.0;
  for (Quality c : q.data())
  {
    v += effort_of(g, c);
  }
  return v;
}

inline int coverage_of(const StrategyProfile& q)
{
  int covered = 0;
  for (std::size_t j = 0; j < q.cols(); ++j)
  {
    bool any = false;
    for (std::size_t i = 0; i < q.rows(); ++i)
    {
      any = any || q(i, j) != Quality::none;
    }
    covered += any;
  }
  return covered;
}

// Sum over proposals of beta * H_k - (skills of the k reviewers).
inline double potential_of(const Instance& g, const StrategyProfile& q)
{
  const double beta = g.budget() / static_cast<double>(g.proposals());
  double       phi  = 0.0;
  for (std::size_t j = 0; j < g.proposals(); ++j)
  {
    int k = 0;
    for (std::size_t i = 0; i < g.agents(); ++i)
    {
      if (q(i, j) != Quality::none)
      {
        ++k;
        phi -= g.skill(i, j);
      }
    }
    for (int h = 1; h <= k; ++h)
    {
      phi += beta / h;
    }
  }
  return phi;
}

inline bool ns_feasible(const Instance& g, const StrategyProfile& q)
{
  const double beta = g.budget() / static_cast<double>(g.proposals());
  for (std::size_t j = 0; j < g.proposals(); ++j)
  {
    double c = 0.0;
    for (std::size_t i = 0; i < g.agents(); ++i)
    {
      c += effort_of(g, q(i, j)) * g.skill(i, j);
    }
    if (c > beta + g.tolerance())
    {
      return false;
    }
  }
  for (std::size_t i = 0; i < g.agents(); ++i)
  {
    if (!time_feasible(g, q, i))
    {
      return false;
    }
  }
  return true;
}

// Best alpha|E| + |G| on a single proposal, over every quality assignment.
inline double best_quality(const Instance& g, bool enforce_T)
{
  double best = 0.0;
  for_each_profile(g, [&](const StrategyProfile& q) {
    double cost = 0.0;
    bool   ok   = true;
    for (std::size_t i = 0; i < g.agents(); ++i)
    {
      double c = effort_of(g, q(i, 0)) * g.skill(i, 0);
      cost += c;
      ok = ok && (!enforce_T || c <= g.time_horizon() + g.tolerance());
    }
    if (ok && cost <= g.budget() + g.tolerance())
    {
      best = std::max(best, quality_of(g, q));
    }
  });
  return best;
}

inline int best_coverage(const Instance& g)
{
  int best = 0;
  for_each_profile(g, [&](const StrategyProfile& q) {
    if (ns_feasible(g, q))
    {
      best = std::max(best, coverage_of(q));
    }
  });
  return best;
}

// Smallest subset of D whose rows of `assignment` cover every proposal in S.
inline std::size_t min_cover(const std::vector<std::size_t>& D, const std::vector<std::size_t>& S,
                             const StrategyProfile& assignment)
{
  std::size_t best = D.size() + 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << D.size()); ++mask)
  {
    bool ok = true;
    for (auto j : S)
    {
      bool hit = false;
      for (std::size_t t = 0; t < D.size(); ++t)
      {
        hit = hit || ((mask >> t & 1) && assignment(D[t], j) != Quality::none);
      }
      ok = ok && hit;
    }
    if (ok)
    {
      best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
    }
  }
  return best;
}

}  // namespace oracle
