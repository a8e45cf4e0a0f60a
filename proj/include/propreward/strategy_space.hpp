#pragma once

#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace propreward {

// One candidate strategy for an agent: a quality per proposal plus the
// derived effort vector, total cost and total quality.
struct Row
{
  std::vector<Quality> levels;
  std::vector<double>  effort;
  double               cost{0.0};
  double               quality{0.0};
};

// |alphabet|^exponent, saturating.
inline unsigned long long saturating_pow(unsigned long long base, std::size_t exponent)
{
  unsigned long long result = 1;
  for (std::size_t k = 0; k < exponent; ++k)
  {
    if (result > std::numeric_limits<unsigned long long>::max() / base)
    {
      return std::numeric_limits<unsigned long long>::max();
    }
    result *= base;
  }
  return result;
}

inline Row make_row(const Instance& instance, std::size_t agent, std::span<const Quality> levels)
{
  const auto& alphabet = instance.alphabet();
  Row         row;
  row.levels.assign(levels.begin(), levels.end());
  row.effort.resize(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j)
  {
    row.effort[j] = alphabet.effort(levels[j]);
    row.cost += row.effort[j] * instance.skill(agent, j);
    row.quality += alphabet.value(levels[j]);
  }
  return row;
}

// Every row of `agent` that respects the time horizon, in lexicographic order
// of quality codes with proposal 0 most significant. The all-zero row is
// always first.
inline std::vector<Row> feasible_rows(const Instance& instance, std::size_t agent,
                                      unsigned long long cap = kDefaultCap)
{
  check_agent(instance, agent);
  const auto  m        = instance.proposals();
  const auto& alphabet = instance.alphabet();
  const auto  limit    = instance.time_horizon() + instance.tolerance();

  std::vector<Row>     rows;
  std::vector<Quality> levels(m, Quality::none);
  unsigned long long   nodes = 0;

  auto descend = [&](auto&& self, std::size_t j, double cost) -> void {
    if (++nodes > cap)
    {
      throw CapExceeded("row enumeration for agent " + std::to_string(agent), cap);
    }
    if (j == m)
    {
      rows.push_back(make_row(instance, agent, levels));
      return;
    }
    for (Quality level : alphabet.levels())
    {
      double next = cost + alphabet.effort(level) * instance.skill(agent, j);
      if (next > limit)
      {
        continue;
      }
      levels[j] = level;
      self(self, j + 1, next);
    }
    levels[j] = Quality::none;
  };
  descend(descend, 0, 0.0);
  return rows;
}

// Total effort per proposal from every agent except `agent`.
inline std::vector<double> others_effort(const Instance& instance, const StrategyProfile& q, std::size_t agent)
{
  const auto&         alphabet = instance.alphabet();
  std::vector<double> others(instance.proposals(), 0.0);
  for (std::size_t i = 0; i < instance.agents(); ++i)
  {
    if (i == agent)
    {
      continue;
    }
    for (std::size_t j = 0; j < instance.proposals(); ++j)
    {
      others[j] += alphabet.effort(q(i, j));
    }
  }
  return others;
}

// Utility of playing `effort`/`cost` against fixed opponents.
inline double row_utility(double beta, std::span<const double> effort, double cost, std::span<const double> others)
{
  double pay = 0.0;
  for (std::size_t j = 0; j < effort.size(); ++j)
  {
    pay += proportional_share(beta, effort[j], others[j]);
  }
  return pay - cost;
}

inline double row_utility(const Instance& instance, const Row& row, std::span<const double> others)
{
  return row_utility(instance.per_proposal_budget(), row.effort, row.cost, others);
}

}  // namespace propreward
