#pragma once

#include "propreward.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace support {

using namespace propreward;

inline StrategyProfile profile(std::initializer_list<std::initializer_list<int>> rows)
{
  std::vector<Quality> cells;
  std::size_t          m = rows.begin()->size();
  for (const auto& row : rows)
  {
    for (int code : row)
    {
      cells.push_back(static_cast<Quality>(code));
    }
  }
  return StrategyProfile(rows.size(), m, cells);
}

inline Instance single(std::vector<double> skills, double B, double T, QualityAlphabet alphabet)
{
  std::size_t n = skills.size();
  return Instance{Matrix<double>(n, 1, std::move(skills)), B, T, alphabet};
}

inline QualityAlphabet alpha_of(long long a) { return QualityAlphabet::zero_one_alpha(Alpha::ratio(a, 1)); }

// A random instance with its shape, budget and horizon drawn from `seed`.
inline Instance random_game(std::uint64_t seed, std::size_t n_max, std::size_t m_max, const QualityAlphabet& alphabet,
                            double T_lo = 0.3, double T_hi = 2.0)
{
  std::mt19937_64 rng(seed);
  auto            n    = std::uniform_int_distribution<std::size_t>(1, n_max)(rng);
  auto            m    = std::uniform_int_distribution<std::size_t>(1, m_max)(rng);
  double          beta = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  double          T    = std::uniform_real_distribution<double>(T_lo, T_hi)(rng);
  return gen_random_instance(rng(), n, m, alphabet, SkillDistribution::uniform(0.05, 1.0),
                             beta * static_cast<double>(m), T);
}

inline StrategyProfile random_profile(const Instance& g, std::mt19937_64& rng)
{
  StrategyProfile q = g.zero_profile();
  auto            levels = g.alphabet().levels();
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  for (std::size_t i = 0; i < g.agents(); ++i)
  {
    for (std::size_t j = 0; j < g.proposals(); ++j)
    {
      q(i, j) = levels[pick(rng)];
    }
  }
  return q;
}

// A random profile that meets the maximum effort constraint: each agent's
// row is redrawn until it fits, falling back to the empty row.
inline StrategyProfile random_feasible_profile(const Instance& g, std::mt19937_64& rng)
{
  StrategyProfile q = random_profile(g, rng);
  for (std::size_t i = 0; i < g.agents(); ++i)
  {
    for (int attempt = 0; effort_cost(g, q, i) > g.time_horizon() + g.tolerance(); ++attempt)
    {
      StrategyProfile fresh = random_profile(g, rng);
      for (std::size_t j = 0; j < g.proposals(); ++j)
      {
        q(i, j) = attempt < 8 ? fresh(i, j) : Quality::none;
      }
    }
  }
  return q;
}

}  // namespace support
