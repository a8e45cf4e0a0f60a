#pragma once

#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"
#include "propreward/pne_search.hpp"
#include "propreward/strategy_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

struct Deviation
{
  std::size_t          agent{0};
  std::vector<Quality> new_row;
  double               utility_gain{0.0};
};

struct EquilibriumReport
{
  StrategyProfile          profile;
  bool                     is_pne{false};
  std::optional<Deviation> witness;
  double                   qual{0.0};
  int                      cov{0};
  std::optional<double>    potential;  // binary alphabet only
};

// H_k
inline double harmonic(std::size_t k)
{
  double h = 0.0;
  for (std::size_t t = 1; t <= k; ++t)
  {
    h += 1.0 / static_cast<double>(t);
  }
  return h;
}

// Exact potential of the binary game: sum over proposals of
// beta * H_k - (skills of the k reviewers).
inline double potential(const Instance& instance, const StrategyProfile& q)
{
  if (instance.alphabet().has_excellent())
  {
    throw std::invalid_argument("the potential is defined for the {0,1} alphabet only");
  }
  check_profile(instance, q);
  const double beta  = instance.per_proposal_budget();
  double       total = 0.0;
  for (std::size_t j = 0; j < instance.proposals(); ++j)
  {
    std::size_t k     = 0;
    double      skill = 0.0;
    for (std::size_t i = 0; i < instance.agents(); ++i)
    {
      if (q(i, j) == Quality::good)
      {
        ++k;
        skill += instance.skill(i, j);
      }
    }
    total += beta * harmonic(k) - skill;
  }
  return total;
}

// Best feasible row against q_{-i}, or nothing if the current row already
// attains the maximum within tolerance. Indifferent agents stay put.
inline std::optional<Deviation> best_response(const Instance& instance, const StrategyProfile& q, std::size_t agent,
                                              unsigned long long cap = kDefaultCap)
{
  check_agent(instance, agent);
  check_profile(instance, q);
  const auto others  = others_effort(instance, q, agent);
  const Row  current = make_row(instance, agent, q.row(agent));
  const auto base    = row_utility(instance, current, others);

  const Row* best       = nullptr;
  double     best_value = base;
  auto       rows       = feasible_rows(instance, agent, cap);
  for (const Row& row : rows)
  {
    double value = row_utility(instance, row, others);
    if (value > best_value)
    {
      best_value = value;
      best       = &row;
    }
  }
  if (best == nullptr || best_value - base <= instance.tolerance())
  {
    return std::nullopt;
  }
  return Deviation{agent, best->levels, best_value - base};
}

inline EquilibriumReport make_report(const Instance& instance, StrategyProfile q, bool is_pne,
                                     std::optional<Deviation> witness)
{
  EquilibriumReport report;
  report.qual    = quality_objective(instance, q);
  report.cov     = coverage_objective(q);
  report.is_pne  = is_pne;
  report.witness = std::move(witness);
  if (!instance.alphabet().has_excellent())
  {
    report.potential = potential(instance, q);
  }
  report.profile = std::move(q);
  return report;
}

// The witness, when present, is a largest-gain deviation (smallest agent
// index on ties).
inline EquilibriumReport verify_pne(const Instance& instance, const StrategyProfile& q,
                                    unsigned long long cap = kDefaultCap)
{
  check_profile(instance, q);
  if (!all_max_effort_feasible(instance, q))
  {
    throw std::invalid_argument("profile violates the maximum effort constraint");
  }
  std::optional<Deviation> witness;
  for (std::size_t i = 0; i < instance.agents(); ++i)
  {
    auto deviation = best_response(instance, q, i, cap);
    if (deviation && (!witness || deviation->utility_gain > witness->utility_gain))
    {
      witness = std::move(deviation);
    }
  }
  bool is_pne = !witness.has_value();
  return make_report(instance, q, is_pne, std::move(witness));
}

// All pure Nash equilibria in lexicographic order. The cap bounds the search
// nodes visited; exceeding it throws rather than truncating.
inline std::vector<EquilibriumReport> enumerate_pne(const Instance& instance, unsigned long long cap = kDefaultCap)
{
  std::vector<EquilibriumReport> result;
  PneSearch                      search(instance, cap);
  search.for_each([&](StrategyProfile q) { result.push_back(make_report(instance, std::move(q), true, std::nullopt)); });
  return result;
}

// ---------------------------------------------------------------------------
// Single proposal {0,1,alpha}: fixpoint construction.

struct FixpointState
{
  std::vector<std::size_t> excellent;  // original agent indices, ascending
  std::vector<std::size_t> good;
  std::vector<std::size_t> none;

  friend bool operator==(const FixpointState&, const FixpointState&) = default;
};

struct FixpointResult
{
  FixpointState              state;
  StrategyProfile            profile;
  std::vector<FixpointState> history;     // states g^0, g^1, ..., fixpoint
  std::vector<std::size_t>   skill_rank;  // agents by ascending skill
  std::size_t                initial_good{0};  // i^lambda
};

inline FixpointResult fixpoint_construct(const Instance& instance)
{
  if (instance.proposals() != 1)
  {
    throw std::invalid_argument("fixpoint construction needs a single proposal");
  }
  const auto   n     = instance.agents();
  const double beta  = instance.per_proposal_budget();
  const double alpha = instance.alphabet().top_effort();
  const double T     = instance.time_horizon();
  const double tol   = instance.tolerance();
  const bool   has_e = instance.alphabet().has_excellent();

  FixpointResult result;
  result.skill_rank = skill_order(instance);
  const auto& rank  = result.skill_rank;
  auto        skill = [&](std::size_t r) { return instance.skill(rank[r], 0); };

  // i^lambda: largest rank (1-based) with s <= beta / rank among agents who
  // can afford a good review at all.
  std::size_t lambda = 0;
  for (std::size_t r = 0; r < n; ++r)
  {
    if (skill(r) <= beta / static_cast<double>(r + 1) + tol && skill(r) <= T + tol)
    {
      lambda = r + 1;
    }
  }
  result.initial_good = lambda;

  // Work on ranks; E and G stay contiguous with E before G.
  std::vector<std::size_t> E, G, Z;
  for (std::size_t r = 0; r < n; ++r)
  {
    (r < lambda ? G : Z).push_back(r);
  }

  auto snapshot = [&]() {
    FixpointState s;
    for (auto r : E)
    {
      s.excellent.push_back(rank[r]);
    }
    for (auto r : G)
    {
      s.good.push_back(rank[r]);
    }
    for (auto r : Z)
    {
      s.none.push_back(rank[r]);
    }
    std::sort(s.excellent.begin(), s.excellent.end());
    std::sort(s.good.begin(), s.good.end());
    std::sort(s.none.begin(), s.none.end());
    return s;
  };
  result.history.push_back(snapshot());

  const auto max_removals = static_cast<std::size_t>(std::ceil(alpha - 1.0 - 1e-12));
  double     weight       = static_cast<double>(G.size());
  while (has_e && !G.empty())
  {
    const std::size_t lead = G.front();
    const double      s    = skill(lead);
    if (alpha * s > T + tol)
    {
      break;  // nobody in G can afford an excellent review
    }
    double as_excellent = alpha * beta / (weight + alpha - 1.0) - alpha * s;
    double as_good      = beta / weight - s;
    if (as_excellent <= as_good + tol)
    {
      break;
    }
    G.erase(G.begin());
    E.push_back(lead);
    weight += alpha - 1.0;

    std::size_t removed = 0;
    while (!G.empty() && beta / weight - skill(G.back()) < -tol)
    {
      Z.push_back(G.back());
      G.pop_back();
      weight -= 1.0;
      ++removed;
    }
    if (removed > max_removals)
    {
      throw DefectError("fixpoint step removed more than alpha-1 good reviewers");
    }
    std::sort(Z.begin(), Z.end());
    result.history.push_back(snapshot());
  }

  result.state   = snapshot();
  result.profile = instance.zero_profile();
  for (auto i : result.state.excellent)
  {
    result.profile(i, 0) = Quality::excellent;
  }
  for (auto i : result.state.good)
  {
    result.profile(i, 0) = Quality::good;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Best-response dynamics on the binary game.

struct Schedule
{
  enum class Kind
  {
    round_robin,
    random,
  };

  Kind          kind{Kind::round_robin};
  std::uint64_t seed{0};

  static Schedule round_robin() { return {}; }
  static Schedule random(std::uint64_t seed) { return {Kind::random, seed}; }
};

struct TraceRecord
{
  std::size_t          iteration{0};
  std::size_t          agent{0};
  std::vector<Quality> new_row;
  double               delta_u{0.0};
  double               potential{0.0};  // after the move
};

struct DynamicsResult
{
  EquilibriumReport        report;
  std::vector<TraceRecord> trace;
  std::vector<double>      potentials;  // initial value, then one per move
};

inline DynamicsResult best_response_dynamics(const Instance& instance, const StrategyProfile& start,
                                             Schedule schedule = Schedule::round_robin(),
                                             unsigned long long cap = kDefaultCap)
{
  if (instance.alphabet().has_excellent())
  {
    throw std::invalid_argument("best-response dynamics need the {0,1} alphabet");
  }
  check_profile(instance, start);
  if (!all_max_effort_feasible(instance, start))
  {
    throw std::invalid_argument("start profile violates the maximum effort constraint");
  }
  const auto n         = instance.agents();
  const auto max_moves = saturating_pow(instance.alphabet().size(), n * instance.proposals());

  DynamicsResult result;
  StrategyProfile q = start;
  result.potentials.push_back(potential(instance, q));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(schedule.seed);

  std::size_t moves = 0;
  bool        moved = true;
  while (moved)
  {
    moved = false;
    if (schedule.kind == Schedule::Kind::random)
    {
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (std::size_t agent : order)
    {
      auto deviation = best_response(instance, q, agent, cap);
      if (!deviation)
      {
        continue;
      }
      if (++moves > max_moves)
      {
        throw DefectError("best-response dynamics exceeded the profile count");
      }
      for (std::size_t j = 0; j < instance.proposals(); ++j)
      {
        q(agent, j) = deviation->new_row[j];
      }
      double phi = potential(instance, q);
      if (!(phi > result.potentials.back()))
      {
        throw DefectError("potential did not increase along an improving move");
      }
      result.potentials.push_back(phi);
      result.trace.push_back({moves, agent, deviation->new_row, deviation->utility_gain, phi});
      moved = true;
    }
  }
  result.report = verify_pne(instance, q, cap);
  if (!result.report.is_pne)
  {
    throw DefectError("best-response dynamics stopped at a non-equilibrium");
  }
  return result;
}

inline std::string row_codes(const std::vector<Quality>& row)
{
  std::string text;
  for (Quality level : row)
  {
    text.push_back(static_cast<char>('0' + code_of(level)));
  }
  return text;
}

}  // namespace propreward
