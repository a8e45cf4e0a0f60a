#pragma once

#include "propreward/equilibria.hpp"
#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"
#include "propreward/pne_search.hpp"
#include "propreward/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

enum class BoundKind
{
  none,
  ratio,      // opt / worst <= bound
  composite,  // min PNE >= (opt - additive) / bound
};

inline std::string to_string(BoundKind kind)
{
  switch (kind)
  {
  case BoundKind::ratio:
    return "ratio";
  case BoundKind::composite:
    return "composite";
  case BoundKind::none:
    break;
  }
  return "none";
}

struct PoAExperiment
{
  std::string instance_id;
  Objective   objective{Objective::quality};
  double      k{1.0};

  double                opt_value{0.0};  // OPT_T for quality, cOPT(B) for coverage
  std::optional<double> opt_without_T;   // OPT, single proposal quality only

  std::vector<double> pne_values;  // every PNE when `exhaustive`, else the worst only
  bool                exhaustive{true};
  std::size_t         pne_count{0};  // 0 when not exhaustive

  double worst_pne{std::numeric_limits<double>::quiet_NaN()};  // smallest positive PNE objective
  double min_pne{std::numeric_limits<double>::quiet_NaN()};    // smallest PNE objective, zero included
  double worst_ratio{std::numeric_limits<double>::quiet_NaN()};
  bool   degenerate{false};  // some PNE has objective 0
  bool   no_pne{false};      // the search proved there is none (alpha alphabet only)

  BoundKind           bound_kind{BoundKind::none};
  double              bound{std::numeric_limits<double>::quiet_NaN()};
  double              additive{0.0};
  bool                bound_holds{true};
  std::optional<bool> sharp_holds;  // x >= (OPT_T - alpha)/4 when x >= 2 and i* >= 6

  // coverage with k >= 2: proposals covered by the optimum but not by the
  // worst PNE, and the Greedy Set Construction subset covering them
  std::optional<std::size_t> uncovered_by_pne;
  std::optional<std::size_t> cover_subset_size;

  std::optional<StrategyProfile> worst_profile;
};

namespace detail {

struct PneValues
{
  std::vector<double>            values;
  bool                           exhaustive{true};
  double                         worst{std::numeric_limits<double>::infinity()};
  bool                           zero{false};
  std::optional<StrategyProfile> worst_profile;
};

inline PneValues collect_pne(const Instance& game, Objective objective, unsigned long long cap)
{
  PneValues out;
  try
  {
    PneSearch search(game, cap);
    search.for_each([&](const StrategyProfile& q) {
      double v = objective_value(game, q, objective);
      out.values.push_back(v);
      if (v <= 0.0)
      {
        out.zero = true;
      }
      else if (v < out.worst)
      {
        out.worst         = v;
        out.worst_profile = q;
      }
    });
    return out;
  }
  catch (const CapExceeded&)
  {
  }
  // Too many PNE to list; branch-and-bound for the worst one is still exact.
  // A cheaply found equilibrium seeds the incumbent.
  std::optional<StrategyProfile> seed;
  if (!game.alphabet().has_excellent())
  {
    auto settled = best_response_dynamics(game, game.zero_profile(), Schedule::round_robin(), cap);
    seed         = std::move(settled.report.profile);
  }
  else if (game.proposals() == 1)
  {
    // may not be an equilibrium: the alpha game can lack one entirely
    seed = fixpoint_construct(game).profile;
    if (!verify_pne(game, *seed, cap).is_pne)
    {
      seed.reset();
    }
  }
  if (seed && !verify_pne(game, *seed, cap).is_pne)
  {
    throw DefectError("seed profile for the worst-equilibrium search is not an equilibrium");
  }
  PneSearch search(game, cap);
  auto      worst = search.worst(objective, seed);
  out.values.clear();
  out.exhaustive    = false;
  out.worst         = worst.value;
  out.zero          = worst.zero_profile_is_pne;
  out.worst_profile = worst.profile;
  if (worst.profile)
  {
    out.values.push_back(worst.value);
  }
  if (worst.zero_profile_is_pne)
  {
    out.values.push_back(0.0);
  }
  return out;
}

}  // namespace detail

// Optimum under budget B against equilibria under budget k*B.
//   quality, {0,1}, single proposal, k = 1:  opt / worst <= 2
//   quality, {0,1,alpha}, single proposal, k = 1:  min PNE >= (OPT_T - 6 alpha) / 4
//   coverage, {0,1}, k >= 2:  min PNE >= cOPT(B) / 3
// Other combinations are measured without a bound.
inline PoAExperiment measure_poa(const Instance& instance, Objective objective, double k = 1.0,
                                 unsigned long long cap = kDefaultCap, std::string instance_id = {})
{
  if (!(k >= 1.0))
  {
    throw std::invalid_argument("budget augmentation factor must be >= 1");
  }
  const double tol = instance.tolerance();

  PoAExperiment exp;
  exp.instance_id = std::move(instance_id);
  exp.objective   = objective;
  exp.k           = k;

  std::optional<CoverageOptResult> cover;
  if (objective == Objective::quality)
  {
    if (instance.proposals() != 1)
    {
      throw std::invalid_argument("the quality experiment needs a single proposal");
    }
    exp.opt_value = greedy_quality_opt(instance, true).value;
    if (instance.alphabet().has_excellent())
    {
      exp.opt_without_T = greedy_quality_opt(instance, false).value;
    }
  }
  else
  {
    if (instance.alphabet().has_excellent())
    {
      throw std::invalid_argument("the coverage experiment needs the {0,1} alphabet");
    }
    cover         = coverage_opt(instance, cap);
    exp.opt_value = cover->value;
  }

  const Instance game  = k == 1.0 ? instance : instance.with_budget(k * instance.budget());
  auto           found = detail::collect_pne(game, objective, cap);
  exp.pne_values       = found.values;
  exp.exhaustive       = found.exhaustive;
  exp.pne_count        = found.exhaustive ? found.values.size() : 0;
  exp.degenerate       = found.zero;
  exp.worst_profile    = found.worst_profile;
  if (found.worst_profile)
  {
    exp.worst_pne   = found.worst;
    exp.worst_ratio = exp.opt_value / found.worst;
  }
  if (found.zero)
  {
    exp.min_pne = 0.0;
  }
  else if (found.worst_profile)
  {
    exp.min_pne = found.worst;
  }
  if (found.values.empty())
  {
    // the potential guarantees an equilibrium on {0,1}; with alpha the game
    // can cycle, and a bound over an empty set holds vacuously
    if (!instance.alphabet().has_excellent())
    {
      throw DefectError("no pure Nash equilibrium found");
    }
    exp.no_pne = true;
  }

  if (objective == Objective::quality && k == 1.0)
  {
    if (!instance.alphabet().has_excellent())
    {
      exp.bound_kind  = BoundKind::ratio;
      exp.bound       = 2.0;
      exp.bound_holds = !found.worst_profile || exp.worst_ratio <= 2.0 + tol;
    }
    else
    {
      const double alpha = instance.alphabet().top_effort();
      exp.bound_kind     = BoundKind::composite;
      exp.bound          = 4.0;
      exp.additive       = 6.0 * alpha;
      exp.bound_holds    = exp.no_pne || exp.min_pne >= (exp.opt_value - exp.additive) / 4.0 - tol;
      if (exp.min_pne >= 2.0 && excellent_prefix(instance) >= 6)
      {
        exp.sharp_holds = exp.min_pne >= (exp.opt_value - alpha) / 4.0 - tol;
      }
    }
  }
  else if (objective == Objective::coverage && k >= 2.0)
  {
    exp.bound_kind  = BoundKind::ratio;
    exp.bound       = 3.0;
    exp.bound_holds = exp.min_pne >= exp.opt_value / 3.0 - tol;

    if (found.worst_profile)
    {
      const auto&              pne = *found.worst_profile;
      std::vector<std::size_t> S, D;
      for (auto j : cover->covered)
      {
        bool reviewed = false;
        for (std::size_t i = 0; i < pne.rows(); ++i)
        {
          reviewed = reviewed || pne(i, j) != Quality::none;
        }
        if (!reviewed)
        {
          S.push_back(j);
        }
      }
      for (std::size_t i = 0; i < instance.agents(); ++i)
      {
        for (auto j : S)
        {
          if (cover->assignment(i, j) != Quality::none)
          {
            D.push_back(i);
            break;
          }
        }
      }
      exp.uncovered_by_pne  = S.size();
      exp.cover_subset_size = greedy_set_construction(D, S, cover->assignment).size();
    }
  }
  return exp;
}

}  // namespace propreward
