#pragma once

#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"
#include "propreward/strategy_space.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace propreward {

struct WorstPne
{
  std::optional<StrategyProfile> profile;  // a minimiser among PNE with positive objective
  double                         value{std::numeric_limits<double>::infinity()};
  bool                           zero_profile_is_pne{false};
  unsigned long long             nodes{0};
};

// Depth-first search over profiles, one agent per level, each agent ranging
// over their time-feasible rows in lexicographic order. A partial profile is cut
// as soon as some assigned agent provably has an improving deviation whatever
// the unassigned agents do: their current payment is bounded above using only
// the assigned opponents, and a deviation's payment is bounded below by
// assuming every unassigned agent puts maximal effort on each proposal.
// At full depth both bounds coincide and the test is the exact PNE test.
class PneSearch
{
public:
  explicit PneSearch(const Instance& instance, unsigned long long cap = kDefaultCap)
    : instance_(instance)
    , cap_(cap)
    , n_(instance.agents())
    , m_(instance.proposals())
    , beta_(instance.per_proposal_budget())
    , tol_(instance.tolerance())
  {
    rows_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i)
    {
      rows_.push_back(feasible_rows(instance, i, cap));
    }
    // suffix_max_[a][j]: most effort agents a..n-1 could jointly put on j
    suffix_max_.assign(n_ + 1, std::vector<double>(m_, 0.0));
    for (std::size_t a = n_; a-- > 0;)
    {
      for (std::size_t j = 0; j < m_; ++j)
      {
        double best = 0.0;
        for (const Row& row : rows_[a])
        {
          best = std::max(best, row.effort[j]);
        }
        suffix_max_[a][j] = suffix_max_[a + 1][j] + best;
      }
    }
  }

  const std::vector<Row>& rows(std::size_t agent) const { return rows_.at(agent); }

  unsigned long long nodes() const noexcept { return nodes_; }

  // Calls visit(profile) for every PNE, in lexicographic order.
  template <typename Visit>
  void for_each(Visit&& visit)
  {
    reset();
    descend(0, [&](double) { return false; }, [&]() { visit(current_profile()); });
  }

  // Smallest objective value over PNE with a positive objective. Only the
  // zero profile can have objective 0; it is reported separately. A known
  // PNE with positive objective may be passed as the starting incumbent;
  // the caller vouches that it is an equilibrium.
  WorstPne worst(Objective objective, const std::optional<StrategyProfile>& incumbent = std::nullopt)
  {
    reset();
    WorstPne result;
    if (incumbent)
    {
      double value = objective_value(instance_, *incumbent, objective);
      if (value > 0.0)
      {
        result.value   = value;
        result.profile = incumbent;
      }
    }
    auto     prune = [&](double partial) { return partial >= result.value; };
    auto     leaf  = [&]() {
      double value = partial_objective(objective);
      if (value <= 0.0)
      {
        result.zero_profile_is_pne = true;
        return;
      }
      if (value < result.value)
      {
        result.value   = value;
        result.profile = current_profile();
      }
    };
    objective_ = objective;
    descend(0, prune, leaf);
    result.nodes = nodes_;
    return result;
  }

private:
  void reset()
  {
    nodes_ = 0;
    choice_.assign(n_, 0);
    column_.assign(m_, 0.0);
    quality_sum_ = 0.0;
  }

  template <typename Prune, typename Leaf>
  void descend(std::size_t depth, Prune&& prune, Leaf&& leaf)
  {
    if (depth == n_)
    {
      leaf();
      return;
    }
    for (std::size_t r = 0; r < rows_[depth].size(); ++r)
    {
      if (++nodes_ > cap_)
      {
        throw CapExceeded("equilibrium search", cap_);
      }
      assign(depth, r);
      if (stable_prefix(depth + 1) && !prune(partial_objective(objective_)))
      {
        descend(depth + 1, prune, leaf);
      }
      unassign(depth);
    }
  }

  void assign(std::size_t agent, std::size_t r)
  {
    choice_[agent]  = r;
    const Row& row  = rows_[agent][r];
    for (std::size_t j = 0; j < m_; ++j)
    {
      column_[j] += row.effort[j];
    }
    quality_sum_ += row.quality;
  }

  void unassign(std::size_t agent)
  {
    const Row& row = rows_[agent][choice_[agent]];
    for (std::size_t j = 0; j < m_; ++j)
    {
      column_[j] -= row.effort[j];
    }
    quality_sum_ -= row.quality;
  }

  double partial_objective(Objective objective) const
  {
    if (objective == Objective::quality)
    {
      return quality_sum_;
    }
    double covered = 0.0;
    for (double c : column_)
    {
      covered += c > 0.0 ? 1.0 : 0.0;
    }
    return covered;
  }

  // Agents 0..assigned-1 are fixed.
  bool stable_prefix(std::size_t assigned)
  {
    const auto& extra = suffix_max_[assigned];
    for (std::size_t i = assigned; i-- > 0;)
    {
      const Row& cur = rows_[i][choice_[i]];
      for (std::size_t j = 0; j < m_; ++j)
      {
        // cancel the column sum exactly when nobody else reviews j
        others_min_[j] = std::max(0.0, column_[j] - cur.effort[j]);
        if (others_min_[j] < 1e-12)
        {
          others_min_[j] = 0.0;
        }
        others_max_[j] = others_min_[j] + extra[j];
      }
      double upper = row_utility(beta_, cur.effort, cur.cost, others_min_);
      for (const Row& alt : rows_[i])
      {
        if (row_utility(beta_, alt.effort, alt.cost, others_max_) > upper + tol_)
        {
          return false;
        }
      }
    }
    return true;
  }

  StrategyProfile current_profile() const
  {
    StrategyProfile q(n_, m_, Quality::none);
    for (std::size_t i = 0; i < n_; ++i)
    {
      const Row& row = rows_[i][choice_[i]];
      for (std::size_t j = 0; j < m_; ++j)
      {
        q(i, j) = row.levels[j];
      }
    }
    return q;
  }

  const Instance&                  instance_;
  unsigned long long               cap_;
  std::size_t                      n_, m_;
  double                           beta_, tol_;
  std::vector<std::vector<Row>>    rows_;
  std::vector<std::vector<double>> suffix_max_;

  unsigned long long       nodes_{0};
  std::vector<std::size_t> choice_;
  std::vector<double>      column_;
  double                   quality_sum_{0.0};
  Objective                objective_{Objective::quality};

  std::vector<double> others_min_ = std::vector<double>(m_, 0.0);
  std::vector<double> others_max_ = std::vector<double>(m_, 0.0);
};

}  // namespace propreward
