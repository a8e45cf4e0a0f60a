#pragma once

#include "propreward/matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace propreward {

// Review quality: no review, a good review, or an excellent review. The integer
// value is the code used in serialized profiles.
enum class Quality : std::uint8_t
{
  none      = 0,
  good      = 1,
  excellent = 2,
};

inline constexpr std::uint8_t code_of(Quality q) noexcept { return static_cast<std::uint8_t>(q); }

// Quality of an excellent review relative to a good one. Kept as an exact
// ratio when constructed from one so that it serializes back unchanged.
class Alpha
{
public:
  Alpha() = default;

  static Alpha real(double value)
  {
    Alpha a;
    a.value_ = value;
    return a;
  }

  static Alpha ratio(long long num, long long den)
  {
    if (den <= 0)
    {
      throw std::invalid_argument("alpha ratio needs a positive denominator");
    }
    Alpha a;
    a.value_ = static_cast<double>(num) / static_cast<double>(den);
    a.ratio_ = std::pair{num, den};
    return a;
  }

  // Accepts "3", "2.5" or "7/2".
  static Alpha parse(const std::string& text)
  {
    auto slash = text.find('/');
    try
    {
      if (slash == std::string::npos)
      {
        std::size_t used = 0;
        double      v    = std::stod(text, &used);
        if (used != text.size())
        {
          throw std::invalid_argument(text);
        }
        return real(v);
      }
      std::size_t used_n = 0, used_d = 0;
      auto        num_text = text.substr(0, slash);
      auto        den_text = text.substr(slash + 1);
      long long   num      = std::stoll(num_text, &used_n);
      long long   den      = std::stoll(den_text, &used_d);
      if (used_n != num_text.size() || used_d != den_text.size())
      {
        throw std::invalid_argument(text);
      }
      return ratio(num, den);
    }
    catch (const std::logic_error&)
    {
      throw std::invalid_argument("cannot parse alpha '" + text + "'");
    }
  }

  double value() const noexcept { return value_; }
  const std::optional<std::pair<long long, long long>>& exact_ratio() const noexcept { return ratio_; }

  friend bool operator==(const Alpha&, const Alpha&) = default;

private:
  double                                         value_{2.0};
  std::optional<std::pair<long long, long long>> ratio_;
};

// The two quality alphabets studied: {0,1} and {0,1,alpha}. The effort map is
// f(0)=0, f(1)=1, f(alpha)=alpha and coincides with the quality value.
class QualityAlphabet
{
public:
  enum class Kind
  {
    zero_one,
    zero_one_alpha,
  };

  static QualityAlphabet zero_one() { return QualityAlphabet{Kind::zero_one, std::nullopt}; }

  static QualityAlphabet zero_one_alpha(Alpha alpha) { return QualityAlphabet{Kind::zero_one_alpha, alpha}; }

  Kind kind() const noexcept { return kind_; }
  bool has_excellent() const noexcept { return kind_ == Kind::zero_one_alpha; }

  const std::optional<Alpha>& alpha() const noexcept { return alpha_; }

  // alpha, or 1 for the binary alphabet
  double top_effort() const noexcept { return alpha_ ? alpha_->value() : 1.0; }

  std::size_t size() const noexcept { return has_excellent() ? 3 : 2; }

  std::span<const Quality> levels() const noexcept
  {
    static constexpr std::array<Quality, 3> all{Quality::none, Quality::good, Quality::excellent};
    return std::span<const Quality>(all.data(), size());
  }

  bool contains(Quality q) const noexcept { return q != Quality::excellent || has_excellent(); }

  double effort(Quality q) const noexcept
  {
    switch (q)
    {
    case Quality::none:
      return 0.0;
    case Quality::good:
      return 1.0;
    case Quality::excellent:
      return alpha_ ? alpha_->value() : 0.0;
    }
    return 0.0;
  }

  double value(Quality q) const noexcept { return effort(q); }

  std::string name() const { return has_excellent() ? "zero_one_alpha" : "zero_one"; }

  friend bool operator==(const QualityAlphabet&, const QualityAlphabet&) = default;

private:
  QualityAlphabet(Kind kind, std::optional<Alpha> alpha)
    : kind_(kind)
    , alpha_(alpha)
  {}

  Kind                 kind_;
  std::optional<Alpha> alpha_;
};

using StrategyProfile = Matrix<Quality>;

inline constexpr double kDefaultTolerance = 1e-9;

// Immutable description of one review game. Validation happens on
// construction; an Instance that exists is well formed.
class Instance
{
public:
  Instance(Matrix<double> skills, double budget, double time_horizon, QualityAlphabet alphabet,
           double tolerance = kDefaultTolerance)
    : skills_(std::move(skills))
    , budget_(budget)
    , time_horizon_(time_horizon)
    , alphabet_(std::move(alphabet))
    , tolerance_(tolerance)
  {
    if (skills_.rows() == 0 || skills_.cols() == 0)
    {
      throw std::invalid_argument("instance needs at least one agent and one proposal");
    }
    for (double s : skills_.data())
    {
      if (!(s > 0.0) || !std::isfinite(s))
      {
        throw std::invalid_argument("skills must be positive and finite");
      }
    }
    if (!(budget_ > 0.0) || !std::isfinite(budget_))
    {
      throw std::invalid_argument("budget must be positive");
    }
    if (!(time_horizon_ > 0.0) || !std::isfinite(time_horizon_))
    {
      throw std::invalid_argument("time horizon must be positive");
    }
    if (alphabet_.has_excellent() && !(alphabet_.alpha()->value() >= 2.0))
    {
      throw std::invalid_argument("alpha must be at least 2");
    }
    if (!(tolerance_ >= 0.0))
    {
      throw std::invalid_argument("tolerance must be non-negative");
    }
  }

  std::size_t agents() const noexcept { return skills_.rows(); }
  std::size_t proposals() const noexcept { return skills_.cols(); }

  const Matrix<double>& skills() const noexcept { return skills_; }
  double                skill(std::size_t agent, std::size_t proposal) const { return skills_(agent, proposal); }

  double budget() const noexcept { return budget_; }
  double per_proposal_budget() const noexcept { return budget_ / static_cast<double>(proposals()); }
  double time_horizon() const noexcept { return time_horizon_; }
  double tolerance() const noexcept { return tolerance_; }

  const QualityAlphabet& alphabet() const noexcept { return alphabet_; }

  Instance with_budget(double budget) const
  {
    return Instance{skills_, budget, time_horizon_, alphabet_, tolerance_};
  }

  StrategyProfile zero_profile() const { return StrategyProfile(agents(), proposals(), Quality::none); }

  friend bool operator==(const Instance&, const Instance&) = default;

private:
  Matrix<double>  skills_;
  double          budget_;
  double          time_horizon_;
  QualityAlphabet alphabet_;
  double          tolerance_;
};

inline void check_agent(const Instance& instance, std::size_t agent)
{
  if (agent >= instance.agents())
  {
    throw std::out_of_range("agent index " + std::to_string(agent) + " out of range");
  }
}

// Shape and alphabet membership of a profile against an instance.
inline void check_profile(const Instance& instance, const StrategyProfile& q)
{
  if (q.rows() != instance.agents() || q.cols() != instance.proposals())
  {
    throw std::invalid_argument("profile shape does not match the instance");
  }
  for (Quality level : q.data())
  {
    if (!instance.alphabet().contains(level))
    {
      throw std::invalid_argument("profile entry outside the quality alphabet");
    }
  }
}

// Agent indices ordered by ascending skill on one proposal, ties by index.
inline std::vector<std::size_t> skill_order(const Instance& instance, std::size_t proposal = 0)
{
  std::vector<std::size_t> order(instance.agents());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.skill(a, proposal) < instance.skill(b, proposal);
  });
  return order;
}

}  // namespace propreward
