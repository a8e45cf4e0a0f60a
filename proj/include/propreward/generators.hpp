#pragma once

#include "propreward/instance.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

using FamilyParams = std::map<std::string, double>;

struct FamilyDescriptor
{
  std::string  name;
  FamilyParams params;
};

// "coverage_n:n=5,eps=0.001" -> {coverage_n, {n: 5, eps: 0.001}}
inline FamilyDescriptor parse_family(const std::string& text)
{
  FamilyDescriptor family;
  auto       colon = text.find(':');
  family.name        = text.substr(0, colon);
  if (colon == std::string::npos)
  {
    return family;
  }
  std::string rest = text.substr(colon + 1);
  std::size_t pos  = 0;
  while (pos <= rest.size())
  {
    auto comma = rest.find(',', pos);
    auto item  = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto eq    = item.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      throw std::invalid_argument("family parameter '" + item + "' is not key=value");
    }
    std::size_t used  = 0;
    auto        value = item.substr(eq + 1);
    try
    {
      family.params[item.substr(0, eq)] = std::stod(value, &used);
    }
    catch (const std::logic_error&)
    {
      used = std::string::npos;
    }
    if (used != value.size())
    {
      throw std::invalid_argument("family parameter '" + item + "' has a non-numeric value");
    }
    if (comma == std::string::npos)
    {
      break;
    }
    pos = comma + 1;
  }
  return family;
}

namespace detail {

inline double param(const FamilyParams& params, const std::string& key, double fallback)
{
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

inline std::size_t integer_param(const FamilyParams& params, const std::string& key, double fallback, double minimum)
{
  double v = param(params, key, fallback);
  if (v != std::floor(v) || v < minimum)
  {
    throw std::invalid_argument("parameter " + key + " must be an integer >= " + std::to_string(int(minimum)));
  }
  return static_cast<std::size_t>(v);
}

inline void require(bool ok, const std::string& what)
{
  if (!ok)
  {
    throw std::invalid_argument(what);
  }
}

}  // namespace detail

inline const std::vector<std::string>& paper_families()
{
  static const std::vector<std::string> names{"two_pne_remark", "poa2_tight",          "coverage_n",
                                              "budget_augment", "poa2_coverage_tight", "alpha_corner"};
  return names;
}

// The adversarial constructions, parameterised as follows.
//   two_pne_remark       eps (default 1/28, 0 < eps < 1/14); plus_eps=1 uses
//                        skills 1/4+eps for agents 0 and 1 instead of 1/4-eps
//   poa2_tight           no parameters
//   coverage_n           n >= 2, eps (default 1e-3)
//   budget_augment       eps in (0, 1/2) (default 1e-3), beta >= 1 (default 1)
//   poa2_coverage_tight  k >= 2, eps in (0, 1/(k(2k-1))) (default 1e-3)
//   alpha_corner         alpha >= 2 (default 3), eps > 0 (default 1e-3)
inline Instance gen_paper_instance(const std::string& name, const FamilyParams& params = {})
{
  using detail::param;
  using detail::require;

  if (name == "two_pne_remark")
  {
    double eps  = param(params, "eps", 1.0 / 28.0);
    bool   plus = param(params, "plus_eps", 0.0) != 0.0;
    require(eps > 0.0 && eps < 1.0 / 14.0, "two_pne_remark needs 0 < eps < 1/14");
    double         slow = plus ? 0.25 + eps : 0.25 - eps;
    Matrix<double> skills(4, 1, std::vector<double>{slow, slow, 0.125, 0.125});
    return Instance{skills, 1.0, 0.5, QualityAlphabet::zero_one_alpha(Alpha::ratio(3, 1))};
  }
  if (name == "poa2_tight")
  {
    Matrix<double> skills(2, 1, std::vector<double>{0.4, 0.6});
    return Instance{skills, 1.0, 1.0, QualityAlphabet::zero_one()};
  }
  if (name == "coverage_n")
  {
    auto   n   = detail::integer_param(params, "n", 3, 2);
    double eps = param(params, "eps", 1e-3);
    require(eps > 0.0 && eps < 1.0 / static_cast<double>(n), "coverage_n needs 0 < eps < 1/n");
    Matrix<double> skills(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
    {
      skills(i, 0) = eps;
    }
    return Instance{skills, static_cast<double>(n), 1.0, QualityAlphabet::zero_one()};
  }
  if (name == "budget_augment")
  {
    double eps  = param(params, "eps", 1e-3);
    double beta = param(params, "beta", 1.0);
    require(eps > 0.0 && eps < 0.5, "budget_augment needs 0 < eps < 1/2");
    require(beta >= 1.0, "budget_augment needs beta >= 1");
    Matrix<double> skills(2, 3, std::vector<double>{eps, eps, 1.0, eps, eps, 1.0});
    return Instance{skills, 3.0 * beta, 1.0, QualityAlphabet::zero_one()};
  }
  if (name == "poa2_coverage_tight")
  {
    auto   k   = detail::integer_param(params, "k", 2, 2);
    double eps = param(params, "eps", 1e-3);
    double kd  = static_cast<double>(k);
    require(eps > 0.0 && eps < 1.0 / (kd * (2.0 * kd - 1.0)), "poa2_coverage_tight needs 0 < eps < 1/(k(2k-1))");
    // agents: L1 = first 2k-1, L2 = last k; proposals: F1 = first k, F2 = last 2k-1
    const std::size_t size = 3 * k - 1;
    Matrix<double>    skills(size, size, 1.0);
    for (std::size_t i = 0; i < size; ++i)
    {
      bool l1 = i < 2 * k - 1;
      for (std::size_t j = 0; j < size; ++j)
      {
        bool f1      = j < k;
        skills(i, j) = l1 ? (f1 ? eps : 1.0) : (f1 ? 1.0 : 3.0);
      }
    }
    return Instance{skills, static_cast<double>(size), 1.0, QualityAlphabet::zero_one()};
  }
  if (name == "alpha_corner")
  {
    double alpha = param(params, "alpha", 3.0);
    double eps   = param(params, "eps", 1e-3);
    require(alpha >= 2.0, "alpha_corner needs alpha >= 2");
    require(eps > 0.0, "alpha_corner needs eps > 0");
    Matrix<double> skills(1, 1, std::vector<double>{1.0 / alpha});
    auto           a = alpha == std::floor(alpha) ? Alpha::ratio(static_cast<long long>(alpha), 1) : Alpha::real(alpha);
    return Instance{skills, 1.0, 1.0 + eps, QualityAlphabet::zero_one_alpha(a)};
  }
  throw std::invalid_argument("unknown instance family '" + name + "'");
}

inline Instance gen_paper_instance(const FamilyDescriptor& family) { return gen_paper_instance(family.name, family.params); }

struct SkillDistribution
{
  enum class Kind
  {
    uniform,
    lognormal,
  };

  Kind   kind{Kind::uniform};
  double a{0.1};  // lo, or mu
  double b{1.0};  // hi, or sigma

  static SkillDistribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static SkillDistribution lognormal(double mu, double sigma) { return {Kind::lognormal, mu, sigma}; }
};

// Deterministic for a given seed (on a given standard library).
inline Instance gen_random_instance(std::uint64_t seed, std::size_t n, std::size_t m, const QualityAlphabet& alphabet,
                                    const SkillDistribution& skills, double budget, double time_horizon)
{
  if (skills.kind == SkillDistribution::Kind::uniform && !(skills.a > 0.0 && skills.b >= skills.a))
  {
    throw std::invalid_argument("uniform skills need 0 < lo <= hi");
  }
  if (skills.kind == SkillDistribution::Kind::lognormal && !(skills.b > 0.0))
  {
    throw std::invalid_argument("lognormal skills need sigma > 0");
  }
  std::mt19937_64 rng(seed);
  Matrix<double>  s(n, m, 0.0);
  if (skills.kind == SkillDistribution::Kind::uniform)
  {
    std::uniform_real_distribution<double> draw(skills.a, skills.b);
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = 0; j < m; ++j)
      {
        s(i, j) = skills.a == skills.b ? skills.a : draw(rng);
      }
    }
  }
  else
  {
    std::lognormal_distribution<double> draw(skills.a, skills.b);
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = 0; j < m; ++j)
      {
        s(i, j) = draw(rng);
      }
    }
  }
  return Instance{s, budget, time_horizon, alphabet};
}

}  // namespace propreward
