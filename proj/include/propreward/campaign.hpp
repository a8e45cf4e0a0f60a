#pragma once

#include "propreward/errors.hpp"
#include "propreward/generators.hpp"
#include "propreward/poa.hpp"
#include "propreward/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace propreward {

// One block of a campaign config.
//
// Random block:
//   {"name": "single01", "kind": "random", "scenario": "single_zero_one",
//    "seeds": 500, "seed_base": 1, "n": [1, 8], "m": [1, 1], "alpha": [2, 3],
//    "k": [1], "skills": {"dist": "uniform", "lo": 0.05, "hi": 1.0},
//    "beta": 1.0, "T": [0.3, 2.0]}
// scenario is single_zero_one, single_alpha or multi_zero_one; "T" and
// "beta" take a number or a [lo, hi] range; "objective" defaults to quality
// for single-proposal scenarios and coverage otherwise.
//
// Named-family block:
//   {"name": "tight", "kind": "named", "family": "poa2_coverage_tight",
//    "params": {"k": 3}, "objective": "coverage", "k": [2]}
struct CampaignBlock
{
  std::string name;
  std::string kind{"random"};

  std::string scenario{"single_zero_one"};
  std::size_t seeds{0};
  std::uint64_t seed_base{1};
  std::size_t n_lo{1}, n_hi{4};
  std::size_t m_lo{1}, m_hi{1};
  std::vector<double> alphas{3.0};
  SkillDistribution   skills{SkillDistribution::uniform(0.05, 1.0)};
  double              beta_lo{1.0}, beta_hi{1.0};
  double              T_lo{1.0}, T_hi{1.0};

  std::string  family;
  FamilyParams params;

  std::optional<Objective> objective;
  std::vector<double>      ks{1.0};
};

struct CampaignConfig
{
  std::vector<CampaignBlock> blocks;
  unsigned long long         cap{kDefaultCap};
  std::size_t                jobs{1};
};

namespace detail {

template <typename T>
void read_range(const json& doc, const char* key, T& lo, T& hi)
{
  if (!doc.contains(key))
  {
    return;
  }
  const auto& v = doc.at(key);
  if (v.is_array())
  {
    if (v.size() != 2)
    {
      throw std::invalid_argument(std::string(key) + " range must be [lo, hi]");
    }
    lo = v[0].get<T>();
    hi = v[1].get<T>();
  }
  else
  {
    lo = hi = v.get<T>();
  }
  if (hi < lo)
  {
    throw std::invalid_argument(std::string(key) + " range has hi < lo");
  }
}

}  // namespace detail

inline CampaignConfig campaign_from_json(const json& doc)
{
  try
  {
    CampaignConfig config;
    config.cap  = doc.value("cap", static_cast<unsigned long long>(kDefaultCap));
    config.jobs = doc.value("jobs", std::size_t{1});
    for (const auto& b : doc.at("campaigns"))
    {
      CampaignBlock block;
      block.name = b.at("name").get<std::string>();
      block.kind = b.value("kind", std::string("random"));
      if (b.contains("objective"))
      {
        block.objective = parse_objective(b.at("objective").get<std::string>());
      }
      if (b.contains("k"))
      {
        block.ks = b.at("k").is_array() ? b.at("k").get<std::vector<double>>()
                                        : std::vector<double>{b.at("k").get<double>()};
      }
      if (block.kind == "random")
      {
        block.scenario = b.at("scenario").get<std::string>();
        if (block.scenario != "single_zero_one" && block.scenario != "single_alpha" &&
            block.scenario != "multi_zero_one")
        {
          throw std::invalid_argument("unknown scenario '" + block.scenario + "'");
        }
        block.seeds     = b.at("seeds").get<std::size_t>();
        block.seed_base = b.value("seed_base", std::uint64_t{1});
        detail::read_range(b, "n", block.n_lo, block.n_hi);
        detail::read_range(b, "m", block.m_lo, block.m_hi);
        detail::read_range(b, "beta", block.beta_lo, block.beta_hi);
        detail::read_range(b, "T", block.T_lo, block.T_hi);
        if (block.scenario != "multi_zero_one")
        {
          block.m_lo = block.m_hi = 1;
        }
        if (block.n_lo == 0 || block.m_lo == 0)
        {
          throw std::invalid_argument("n and m must be positive");
        }
        if (b.contains("alpha"))
        {
          block.alphas = b.at("alpha").is_array() ? b.at("alpha").get<std::vector<double>>()
                                                  : std::vector<double>{b.at("alpha").get<double>()};
        }
        if (b.contains("skills"))
        {
          const auto& s    = b.at("skills");
          auto        dist = s.value("dist", std::string("uniform"));
          if (dist == "uniform")
          {
            block.skills = SkillDistribution::uniform(s.value("lo", 0.05), s.value("hi", 1.0));
          }
          else if (dist == "lognormal")
          {
            block.skills = SkillDistribution::lognormal(s.value("mu", -1.0), s.value("sigma", 0.5));
          }
          else
          {
            throw std::invalid_argument("unknown skill distribution '" + dist + "'");
          }
        }
      }
      else if (block.kind == "named")
      {
        block.family = b.at("family").get<std::string>();
        if (b.contains("params"))
        {
          block.params = b.at("params").get<FamilyParams>();
        }
      }
      else
      {
        throw std::invalid_argument("unknown campaign kind '" + block.kind + "'");
      }
      config.blocks.push_back(std::move(block));
    }
    return config;
  }
  catch (const json::exception& e)
  {
    throw std::invalid_argument(std::string("malformed campaign config: ") + e.what());
  }
}

// The instance for seed `seed` of a random block.
inline Instance random_block_instance(const CampaignBlock& block, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  auto n = std::uniform_int_distribution<std::size_t>(block.n_lo, block.n_hi)(rng);
  auto m = std::uniform_int_distribution<std::size_t>(block.m_lo, block.m_hi)(rng);
  auto real = [&](double lo, double hi) { return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng); };
  double beta = real(block.beta_lo, block.beta_hi);
  double T    = real(block.T_lo, block.T_hi);

  auto alphabet = QualityAlphabet::zero_one();
  if (block.scenario == "single_alpha")
  {
    double a = block.alphas.at(std::uniform_int_distribution<std::size_t>(0, block.alphas.size() - 1)(rng));
    alphabet = QualityAlphabet::zero_one_alpha(a == static_cast<long long>(a) ? Alpha::ratio(static_cast<long long>(a), 1)
                                                                              : Alpha::real(a));
  }
  return gen_random_instance(rng(), n, m, alphabet, block.skills, beta * static_cast<double>(m), T);
}

struct CampaignEntry
{
  std::string                  family;
  Instance                     instance;
  std::optional<PoAExperiment> experiment;
  std::string                  error;  // set when the experiment was refused
};

struct BlockSummary
{
  std::string name;
  std::size_t experiments{0};
  std::size_t violations{0};
  std::size_t degenerate{0};
  std::size_t no_pne{0};
  std::size_t errors{0};
  std::size_t sharp_checked{0};
  std::size_t sharp_violations{0};
  double      max_ratio{0.0};
};

struct CampaignReport
{
  std::vector<CampaignEntry> entries;
  std::vector<BlockSummary>  blocks;
  std::size_t                violations{0};
  std::size_t                errors{0};
};

inline CampaignReport run_campaign(const CampaignConfig& config)
{
  struct Job
  {
    std::size_t block;
    std::string id;
    std::string family;
    Instance    instance;
    Objective   objective;
    double      k;
  };
  std::vector<Job> jobs;
  for (std::size_t b = 0; b < config.blocks.size(); ++b)
  {
    const auto& block = config.blocks[b];
    auto        add   = [&](const std::string& id, const std::string& family, const Instance& instance) {
      Objective objective = block.objective.value_or(instance.proposals() == 1 && block.scenario != "multi_zero_one"
                                                       ? Objective::quality
                                                       : Objective::coverage);
      for (double k : block.ks)
      {
        jobs.push_back({b, id + "/k=" + format_real(k), family, instance, objective, k});
      }
    };
    if (block.kind == "random")
    {
      for (std::size_t s = 0; s < block.seeds; ++s)
      {
        std::uint64_t seed = block.seed_base + s;
        add(block.name + "/" + std::to_string(seed), block.scenario, random_block_instance(block, seed));
      }
    }
    else
    {
      add(block.name, block.family, gen_paper_instance(block.family, block.params));
    }
  }

  CampaignReport report;
  report.entries.reserve(jobs.size());
  for (const auto& job : jobs)
  {
    report.entries.push_back({job.family, job.instance, std::nullopt, {}});
  }

  std::atomic<std::size_t> next{0};
  auto                     worker = [&]() {
    for (std::size_t t = next++; t < jobs.size(); t = next++)
    {
      const auto& job = jobs[t];
      try
      {
        report.entries[t].experiment = measure_poa(job.instance, job.objective, job.k, config.cap, job.id);
      }
      catch (const CapExceeded& e)
      {
        report.entries[t].error = e.what();
      }
    }
  };
  const std::size_t        workers = std::max<std::size_t>(1, std::min(config.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool)
  {
    t.join();
  }

  report.blocks.resize(config.blocks.size());
  for (std::size_t b = 0; b < config.blocks.size(); ++b)
  {
    report.blocks[b].name = config.blocks[b].name;
  }
  for (std::size_t t = 0; t < jobs.size(); ++t)
  {
    auto&       summary = report.blocks[jobs[t].block];
    const auto& entry   = report.entries[t];
    if (!entry.experiment)
    {
      ++summary.errors;
      ++report.errors;
      continue;
    }
    const auto& e = *entry.experiment;
    ++summary.experiments;
    summary.degenerate += e.degenerate;
    summary.no_pne += e.no_pne;
    if (!e.bound_holds)
    {
      ++summary.violations;
      ++report.violations;
    }
    if (e.sharp_holds)
    {
      ++summary.sharp_checked;
      summary.sharp_violations += !*e.sharp_holds;
    }
    if (std::isfinite(e.worst_ratio))
    {
      summary.max_ratio = std::max(summary.max_ratio, e.worst_ratio);
    }
  }
  return report;
}

inline json campaign_to_json(const CampaignReport& report)
{
  json blocks = json::array();
  for (const auto& b : report.blocks)
  {
    blocks.push_back({{"name", b.name},
                      {"experiments", b.experiments},
                      {"violations", b.violations},
                      {"degenerate", b.degenerate},
                      {"no_pne", b.no_pne},
                      {"errors", b.errors},
                      {"sharp_checked", b.sharp_checked},
                      {"sharp_violations", b.sharp_violations},
                      {"max_ratio", b.max_ratio}});
  }
  json failures = json::array();
  json errors   = json::array();
  for (const auto& entry : report.entries)
  {
    if (entry.experiment && !entry.experiment->bound_holds)
    {
      failures.push_back({{"experiment", experiment_to_json(*entry.experiment)},
                          {"instance", instance_to_json(entry.instance)}});
    }
    if (!entry.experiment)
    {
      errors.push_back({{"error", entry.error}, {"instance", instance_to_json(entry.instance)}});
    }
  }
  return {{"blocks", blocks},
          {"total_experiments", report.entries.size()},
          {"total_violations", report.violations},
          {"total_errors", report.errors},
          {"violations", failures},
          {"errors", errors}};
}

// instance_id,family,n,m,alphabet,k,opt,worst_pne,ratio,bound,holds
inline void write_campaign_csv(std::ostream& out, const CampaignReport& report)
{
  auto cell = [](double v) { return std::isfinite(v) ? format_real(v) : std::string(); };
  out << "instance_id,family,n,m,alphabet,k,opt,worst_pne,ratio,bound,holds\n";
  for (const auto& entry : report.entries)
  {
    if (!entry.experiment)
    {
      continue;
    }
    const auto& e = *entry.experiment;
    out << e.instance_id << ',' << entry.family << ',' << entry.instance.agents() << ',' << entry.instance.proposals()
        << ',' << entry.instance.alphabet().name() << ',' << format_real(e.k) << ',' << format_real(e.opt_value) << ','
        << cell(e.worst_pne) << ',' << cell(e.worst_ratio) << ',' << cell(e.bound) << ','
        << (e.bound_holds ? "true" : "false") << '\n';
  }
}

}  // namespace propreward
