#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace propreward;
using support::profile;

TEST(Families, ParseDescriptor)
{
  auto desc = parse_family("poa2_coverage_tight:k=3,eps=0.001");
  EXPECT_EQ(desc.name, "poa2_coverage_tight");
  EXPECT_EQ(desc.params.at("k"), 3.0);
  EXPECT_EQ(desc.params.at("eps"), 0.001);
  EXPECT_TRUE(parse_family("poa2_tight").params.empty());
  EXPECT_THROW(parse_family("coverage_n:n"), std::invalid_argument);
  EXPECT_THROW(parse_family("coverage_n:n=abc"), std::invalid_argument);
}

TEST(Families, CoverageN)
{
  auto g = gen_paper_instance("coverage_n", {{"n", 3}, {"eps", 0.01}});
  EXPECT_EQ(g.skills(), Matrix<double>(3, 3, std::vector<double>{0.01, 1, 1, 0.01, 1, 1, 0.01, 1, 1}));
  EXPECT_EQ(g.budget(), 3.0);
  EXPECT_EQ(g.time_horizon(), 1.0);
}

TEST(Families, BudgetAugment)
{
  auto g = gen_paper_instance("budget_augment", {{"eps", 0.1}, {"beta", 1}});
  EXPECT_EQ(g.skills(), Matrix<double>(2, 3, std::vector<double>{0.1, 0.1, 1, 0.1, 0.1, 1}));
  EXPECT_EQ(g.budget(), 3.0);
  EXPECT_EQ(g.time_horizon(), 1.0);
}

TEST(Families, CoverageTight)
{
  auto g = gen_paper_instance("poa2_coverage_tight", {{"k", 2}});
  ASSERT_EQ(g.agents(), 5u);
  ASSERT_EQ(g.proposals(), 5u);
  for (std::size_t i = 0; i < 5; ++i)
  {
    for (std::size_t j = 0; j < 5; ++j)
    {
      double expected = i < 3 ? (j < 2 ? 1e-3 : 1.0) : (j < 2 ? 1.0 : 3.0);
      EXPECT_EQ(g.skill(i, j), expected);
    }
  }
}

TEST(Families, ParameterChecks)
{
  EXPECT_THROW(gen_paper_instance("coverage_n", {{"n", 1}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("coverage_n", {{"n", 4}, {"eps", 0.3}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("poa2_coverage_tight", {{"k", 1}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("poa2_coverage_tight", {{"k", 3}, {"eps", 0.1}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("two_pne_remark", {{"eps", 0.1}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("budget_augment", {{"beta", 0.5}}), std::invalid_argument);
  EXPECT_THROW(gen_paper_instance("nope"), std::invalid_argument);
  for (const auto& name : paper_families())
  {
    EXPECT_NO_THROW(gen_paper_instance(name));
  }
}

TEST(RandomInstances, DeterministicAndInSupport)
{
  auto a = gen_random_instance(42, 5, 3, QualityAlphabet::zero_one(), SkillDistribution::uniform(0.1, 1.0), 3.0, 1.0);
  auto b = gen_random_instance(42, 5, 3, QualityAlphabet::zero_one(), SkillDistribution::uniform(0.1, 1.0), 3.0, 1.0);
  EXPECT_EQ(a, b);
  for (double s : a.skills().data())
  {
    EXPECT_GE(s, 0.1);
    EXPECT_LE(s, 1.0);
  }
  auto ln = gen_random_instance(1, 4, 4, QualityAlphabet::zero_one(), SkillDistribution::lognormal(-1, 0.5), 4, 1);
  for (double s : ln.skills().data())
  {
    EXPECT_GT(s, 0.0);
  }
  EXPECT_THROW(gen_random_instance(1, 2, 2, QualityAlphabet::zero_one(), SkillDistribution::uniform(0.0, 1.0), 1, 1),
               std::invalid_argument);
}

TEST(RandomInstances, AcceptedByFixpoint)
{
  auto g = gen_random_instance(7, 4, 1, support::alpha_of(3), SkillDistribution::uniform(0.05, 0.5), 1.0, 1.0);
  auto r = fixpoint_construct(g);
  EXPECT_EQ(r.profile.rows(), 4u);
  EXPECT_EQ(verify_pne(g, r.profile).is_pne, !oracle::all_pne(g).empty());
}

TEST(MeasurePoa, TightQualityRatioIsTwo)
{
  auto e = measure_poa(gen_paper_instance("poa2_tight"), Objective::quality);
  EXPECT_EQ(e.opt_value, 2.0);
  EXPECT_EQ(e.pne_values, std::vector<double>{1.0});
  EXPECT_EQ(e.worst_ratio, 2.0);
  EXPECT_EQ(e.bound, 2.0);
  EXPECT_TRUE(e.bound_holds);
  EXPECT_FALSE(e.degenerate);
}

TEST(MeasurePoa, CoverageRatioIsN)
{
  auto e = measure_poa(gen_paper_instance("coverage_n", {{"n", 5}}), Objective::coverage, 1.0);
  EXPECT_EQ(e.opt_value, 5.0);
  EXPECT_EQ(e.pne_count, 1u);
  EXPECT_EQ(e.worst_ratio, 5.0);
  EXPECT_EQ(e.bound_kind, BoundKind::none);
}

TEST(MeasurePoa, AugmentedTightCoverage)
{
  auto e = measure_poa(gen_paper_instance("poa2_coverage_tight", {{"k", 2}}), Objective::coverage, 2.0);
  EXPECT_EQ(e.opt_value, 5.0);
  EXPECT_EQ(e.worst_pne, 2.0);
  EXPECT_EQ(e.worst_ratio, 2.5);
  EXPECT_EQ(e.bound, 3.0);
  EXPECT_TRUE(e.bound_holds);
  ASSERT_TRUE(e.uncovered_by_pne);
  EXPECT_EQ(*e.uncovered_by_pne, 3u);
  EXPECT_LE(*e.cover_subset_size, *e.uncovered_by_pne);
}

TEST(MeasurePoa, TwoPneFamilyComposite)
{
  auto e = measure_poa(gen_paper_instance("two_pne_remark"), Objective::quality);
  EXPECT_EQ(e.bound_kind, BoundKind::composite);
  EXPECT_EQ(e.additive, 18.0);
  EXPECT_EQ(e.opt_value, 7.0);
  EXPECT_EQ(e.min_pne, 4.0);
  EXPECT_TRUE(e.bound_holds);
  ASSERT_TRUE(e.opt_without_T);
  EXPECT_GE(*e.opt_without_T, e.opt_value);
}

TEST(MeasurePoa, DegenerateZeroEquilibriumFlagged)
{
  // s = beta: reviewing earns exactly zero, so the empty profile is also an equilibrium
  auto g = support::single({1.0}, 1.0, 1.0, QualityAlphabet::zero_one());
  auto e = measure_poa(g, Objective::quality);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.min_pne, 0.0);
  EXPECT_EQ(e.worst_pne, 1.0);
  EXPECT_EQ(e.worst_ratio, 1.0);
  EXPECT_TRUE(e.bound_holds);
}

TEST(MeasurePoa, FallbackSearchMatchesEnumeration)
{
  // a cap too small for listing every equilibrium still yields the exact worst
  auto g    = gen_paper_instance("poa2_coverage_tight", {{"k", 3}});
  auto full = measure_poa(g, Objective::coverage, 2.0);
  ASSERT_TRUE(full.exhaustive);
  EXPECT_NEAR(full.worst_ratio, 8.0 / 3.0, 1e-12);
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
  {
    auto r     = support::random_game(seed, 4, 3, QualityAlphabet::zero_one());
    auto exact = measure_poa(r, Objective::coverage, 2.0);
    PneSearch search(r.with_budget(2.0 * r.budget()));
    auto      worst = search.worst(Objective::coverage);
    EXPECT_EQ(worst.value, exact.worst_pne) << "seed " << seed;
  }
}

TEST(MeasurePoa, Preconditions)
{
  EXPECT_THROW(measure_poa(gen_paper_instance("budget_augment"), Objective::quality), std::invalid_argument);
  EXPECT_THROW(measure_poa(gen_paper_instance("two_pne_remark"), Objective::coverage), std::invalid_argument);
  EXPECT_THROW(measure_poa(gen_paper_instance("poa2_tight"), Objective::quality, 0.5), std::invalid_argument);
}

namespace {

CampaignConfig small_config(std::size_t jobs)
{
  auto doc   = json::parse(R"({
    "campaigns": [
      {"name": "single01", "scenario": "single_zero_one", "seeds": 30, "n": [1, 6], "T": [0.3, 2.0]},
      {"name": "alpha", "scenario": "single_alpha", "seeds": 20, "n": [1, 5], "alpha": [2, 3], "T": [0.3, 2.0]},
      {"name": "multi", "scenario": "multi_zero_one", "seeds": 20, "n": [1, 3], "m": [1, 3], "k": [2]},
      {"name": "tight", "kind": "named", "family": "poa2_coverage_tight", "params": {"k": 2}, "k": [2]}
    ]})");
  auto config = campaign_from_json(doc);
  config.jobs = jobs;
  return config;
}

std::string render(const CampaignReport& report)
{
  std::ostringstream csv;
  write_campaign_csv(csv, report);
  return campaign_to_json(report).dump(2) + csv.str();
}

}  // namespace

TEST(Campaign, NoViolationsAndDeterministicAcrossWorkers)
{
  auto one  = run_campaign(small_config(1));
  auto four = run_campaign(small_config(4));
  EXPECT_EQ(one.violations, 0u);
  EXPECT_EQ(one.errors, 0u);
  EXPECT_EQ(one.entries.size(), 71u);
  EXPECT_EQ(render(one), render(four));
  EXPECT_EQ(one.blocks.back().max_ratio, 2.5);
}

TEST(Campaign, CsvColumns)
{
  auto               report = run_campaign(small_config(1));
  std::ostringstream csv;
  write_campaign_csv(csv, report);
  std::string header;
  std::getline(std::istringstream(csv.str()) >> std::ws, header);
  EXPECT_EQ(header, "instance_id,family,n,m,alphabet,k,opt,worst_pne,ratio,bound,holds");
  EXPECT_NE(csv.str().find("tight/k=2.0,poa2_coverage_tight,5,5,zero_one,2.0,5.0,2.0,2.5,3.0,true"),
            std::string::npos);
}

TEST(Campaign, ConfigErrors)
{
  EXPECT_THROW(campaign_from_json(json::parse(R"({"campaigns": [{"name": "x", "scenario": "bogus", "seeds": 1}]})")),
               std::invalid_argument);
  EXPECT_THROW(campaign_from_json(json::parse(R"({"campaigns": [{"name": "x", "kind": "other"}]})")),
               std::invalid_argument);
  EXPECT_THROW(campaign_from_json(json::parse(R"({})")), std::invalid_argument);
}

TEST(Svg, HistogramIsDeterministic)
{
  std::vector<double> ratios{1.0, 1.5, 2.0, 2.0, std::nan("")};
  auto                h = make_histogram(ratios, 4);
  EXPECT_EQ(h.lo, 1.0);
  EXPECT_EQ(h.hi, 2.0);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 0, 1, 2}));
  auto svg = render_histogram_svg(ratios, 4);
  EXPECT_EQ(svg, render_histogram_svg(ratios, 4));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
