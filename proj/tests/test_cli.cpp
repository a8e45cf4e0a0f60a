#include "propreward/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Run
{
  int         code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  args.insert(args.begin(), "propreward");
  std::vector<const char*> argv;
  for (const auto& a : args)
  {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  int code = propreward::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(PROPREWARD_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

propreward::json parse(const std::string& text) { return propreward::json::parse(text); }

}  // namespace

TEST(Cli, PoaOnTightFamily)
{
  auto r = run({"poa", "--family", "poa2_tight", "--objective", "quality"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["ratio"], 2.0);
}

TEST(Cli, MissingInstanceFile)
{
  auto r = run({"enumerate", "--instance", "missing.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"enumerate"}).code, 1);
  EXPECT_EQ(run({"enumerate", "--family", "poa2_tight", "--instance", config("poa2_tight.json")}).code, 1);
  EXPECT_EQ(run({"enumerate", "--family", "poa2_tight", "--format", "svg"}).code, 1);
  EXPECT_EQ(run({"poa", "--family", "poa2_tight", "--objective", "speed"}).code, 1);
  EXPECT_EQ(run({"enumerate", "--family", "coverage_n:n=1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CapRefusal)
{
  auto r = run({"enumerate", "--family", "coverage_n:n=6", "--cap", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
}

TEST(Cli, SolveQualityFromFile)
{
  auto r = run({"solve-quality", "--instance", config("two_pne_remark.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["value"], 7.0);
  auto brute = run({"solve-quality", "--instance", config("two_pne_remark.json"), "--brute", "--ignore-T"});
  ASSERT_EQ(brute.code, 0) << brute.err;
  EXPECT_GE(parse(brute.out)["value"].get<double>(), 7.0);
}

TEST(Cli, SolveCoverage)
{
  auto r = run({"solve-coverage", "--instance", config("budget_augment.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["value"], 3);
}

TEST(Cli, EquilibrateFromStartProfile)
{
  auto r = run({"equilibrate", "--instance", config("budget_augment.json"), "--profile",
                config("budget_augment_start.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = parse(r.out);
  EXPECT_EQ(doc["report"]["profile"].dump(), "[[1,1,0],[1,1,0]]");
  EXPECT_EQ(doc["report"]["is_pne"], true);

  auto csv = run({"equilibrate", "--family", "poa2_tight", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("iteration,agent,move,delta_u,potential\n", 0), 0u);

  auto check = run({"equilibrate", "--instance", config("budget_augment.json"), "--profile",
                    config("budget_augment_start.json"), "--check"});
  ASSERT_EQ(check.code, 0);
  EXPECT_EQ(parse(check.out)["is_pne"], false);
}

TEST(Cli, EnumerateAndFixpoint)
{
  auto r = run({"enumerate", "--family", "two_pne_remark"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["count"], 4);
  auto f = run({"fixpoint", "--family", "two_pne_remark"});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(parse(f.out)["verified"]["is_pne"], true);
}

TEST(Cli, RandomFamilyUsesSeed)
{
  auto a = run({"enumerate", "--family", "random:n=3,m=2", "--seed", "5"});
  auto b = run({"enumerate", "--family", "random:n=3,m=2", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto alpha = run({"fixpoint", "--family", "random:n=5,m=1", "--alpha", "7/2", "--seed", "2"});
  EXPECT_EQ(alpha.code, 0) << alpha.err;
}

TEST(Cli, CampaignWritesReportDeterministically)
{
  auto dir = fs::temp_directory_path() / "propreward_cli_test";
  fs::create_directories(dir);
  auto json_a = (dir / "a.json").string(), json_b = (dir / "b.json").string(), csv = (dir / "c.csv").string(),
       svg = (dir / "c.svg").string();

  auto r1 = run({"campaign", "--config", config("campaign_smoke.json"), "--out", json_a});
  auto r2 = run({"campaign", "--config", config("campaign_smoke.json"), "--out", json_b, "--jobs", "3"});
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(slurp(json_a), slurp(json_b));
  EXPECT_EQ(parse(slurp(json_a))["total_violations"], 0);

  ASSERT_EQ(run({"campaign", "--config", config("campaign_smoke.json"), "--format", "csv", "--out", csv}).code, 0);
  auto report = run({"report", "--input", csv, "--format", "svg", "--out", svg});
  ASSERT_EQ(report.code, 0) << report.err;
  EXPECT_EQ(slurp(svg).rfind("<svg", 0), 0u);
  auto stats = run({"report", "--input", csv, "--format", "json"});
  ASSERT_EQ(stats.code, 0) << stats.err;
  EXPECT_GE(parse(stats.out)["hi"].get<double>(), 2.5);
  fs::remove_all(dir);
}

TEST(Cli, CampaignMissingConfig)
{
  EXPECT_EQ(run({"campaign", "--config", "nope.json"}).code, 1);
}

TEST(Cli, IngestAndPayouts)
{
  auto r = run({"ingest", "--reviews", config("reviews_sample.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["records"].size(), 6u);
  EXPECT_NE(r.err.find("duplicate"), std::string::npos);

  auto p = run({"payouts", "--reviews", config("reviews_sample.csv"), "--budget", "300", "--format", "csv"});
  ASSERT_EQ(p.code, 0) << p.err;
  // prop-a: ca-001 and ca-002 excellent split 100; prop-b: two good split 100; prop-c unpaid
  EXPECT_EQ(p.out, "reviewer_id,amount\nca-001,100.000000\nca-002,100.000000\nca-003,0.000000\nca-004,0.000000\n");

  auto s = run({"payouts", "--reviews", config("reviews_sample.csv"), "--budget", "300"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(parse(s.out)["total_paid"], "200.000000");
}
