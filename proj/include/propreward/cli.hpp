#pragma once

#include "propreward/campaign.hpp"
#include "propreward/dataset.hpp"
#include "propreward/equilibria.hpp"
#include "propreward/errors.hpp"
#include "propreward/generators.hpp"
#include "propreward/poa.hpp"
#include "propreward/serialization.hpp"
#include "propreward/solvers.hpp"
#include "propreward/svg.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward::cli {

enum ExitCode : int
{
  ok               = 0,
  usage_error      = 1,
  cap_exceeded     = 2,
  bound_violation  = 3,
};

struct Options
{
  std::string        instance_path;
  std::string        family;
  std::uint64_t      seed{1};
  unsigned long long cap{kDefaultCap};
  double             k{1.0};
  std::string        alpha;
  std::size_t        jobs{1};
  std::string        out;
  std::string        format{"json"};
  std::string        objective{"quality"};
  std::string        config;
  std::string        reviews;
  std::string        input;
  std::string        profile;
  std::string        schedule{"round_robin"};
  double             budget{0.0};
  bool               ignore_T{false};
  bool               brute{false};
  bool               check_only{false};
  std::size_t        bins{20};
};

// "random:n=4,m=1,alpha=3,lo=0.1,hi=1,B=1,T=1" draws from --seed; alpha=0
// (the default) selects the {0,1} alphabet. --alpha overrides the family's
// alpha parameter.
inline Instance resolve_instance(const Options& o)
{
  if (o.instance_path.empty() == o.family.empty())
  {
    throw CLI::ValidationError("input", "give exactly one of --instance or --family");
  }
  if (!o.instance_path.empty())
  {
    return load_instance(o.instance_path);
  }
  auto family = parse_family(o.family);
  if (!o.alpha.empty())
  {
    family.params["alpha"] = Alpha::parse(o.alpha).value();
  }
  if (family.name != "random")
  {
    return gen_paper_instance(family);
  }
  auto p     = [&](const char* key, double fallback) { return detail::param(family.params, key, fallback); };
  auto n     = detail::integer_param(family.params, "n", 4, 1);
  auto m     = detail::integer_param(family.params, "m", 1, 1);
  double a   = p("alpha", 0.0);
  auto alpha = QualityAlphabet::zero_one();
  if (a != 0.0)
  {
    alpha = QualityAlphabet::zero_one_alpha(!o.alpha.empty() ? Alpha::parse(o.alpha) : Alpha::real(a));
  }
  return gen_random_instance(o.seed, n, m, alpha, SkillDistribution::uniform(p("lo", 0.1), p("hi", 1.0)),
                             p("B", static_cast<double>(m)), p("T", 1.0));
}

inline void emit(const Options& o, std::ostream& out, const std::string& text)
{
  if (o.out.empty())
  {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file)
  {
    throw std::runtime_error("cannot write " + o.out);
  }
  file << text;
}

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

inline void require_format(const Options& o, std::initializer_list<const char*> allowed)
{
  for (const char* f : allowed)
  {
    if (o.format == f)
    {
      return;
    }
  }
  throw CLI::ValidationError("--format", "format '" + o.format + "' is not available for this command");
}

inline int cmd_solve_quality(const Options& o, std::ostream& out)
{
  require_format(o, {"json"});
  auto instance = resolve_instance(o);
  auto result   = o.brute ? brute_quality_opt(instance, !o.ignore_T, o.cap) : greedy_quality_opt(instance, !o.ignore_T);
  emit(o, out, dump(quality_opt_to_json(result)));
  return ok;
}

inline int cmd_solve_coverage(const Options& o, std::ostream& out)
{
  require_format(o, {"json"});
  auto instance = resolve_instance(o);
  emit(o, out, dump(coverage_opt_to_json(coverage_opt(instance, o.cap))));
  return ok;
}

inline int cmd_equilibrate(const Options& o, std::ostream& out)
{
  require_format(o, {"json", "csv"});
  auto instance = resolve_instance(o);
  auto start    = o.profile.empty() ? instance.zero_profile() : profile_from_json(load_json_file(o.profile));
  if (o.check_only)
  {
    require_format(o, {"json"});
    emit(o, out, dump(report_to_json(verify_pne(instance, start, o.cap))));
    return ok;
  }
  Schedule schedule = Schedule::round_robin();
  if (o.schedule == "random")
  {
    schedule = Schedule::random(o.seed);
  }
  else if (o.schedule != "round_robin")
  {
    throw CLI::ValidationError("--schedule", "expected round_robin or random");
  }
  auto result = best_response_dynamics(instance, start, schedule, o.cap);
  if (o.format == "csv")
  {
    std::ostringstream csv;
    write_trace_csv(csv, result);
    emit(o, out, csv.str());
    return ok;
  }
  json trace = json::array();
  for (const auto& rec : result.trace)
  {
    trace.push_back({{"iteration", rec.iteration},
                     {"agent", rec.agent},
                     {"move", row_to_json(rec.new_row)},
                     {"delta_u", rec.delta_u},
                     {"potential", rec.potential}});
  }
  emit(o, out, dump({{"report", report_to_json(result.report)}, {"potentials", result.potentials}, {"trace", trace}}));
  return ok;
}

inline int cmd_enumerate(const Options& o, std::ostream& out)
{
  require_format(o, {"json", "csv"});
  auto instance = resolve_instance(o);
  auto all      = enumerate_pne(instance, o.cap);
  if (o.format == "csv")
  {
    std::ostringstream csv;
    csv << "index,qual,cov,potential,profile\n";
    for (std::size_t t = 0; t < all.size(); ++t)
    {
      std::string codes;
      for (std::size_t i = 0; i < all[t].profile.rows(); ++i)
      {
        codes += (i ? "|" : "") + row_codes({all[t].profile.row(i).begin(), all[t].profile.row(i).end()});
      }
      csv << t << ',' << format_real(all[t].qual) << ',' << all[t].cov << ','
          << (all[t].potential ? format_real(*all[t].potential) : std::string()) << ',' << codes << '\n';
    }
    emit(o, out, csv.str());
    return ok;
  }
  json list = json::array();
  for (const auto& r : all)
  {
    list.push_back(report_to_json(r));
  }
  emit(o, out, dump({{"count", all.size()}, {"equilibria", list}}));
  return ok;
}

inline int cmd_fixpoint(const Options& o, std::ostream& out)
{
  require_format(o, {"json"});
  auto instance = resolve_instance(o);
  auto result   = fixpoint_construct(instance);
  auto doc      = fixpoint_to_json(result);
  doc["verified"] = report_to_json(verify_pne(instance, result.profile, o.cap));
  emit(o, out, dump(doc));
  return ok;
}

inline int cmd_poa(const Options& o, std::ostream& out)
{
  require_format(o, {"json"});
  auto instance = resolve_instance(o);
  auto id       = o.instance_path.empty() ? o.family : o.instance_path;
  auto e        = measure_poa(instance, parse_objective(o.objective), o.k, o.cap, id);
  emit(o, out, dump(experiment_to_json(e)));
  return e.bound_holds ? ok : bound_violation;
}

inline int cmd_campaign(const Options& o, std::ostream& out, std::ostream& err)
{
  require_format(o, {"json", "csv", "svg"});
  if (o.config.empty())
  {
    throw CLI::ValidationError("--config", "campaign needs --config");
  }
  auto config = campaign_from_json(load_json_file(o.config));
  config.jobs = o.jobs;
  auto report = run_campaign(config);
  if (o.format == "csv")
  {
    std::ostringstream csv;
    write_campaign_csv(csv, report);
    emit(o, out, csv.str());
  }
  else if (o.format == "svg")
  {
    std::vector<double> ratios;
    for (const auto& entry : report.entries)
    {
      if (entry.experiment)
      {
        ratios.push_back(entry.experiment->worst_ratio);
      }
    }
    emit(o, out, render_histogram_svg(ratios, o.bins));
  }
  else
  {
    emit(o, out, dump(campaign_to_json(report)));
  }
  std::size_t no_pne = 0;
  for (const auto& b : report.blocks)
  {
    no_pne += b.no_pne;
  }
  err << report.entries.size() << " experiments, " << report.violations << " bound violations, " << report.errors
      << " refused by the cap, " << no_pne << " without any equilibrium\n";
  if (report.violations > 0)
  {
    return bound_violation;
  }
  return report.errors > 0 ? cap_exceeded : ok;
}

inline json summary_to_json(const DatasetSummary& s)
{
  json payouts = json::object();
  for (const auto& [id, amount] : s.payouts)
  {
    payouts[id] = format_amount(amount);
  }
  return {{"n_reviewers", s.n_reviewers},
          {"n_proposals", s.n_proposals},
          {"excellent", s.excellent},
          {"good", s.good},
          {"filtered_out", s.filtered_out},
          {"beta", s.beta},
          {"reviews_per_proposal_mean", s.reviews_per_proposal_mean},
          {"unfiltered_reviews_per_proposal_mean", s.unfiltered_reviews_per_proposal_mean},
          {"quality_per_proposal_mean", s.quality_per_proposal_mean},
          {"total_paid", format_amount(s.total_paid)},
          {"payouts", payouts}};
}

inline IngestResult read_reviews(const Options& o, std::ostream& err)
{
  if (o.reviews.empty())
  {
    throw CLI::ValidationError("--reviews", "a review CSV is required");
  }
  auto result = ingest_reviews(o.reviews);
  for (const auto& w : result.warnings)
  {
    err << "warning: " << w << '\n';
  }
  return result;
}

inline int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err)
{
  require_format(o, {"json", "csv"});
  auto result = read_reviews(o, err);
  if (o.format == "csv")
  {
    std::ostringstream csv;
    write_reviews_csv(csv, result.records);
    emit(o, out, csv.str());
    return ok;
  }
  json records = json::array();
  for (const auto& r : result.records)
  {
    records.push_back({{"reviewer_id", r.reviewer_id}, {"proposal_id", r.proposal_id}, {"grade", to_string(r.grade)}});
  }
  emit(o, out, dump({{"records", records}, {"warnings", result.warnings}}));
  return ok;
}

inline int cmd_payouts(const Options& o, std::ostream& out, std::ostream& err)
{
  require_format(o, {"json", "csv"});
  auto   result  = read_reviews(o, err);
  double alpha   = o.alpha.empty() ? 3.0 : Alpha::parse(o.alpha).value();
  auto   summary = compute_payouts(result.records, o.budget, alpha);
  if (o.format == "csv")
  {
    std::ostringstream csv;
    write_payouts_csv(csv, summary);
    emit(o, out, csv.str());
    return ok;
  }
  emit(o, out, dump(summary_to_json(summary)));
  return ok;
}

// Reads the ratio column of a campaign CSV table.
inline std::vector<double> read_ratio_column(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path);
  }
  std::string line;
  std::getline(in, line);
  auto        header = detail::split_csv_line(detail::trim(line), 1);
  std::size_t column = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
  {
    if (header[c] == "ratio")
    {
      column = c;
    }
  }
  if (column == header.size())
  {
    throw ParseError(1, "no ratio column");
  }
  std::vector<double> ratios;
  std::size_t         line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    auto fields = detail::split_csv_line(detail::trim(line), line_no);
    if (fields.size() != header.size())
    {
      throw ParseError(line_no, "field count does not match the header");
    }
    if (!fields[column].empty())
    {
      ratios.push_back(std::stod(fields[column]));
    }
  }
  return ratios;
}

inline int cmd_report(const Options& o, std::ostream& out)
{
  require_format(o, {"svg", "json"});
  if (o.input.empty())
  {
    throw CLI::ValidationError("--input", "report needs a campaign CSV via --input");
  }
  auto ratios = read_ratio_column(o.input);
  if (o.format == "svg")
  {
    emit(o, out, render_histogram_svg(ratios, o.bins));
    return ok;
  }
  auto h    = make_histogram(ratios, o.bins);
  auto doc  = json{{"count", ratios.size()}, {"lo", h.lo}, {"hi", h.hi}, {"bins", h.counts}};
  emit(o, out, dump(doc));
  return ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  Options  o;
  CLI::App app{"Proportional review-reward games: equilibria, optima and price of anarchy", "propreward"};
  app.require_subcommand(1);

  auto input = [&](CLI::App* sub) {
    sub->add_option("--instance", o.instance_path, "instance JSON file");
    sub->add_option("--family", o.family, "generator, e.g. coverage_n:n=5 or random:n=4,m=2");
    sub->add_option("--seed", o.seed, "seed for random generators and schedules");
    sub->add_option("--alpha", o.alpha, "alpha override, e.g. 3 or 7/2");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--cap", o.cap, "search node cap");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "json, csv or svg");
  };

  auto* solve_quality = app.add_subcommand("solve-quality", "quality optimum on a single proposal");
  input(solve_quality);
  common(solve_quality);
  solve_quality->add_flag("--ignore-T", o.ignore_T, "drop the maximum effort constraint");
  solve_quality->add_flag("--brute", o.brute, "exhaustive search instead of the greedy rule");

  auto* solve_coverage = app.add_subcommand("solve-coverage", "exact coverage optimum");
  input(solve_coverage);
  common(solve_coverage);

  auto* equilibrate = app.add_subcommand("equilibrate", "best-response dynamics from a start profile");
  input(equilibrate);
  common(equilibrate);
  equilibrate->add_option("--profile", o.profile, "start profile JSON (default all zero)");
  equilibrate->add_option("--schedule", o.schedule, "round_robin or random");
  equilibrate->add_flag("--check", o.check_only, "only verify the given profile");

  auto* enumerate = app.add_subcommand("enumerate", "list every pure Nash equilibrium");
  input(enumerate);
  common(enumerate);

  auto* fixpoint = app.add_subcommand("fixpoint", "single proposal equilibrium construction");
  input(fixpoint);
  common(fixpoint);

  auto* poa = app.add_subcommand("poa", "price of anarchy on one instance");
  input(poa);
  common(poa);
  poa->add_option("--objective", o.objective, "quality or coverage");
  poa->add_option("--k", o.k, "budget augmentation factor");

  auto* campaign = app.add_subcommand("campaign", "run a bound-checking campaign");
  common(campaign);
  campaign->add_option("--config", o.config, "campaign config JSON")->required();
  campaign->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  campaign->add_option("--bins", o.bins, "histogram bins for svg output");

  auto* ingest = app.add_subcommand("ingest", "parse and normalise a review CSV");
  common(ingest);
  ingest->add_option("--reviews", o.reviews, "review CSV")->required();

  auto* payouts = app.add_subcommand("payouts", "proportional payouts over a review CSV");
  common(payouts);
  payouts->add_option("--reviews", o.reviews, "review CSV")->required();
  payouts->add_option("--budget", o.budget, "total review budget")->required();
  payouts->add_option("--alpha", o.alpha, "effort of an excellent review (default 3)");

  auto* report = app.add_subcommand("report", "histogram of ratios from a campaign CSV");
  common(report);
  report->add_option("--input", o.input, "campaign CSV table")->required();
  report->add_option("--bins", o.bins, "histogram bins");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp&)
  {
    out << app.help();
    return ok;
  }
  catch (const CLI::CallForAllHelp&)
  {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  }
  catch (const CLI::ParseError& e)
  {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }

  try
  {
    if (solve_quality->parsed())
      return cmd_solve_quality(o, out);
    if (solve_coverage->parsed())
      return cmd_solve_coverage(o, out);
    if (equilibrate->parsed())
      return cmd_equilibrate(o, out);
    if (enumerate->parsed())
      return cmd_enumerate(o, out);
    if (fixpoint->parsed())
      return cmd_fixpoint(o, out);
    if (poa->parsed())
      return cmd_poa(o, out);
    if (campaign->parsed())
      return cmd_campaign(o, out, err);
    if (ingest->parsed())
      return cmd_ingest(o, out, err);
    if (payouts->parsed())
      return cmd_payouts(o, out, err);
    if (report->parsed())
      return cmd_report(o, out);
  }
  catch (const CapExceeded& e)
  {
    err << "refused: " << e.what() << '\n';
    return cap_exceeded;
  }
  catch (const DefectError& e)
  {
    err << "defect: " << e.what() << '\n';
    return bound_violation;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
  return usage_error;
}

}  // namespace propreward::cli
