#pragma once

#include "propreward/equilibria.hpp"
#include "propreward/poa.hpp"
#include "propreward/solvers.hpp"

#include "json.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace propreward {

using json = nlohmann::json;

// Instance document:
//   {"agents": n, "proposals": m, "skills": [row-major n*m reals],
//    "budget": B, "time_horizon": T, "alphabet": "zero_one" | "zero_one_alpha",
//    "alpha": 3 | 2.5 | "7/2", "tolerance": 1e-9}
// "alpha" is required with zero_one_alpha only; "tolerance" is optional.
// "skills" may also be given as an array of rows.

inline json alpha_to_json(const Alpha& alpha)
{
  if (const auto& r = alpha.exact_ratio())
  {
    if (r->second == 1)
    {
      return r->first;
    }
    return std::to_string(r->first) + "/" + std::to_string(r->second);
  }
  return alpha.value();
}

inline Alpha alpha_from_json(const json& j)
{
  if (j.is_string())
  {
    return Alpha::parse(j.get<std::string>());
  }
  if (j.is_number_integer())
  {
    return Alpha::ratio(j.get<long long>(), 1);
  }
  if (j.is_number())
  {
    return Alpha::real(j.get<double>());
  }
  throw std::invalid_argument("alpha must be a number or a \"p/q\" string");
}

inline json instance_to_json(const Instance& instance)
{
  json doc;
  doc["agents"]       = instance.agents();
  doc["proposals"]    = instance.proposals();
  doc["skills"]       = instance.skills().data();
  doc["budget"]       = instance.budget();
  doc["time_horizon"] = instance.time_horizon();
  doc["alphabet"]     = instance.alphabet().name();
  if (instance.alphabet().has_excellent())
  {
    doc["alpha"] = alpha_to_json(*instance.alphabet().alpha());
  }
  if (instance.tolerance() != kDefaultTolerance)
  {
    doc["tolerance"] = instance.tolerance();
  }
  return doc;
}

inline Instance instance_from_json(const json& doc)
{
  try
  {
    const auto n = doc.at("agents").get<std::size_t>();
    const auto m = doc.at("proposals").get<std::size_t>();

    std::vector<double> flat;
    const auto&         skills = doc.at("skills");
    if (!skills.empty() && skills.front().is_array())
    {
      for (const auto& row : skills)
      {
        if (row.size() != m)
        {
          throw std::invalid_argument("skills row length does not match proposals");
        }
        for (const auto& v : row)
        {
          flat.push_back(v.get<double>());
        }
      }
    }
    else
    {
      flat = skills.get<std::vector<double>>();
    }
    if (flat.size() != n * m)
    {
      throw std::invalid_argument("skills must hold agents*proposals entries");
    }

    const auto kind     = doc.at("alphabet").get<std::string>();
    auto       alphabet = QualityAlphabet::zero_one();
    if (kind == "zero_one_alpha")
    {
      alphabet = QualityAlphabet::zero_one_alpha(alpha_from_json(doc.at("alpha")));
    }
    else if (kind != "zero_one")
    {
      throw std::invalid_argument("unknown alphabet '" + kind + "'");
    }
    double tolerance = doc.value("tolerance", kDefaultTolerance);
    return Instance{Matrix<double>(n, m, std::move(flat)), doc.at("budget").get<double>(),
                    doc.at("time_horizon").get<double>(), alphabet, tolerance};
  }
  catch (const json::exception& e)
  {
    throw std::invalid_argument(std::string("malformed instance document: ") + e.what());
  }
}

inline json load_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path);
  }
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error& e)
  {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline Instance load_instance(const std::string& path) { return instance_from_json(load_json_file(path)); }

// Profiles serialize as integer matrices of quality codes.
inline json profile_to_json(const StrategyProfile& q)
{
  json rows = json::array();
  for (std::size_t i = 0; i < q.rows(); ++i)
  {
    json row = json::array();
    for (Quality level : q.row(i))
    {
      row.push_back(code_of(level));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline StrategyProfile profile_from_json(const json& rows)
{
  if (!rows.is_array() || rows.empty())
  {
    throw std::invalid_argument("profile must be a non-empty array of rows");
  }
  const std::size_t    n = rows.size();
  const std::size_t    m = rows.front().size();
  std::vector<Quality> data;
  for (const auto& row : rows)
  {
    if (!row.is_array() || row.size() != m)
    {
      throw std::invalid_argument("profile rows must have equal length");
    }
    for (const auto& v : row)
    {
      auto code = v.get<int>();
      if (code < 0 || code > 2)
      {
        throw std::invalid_argument("quality code out of range");
      }
      data.push_back(static_cast<Quality>(code));
    }
  }
  return StrategyProfile(n, m, std::move(data));
}

inline json row_to_json(const std::vector<Quality>& row)
{
  json out = json::array();
  for (Quality level : row)
  {
    out.push_back(code_of(level));
  }
  return out;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_to_json(const EquilibriumReport& report)
{
  json doc;
  doc["profile"] = profile_to_json(report.profile);
  doc["is_pne"]  = report.is_pne;
  if (report.witness)
  {
    doc["witness"] = {{"agent", report.witness->agent},
                      {"new_row", row_to_json(report.witness->new_row)},
                      {"utility_gain", report.witness->utility_gain}};
  }
  else
  {
    doc["witness"] = nullptr;
  }
  doc["qual"]      = report.qual;
  doc["cov"]       = report.cov;
  doc["potential"] = report.potential ? json(*report.potential) : json(nullptr);
  return doc;
}

inline json quality_opt_to_json(const OptimalQualityResult& r)
{
  return {{"excellent", r.excellent}, {"good", r.good},           {"value", r.value},
          {"cost", r.cost},           {"respects_T", r.respects_T}};
}

inline json coverage_opt_to_json(const CoverageOptResult& r)
{
  return {{"assignment", profile_to_json(r.assignment)}, {"covered", r.covered}, {"value", r.value}};
}

inline json fixpoint_to_json(const FixpointResult& r)
{
  auto state = [](const FixpointState& s) {
    return json{{"excellent", s.excellent}, {"good", s.good}, {"none", s.none}};
  };
  json history = json::array();
  for (const auto& s : r.history)
  {
    history.push_back(state(s));
  }
  return {{"state", state(r.state)},
          {"profile", profile_to_json(r.profile)},
          {"initial_good", r.initial_good},
          {"history", history}};
}

inline json experiment_to_json(const PoAExperiment& e)
{
  json doc;
  doc["instance_id"]   = e.instance_id;
  doc["objective"]     = to_string(e.objective);
  doc["k"]             = e.k;
  doc["opt"]           = e.opt_value;
  doc["opt_without_T"] = e.opt_without_T ? json(*e.opt_without_T) : json(nullptr);
  doc["pne_values"]    = e.pne_values;
  doc["exhaustive"]    = e.exhaustive;
  doc["pne_count"]     = e.exhaustive ? json(e.pne_count) : json(nullptr);
  doc["worst_pne"]     = number_or_null(e.worst_pne);
  doc["min_pne"]       = number_or_null(e.min_pne);
  doc["ratio"]         = number_or_null(e.worst_ratio);
  doc["degenerate"]    = e.degenerate;
  doc["no_pne"]        = e.no_pne;
  doc["bound_kind"]    = to_string(e.bound_kind);
  doc["bound"]         = number_or_null(e.bound);
  doc["additive"]      = e.additive;
  doc["holds"]         = e.bound_holds;
  doc["sharp_holds"]   = e.sharp_holds ? json(*e.sharp_holds) : json(nullptr);
  if (e.uncovered_by_pne)
  {
    doc["uncovered_by_pne"]  = *e.uncovered_by_pne;
    doc["cover_subset_size"] = *e.cover_subset_size;
  }
  if (e.worst_profile)
  {
    doc["worst_profile"] = profile_to_json(*e.worst_profile);
  }
  return doc;
}

// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v)
{
  if (!std::isfinite(v))
  {
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
  return json(v).dump();
}

// iteration,agent,move,delta_u,potential
inline void write_trace_csv(std::ostream& out, const DynamicsResult& result)
{
  out << "iteration,agent,move,delta_u,potential\n";
  out << 0 << ",," << "," << "," << format_real(result.potentials.front()) << "\n";
  for (const auto& rec : result.trace)
  {
    out << rec.iteration << ',' << rec.agent << ',' << row_codes(rec.new_row) << ',' << format_real(rec.delta_u) << ','
        << format_real(rec.potential) << '\n';
  }
}

}  // namespace propreward
