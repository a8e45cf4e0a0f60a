#pragma once

#include "propreward/errors.hpp"
#include "propreward/mechanism.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace propreward {

enum class Grade : std::uint8_t
{
  filtered_out = 0,
  good         = 1,
  excellent    = 2,
};

inline std::string to_string(Grade grade)
{
  switch (grade)
  {
  case Grade::excellent:
    return "excellent";
  case Grade::good:
    return "good";
  case Grade::filtered_out:
    break;
  }
  return "filtered_out";
}

inline std::optional<Grade> parse_grade(const std::string& text)
{
  if (text == "excellent")
  {
    return Grade::excellent;
  }
  if (text == "good")
  {
    return Grade::good;
  }
  if (text == "filtered_out" || text == "filtered out")
  {
    return Grade::filtered_out;
  }
  return std::nullopt;
}

struct ReviewRecord
{
  std::string reviewer_id;
  std::string proposal_id;
  Grade       grade{Grade::filtered_out};

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

struct IngestResult
{
  std::vector<ReviewRecord> records;
  std::vector<std::string>  warnings;
};

namespace detail {

// One CSV record, RFC 4180 quoting, no embedded newlines.
inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no)
{
  std::vector<std::string> fields;
  std::string              field;
  bool                     quoted = false;
  bool                     was_quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k)
  {
    char c = line[k];
    if (quoted)
    {
      if (c == '"')
      {
        if (k + 1 < line.size() && line[k + 1] == '"')
        {
          field.push_back('"');
          ++k;
        }
        else
        {
          quoted = false;
        }
      }
      else
      {
        field.push_back(c);
      }
    }
    else if (c == '"')
    {
      if (!field.empty() || was_quoted)
      {
        throw ParseError(line_no, "stray quote");
      }
      quoted = was_quoted = true;
    }
    else if (c == ',')
    {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    }
    else
    {
      if (was_quoted)
      {
        throw ParseError(line_no, "text after closing quote");
      }
      field.push_back(c);
    }
  }
  if (quoted)
  {
    throw ParseError(line_no, "unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

inline std::string trim(std::string s)
{
  auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back())))
  {
    s.pop_back();
  }
  std::size_t start = 0;
  while (start < s.size() && is_space(static_cast<unsigned char>(s[start])))
  {
    ++start;
  }
  return s.substr(start);
}

inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

}  // namespace detail

// CSV with header reviewer_id,proposal_id,grade. A repeated
// (reviewer, proposal) pair keeps its first position and the highest grade
// seen, with one warning per repeat.
inline IngestResult ingest_reviews(std::istream& in)
{
  IngestResult result;
  std::string  line;
  std::size_t  line_no = 0;

  if (!std::getline(in, line))
  {
    throw ParseError(1, "missing header");
  }
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0)
  {
    line.erase(0, 3);
  }
  auto header = detail::split_csv_line(detail::trim(line), line_no);
  for (auto& h : header)
  {
    h = detail::trim(h);
  }
  if (header != std::vector<std::string>{"reviewer_id", "proposal_id", "grade"})
  {
    throw ParseError(line_no, "header must be reviewer_id,proposal_id,grade");
  }

  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  while (std::getline(in, line))
  {
    ++line_no;
    if (detail::trim(line).empty())
    {
      continue;
    }
    auto fields = detail::split_csv_line(detail::trim(line), line_no);
    if (fields.size() != 3)
    {
      throw ParseError(line_no, "expected 3 fields, found " + std::to_string(fields.size()));
    }
    for (auto& f : fields)
    {
      f = detail::trim(f);
    }
    if (fields[0].empty() || fields[1].empty())
    {
      throw ParseError(line_no, "empty reviewer or proposal id");
    }
    auto grade = parse_grade(fields[2]);
    if (!grade)
    {
      throw ParseError(line_no, "unknown grade '" + fields[2] + "'");
    }
    auto key = std::pair{fields[0], fields[1]};
    auto it  = seen.find(key);
    if (it != seen.end())
    {
      auto& kept = result.records[it->second];
      kept.grade = std::max(kept.grade, *grade);
      result.warnings.push_back("line " + std::to_string(line_no) + ": duplicate review of " + fields[1] + " by " +
                                fields[0] + ", keeping " + to_string(kept.grade));
      continue;
    }
    seen.emplace(key, result.records.size());
    result.records.push_back({std::move(fields[0]), std::move(fields[1]), *grade});
  }
  return result;
}

inline IngestResult ingest_reviews(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path);
  }
  return ingest_reviews(in);
}

inline void write_reviews_csv(std::ostream& out, const std::vector<ReviewRecord>& records)
{
  out << "reviewer_id,proposal_id,grade\n";
  for (const auto& r : records)
  {
    out << detail::csv_field(r.reviewer_id) << ',' << detail::csv_field(r.proposal_id) << ',' << to_string(r.grade)
        << '\n';
  }
}

struct DatasetSummary
{
  std::size_t n_reviewers{0};
  std::size_t n_proposals{0};
  std::size_t excellent{0};
  std::size_t good{0};
  std::size_t filtered_out{0};

  double beta{0.0};
  double reviews_per_proposal_mean{0.0};             // filtered reviews included
  double unfiltered_reviews_per_proposal_mean{0.0};  // filtered reviews excluded
  double quality_per_proposal_mean{0.0};

  std::map<std::string, double> payouts;          // by reviewer
  std::map<std::string, double> proposal_totals;  // amount paid out per proposal
  std::vector<double>           review_payments;  // one per input record, same order
  double                        total_paid{0.0};
};

// Each proposal gets budget / #proposals, split in proportion to review
// effort: alpha for excellent, 1 for good, 0 for filtered out. A proposal
// with no unfiltered review keeps its share.
inline DatasetSummary compute_payouts(const std::vector<ReviewRecord>& records, double budget, double alpha = 3.0)
{
  if (!(budget > 0.0))
  {
    throw std::invalid_argument("review budget must be positive");
  }
  if (!(alpha > 1.0))
  {
    throw std::invalid_argument("alpha must exceed 1");
  }
  auto effort = [&](Grade g) { return g == Grade::excellent ? alpha : g == Grade::good ? 1.0 : 0.0; };

  DatasetSummary                summary;
  std::map<std::string, double> column;
  std::set<std::string>         reviewers;
  for (const auto& r : records)
  {
    column[r.proposal_id] += effort(r.grade);
    reviewers.insert(r.reviewer_id);
    summary.excellent += r.grade == Grade::excellent;
    summary.good += r.grade == Grade::good;
    summary.filtered_out += r.grade == Grade::filtered_out;
  }
  if (column.empty())
  {
    throw std::invalid_argument("no proposals in the review data");
  }
  summary.n_reviewers = reviewers.size();
  summary.n_proposals = column.size();
  summary.beta        = budget / static_cast<double>(summary.n_proposals);

  for (const auto& id : reviewers)
  {
    summary.payouts[id] = 0.0;
  }
  for (const auto& [id, total] : column)
  {
    summary.proposal_totals[id] = 0.0;
  }
  for (const auto& r : records)
  {
    // e * (beta / sum) keeps an excellent share exactly alpha times a good one
    double e     = effort(r.grade);
    double sum   = column[r.proposal_id];
    double share = e > 0.0 ? e * (summary.beta / sum) : 0.0;
    summary.review_payments.push_back(share);
    summary.payouts[r.reviewer_id] += share;
    summary.proposal_totals[r.proposal_id] += share;
    summary.total_paid += share;
  }

  const double proposals              = static_cast<double>(summary.n_proposals);
  summary.reviews_per_proposal_mean   = static_cast<double>(records.size()) / proposals;
  summary.unfiltered_reviews_per_proposal_mean = static_cast<double>(summary.excellent + summary.good) / proposals;
  summary.quality_per_proposal_mean =
    (alpha * static_cast<double>(summary.excellent) + static_cast<double>(summary.good)) / proposals;
  return summary;
}

inline std::string format_amount(double amount)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", amount);
  return buf;
}

inline void write_payouts_csv(std::ostream& out, const DatasetSummary& summary)
{
  out << "reviewer_id,amount\n";
  for (const auto& [id, amount] : summary.payouts)
  {
    out << detail::csv_field(id) << ',' << format_amount(amount) << '\n';
  }
}

// A review table with the grade mix and size of a real funding round:
// `proposals` proposals, `reviewers` reviewers, no repeated pairs, every
// reviewer and every proposal appearing at least once.
inline std::vector<ReviewRecord> synthetic_round(std::uint64_t seed, std::size_t reviewers = 541,
                                                 std::size_t proposals = 712, std::size_t excellent = 357,
                                                 std::size_t good = 4832, std::size_t filtered = 3971)
{
  const std::size_t total = excellent + good + filtered;
  if (total < std::max(reviewers, proposals) || total > reviewers * proposals)
  {
    throw std::invalid_argument("cannot place that many reviews");
  }
  std::mt19937_64    rng(seed);
  std::vector<Grade> grades;
  grades.insert(grades.end(), excellent, Grade::excellent);
  grades.insert(grades.end(), good, Grade::good);
  grades.insert(grades.end(), filtered, Grade::filtered_out);
  std::shuffle(grades.begin(), grades.end(), rng);

  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto add = [&](std::size_t r, std::size_t p) {
    if (used.insert({r, p}).second)
    {
      pairs.emplace_back(r, p);
    }
  };
  for (std::size_t t = 0; t < std::max(reviewers, proposals); ++t)
  {
    add(t % reviewers, t % proposals);
  }
  std::uniform_int_distribution<std::size_t> pick_r(0, reviewers - 1), pick_p(0, proposals - 1);
  while (pairs.size() < total)
  {
    add(pick_r(rng), pick_p(rng));
  }

  std::vector<ReviewRecord> records;
  records.reserve(total);
  for (std::size_t t = 0; t < total; ++t)
  {
    records.push_back({"ca" + std::to_string(pairs[t].first), "p" + std::to_string(pairs[t].second), grades[t]});
  }
  return records;
}

}  // namespace propreward
