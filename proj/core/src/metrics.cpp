// SPDX-License-Identifier: Apache-2.0

#include "mugie/metrics.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mugie/genloop.hpp"

namespace mugie {

GroupMap parse_group_map(std::istream &in) {
  GroupMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> fields;
    for (std::string w; words >> w;)
      fields.push_back(w);
    if (fields.empty())
      continue;
    if (fields.size() != 2)
      throw MalformedRows("group map line " + std::to_string(lineno) +
                          ": expected `seed group`");
    if (!map.emplace(fields[0], fields[1]).second)
      throw MalformedRows("group map line " + std::to_string(lineno) + ": seed '" +
                          fields[0] + "' listed twice");
  }
  return map;
}

namespace {

struct SeedTally {
  std::optional<VerdictKind> seed_kind;
  std::size_t mutants = 0;
  std::size_t failed = 0;
  std::size_t timed_out = 0;
};

using Key = std::tuple<std::string, std::string, std::string>; // group, tool, batch

Percentage mean(const std::vector<Rational> &xs) {
  if (xs.empty())
    return std::nullopt;
  Rational sum = 0;
  for (const auto &x : xs)
    sum += x;
  return sum / xs.size();
}

} // namespace

std::vector<MeasureSummary> compute_measures(const std::vector<CampaignRow> &rows,
                                             const GroupMap &groups) {
  // (group, tool, batch) -> seed -> tally
  std::map<Key, std::map<std::string, SeedTally>> tallies;
  for (const auto &row : rows) {
    if (!row.verdict)
      continue;
    auto g = groups.find(row.seed);
    Key key{g == groups.end() ? std::string(kDefaultGroup) : g->second, row.tool,
            row.batch};
    SeedTally &t = tallies[key][row.seed];
    VerdictKind kind = row.verdict->kind;
    if (row.mutant_id == kSeedId) {
      if (t.seed_kind)
        throw MalformedRows("duplicate SEED row for seed '" + row.seed + "' (tool " +
                            row.tool + ", batch " + row.batch + ")");
      t.seed_kind = kind;
    } else {
      ++t.mutants;
      if (kind != VerdictKind::Verified)
        ++t.failed;
      if (kind == VerdictKind::Timeout)
        ++t.timed_out;
    }
  }

  std::vector<MeasureSummary> out;
  for (const auto &[key, seeds] : tallies) {
    MeasureSummary s;
    std::tie(s.group, s.tool, s.batch) = key;
    std::vector<Rational> fail, timeout, fail_given_exists;
    for (const auto &[name, t] : seeds) {
      if (!t.seed_kind)
        throw MalformedRows("mutant rows for seed '" + name + "' (tool " + s.tool +
                            ", batch " + s.batch + ") without a SEED row");
      if (*t.seed_kind != VerdictKind::Verified)
        continue;
      ++s.num_pass;
      if (t.failed > 0)
        ++s.num_exists_fail;
      if (t.mutants == 0) {
        ++s.seeds_without_mutants;
        continue;
      }
      Rational f(t.failed, t.mutants);
      fail.push_back(100 * f);
      timeout.push_back(100 * Rational(t.timed_out, t.mutants));
      if (t.failed > 0)
        fail_given_exists.push_back(100 * f);
    }
    if (s.num_pass > 0)
      s.pct_exists_fail = Rational(100 * s.num_exists_fail, s.num_pass);
    s.mean_pct_fail = mean(fail);
    s.mean_pct_timeout = mean(timeout);
    s.mean_pct_fail_given_exists = mean(fail_given_exists);
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv")
    return ReportFormat::Csv;
  if (name == "json")
    return ReportFormat::Json;
  if (name == "text")
    return ReportFormat::Text;
  return std::nullopt;
}

std::string format_percentage(const Percentage &p) {
  if (!p)
    return "n/a";
  using boost::multiprecision::cpp_int;
  Rational scaled = *p * 100 + Rational(1, 2);
  cpp_int hundredths = numerator(scaled) / denominator(scaled);
  if (scaled < 0 && hundredths * denominator(scaled) != numerator(scaled))
    hundredths -= 1; // floor for negatives
  bool negative = hundredths < 0;
  if (negative)
    hundredths = -hundredths;
  cpp_int whole = hundredths / 100;
  int frac = static_cast<int>(hundredths % 100);
  std::string text = (negative ? "-" : "") + whole.str() + "." +
                     (frac < 10 ? "0" : "") + std::to_string(frac);
  return text;
}

namespace {

const std::vector<std::string> kColumns = {
    "group",           "tool",          "batch",
    "n_pass",          "n_exists_fail", "pct_exists_fail",
    "mean_pct_fail",   "mean_pct_timeout", "mean_pct_fail_given_exists"};

std::vector<std::string> cells(const MeasureSummary &s) {
  return {s.group,
          s.tool,
          s.batch,
          std::to_string(s.num_pass),
          std::to_string(s.num_exists_fail),
          format_percentage(s.pct_exists_fail),
          format_percentage(s.mean_pct_fail),
          format_percentage(s.mean_pct_timeout),
          format_percentage(s.mean_pct_fail_given_exists)};
}

std::string csv_field(const std::string &v) {
  if (v.find_first_of(",\"\n") == std::string::npos)
    return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"')
      q += '"';
    q += c;
  }
  return q + '"';
}

} // namespace

std::string render_report(const std::vector<MeasureSummary> &summaries,
                          ReportFormat format) {
  std::ostringstream out;
  switch (format) {
  case ReportFormat::Csv: {
    for (std::size_t i = 0; i < kColumns.size(); ++i)
      out << (i ? "," : "") << kColumns[i];
    out << '\n';
    for (const auto &s : summaries) {
      auto row = cells(s);
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
    break;
  }
  case ReportFormat::Json: {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &s : summaries) {
      nlohmann::ordered_json j;
      auto row = cells(s);
      for (std::size_t i = 0; i < kColumns.size(); ++i) {
        if (i == 3 || i == 4)
          j[kColumns[i]] = i == 3 ? s.num_pass : s.num_exists_fail;
        else
          j[kColumns[i]] = row[i];
      }
      j["seeds_without_mutants"] = s.seeds_without_mutants;
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
    break;
  }
  case ReportFormat::Text: {
    std::vector<std::string> header = kColumns;
    header.push_back("no_mutants");
    std::vector<std::vector<std::string>> table{header};
    for (const auto &s : summaries) {
      auto row = cells(s);
      row.push_back(std::to_string(s.seeds_without_mutants));
      table.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto &r : table)
      for (std::size_t i = 0; i < r.size(); ++i)
        width[i] = std::max(width[i], r[i].size());
    for (const auto &r : table) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        // text columns left, numbers right
        std::string pad(width[i] - r[i].size(), ' ');
        line += (i ? "  " : "") + (i < 3 ? r[i] + pad : pad + r[i]);
      }
      while (!line.empty() && line.back() == ' ')
        line.pop_back();
      out << line << '\n';
    }
    break;
  }
  }
  return out.str();
}

} // namespace mugie
