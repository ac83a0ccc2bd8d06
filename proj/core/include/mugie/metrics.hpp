// SPDX-License-Identifier: Apache-2.0
//
// Robustness measures over verification results, per (group, tool, batch).
// For a tool t, the passing seeds are those whose SEED row is Verified; a
// passing seed "has a failure" when any of its mutant rows is not Verified.
// Means are taken over passing seeds that have at least one mutant row;
// passing seeds without mutants are counted in `seeds_without_mutants`.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mugie/harness.hpp"

namespace mugie {

using Rational = boost::multiprecision::cpp_rational;

// Empty when the underlying set is empty; rendered as "n/a".
using Percentage = std::optional<Rational>;

struct MeasureSummary {
  std::string group;
  std::string tool;
  std::string batch;
  std::size_t num_pass = 0;
  std::size_t num_exists_fail = 0;
  Percentage pct_exists_fail;
  Percentage mean_pct_fail;
  Percentage mean_pct_timeout;
  Percentage mean_pct_fail_given_exists;
  std::size_t seeds_without_mutants = 0;
};

class MalformedRows : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kDefaultGroup = "all";

// seed name -> group
using GroupMap = std::map<std::string, std::string>;

// Lines of `seed group`; `#` starts a comment. Throws MalformedRows on a
// line with other than two fields or a seed listed twice.
GroupMap parse_group_map(std::istream &in);

// Rows without a verdict (launch failures) are ignored. Throws MalformedRows
// for a mutant row whose seed has no SEED row under the same tool and batch,
// or for a repeated SEED row. Summaries are sorted by (group, tool, batch).
std::vector<MeasureSummary> compute_measures(const std::vector<CampaignRow> &rows,
                                             const GroupMap &groups = {});

enum class ReportFormat { Csv, Json, Text };

std::optional<ReportFormat> parse_report_format(std::string_view name);

// Two decimals, half rounded up; "n/a" when empty.
std::string format_percentage(const Percentage &p);

std::string render_report(const std::vector<MeasureSummary> &summaries,
                          ReportFormat format);

} // namespace mugie
