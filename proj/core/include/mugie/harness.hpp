// SPDX-License-Identifier: Apache-2.0
//
// Runs an external verifier on generated programs and classifies what it
// reports. A verdict is decided by the first matching row:
//
//   killed at the timeout                         -> Timeout
//   exit 0 and the success pattern matches        -> Verified
//   any failure pattern matches                   -> VerificationFailure
//   anything else                                 -> ToolError
//
// Patterns are ECMAScript regular expressions searched anywhere in the
// combined stdout/stderr.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mugie {

struct ToolSpec {
  std::string name = "boogie";
  // Must contain `{files}` exactly once; it expands to the program paths.
  std::string command_template = "boogie {files}";
  double timeout_seconds = 20.0;
  int timeout_confirm_runs = 10;
  std::string success_pattern = R"((\d+) verified, 0 errors)";
  std::vector<std::string> failure_patterns = {R"(, [1-9][0-9]* errors?)",
                                               R"(postcondition .* not hold)"};
};

// Throws std::invalid_argument if the template or patterns are unusable.
void validate(const ToolSpec &tool);

enum class VerdictKind { Verified, VerificationFailure, ToolError, Timeout };

std::string_view to_string(VerdictKind k);
std::optional<VerdictKind> parse_verdict_kind(std::string_view text);

struct Verdict {
  VerdictKind kind = VerdictKind::ToolError;
  double wall_time_seconds = 0;
  std::optional<int> raw_exit; // empty when the run was killed at the timeout
  std::string captured_output;
  int runs = 1; // processes spawned to reach this verdict
};

// The verifier could not be started (missing binary, bad template).
class LaunchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

VerdictKind classify(const ToolSpec &tool, std::optional<int> exit_code,
                     bool timed_out, const std::string &output);

// Splits the template into argv words (honouring single and double quotes)
// and substitutes the file list.
std::vector<std::string> expand_command(const ToolSpec &tool,
                                        const std::vector<std::filesystem::path> &files);

// One run. The child runs in its own process group, which is killed as a
// whole at the timeout. Throws LaunchError when the command cannot be
// started and std::runtime_error when an input file is unreadable.
Verdict run_one(const ToolSpec &tool, const std::vector<std::filesystem::path> &files);

// Reruns a timed-out program up to timeout_confirm_runs times in total and
// reports Timeout only if every run timed out; otherwise the first
// non-timeout verdict.
Verdict run_confirmed(const ToolSpec &tool,
                      const std::vector<std::filesystem::path> &files);

inline constexpr std::string_view kDefaultBatch = "default";

struct ProgramJob {
  std::string seed;
  std::string mutant_id;
  std::string lineage;
  std::string batch{kDefaultBatch};
  std::vector<std::filesystem::path> files;
};

struct CampaignRow {
  std::string seed;
  std::string mutant_id;
  std::string lineage;
  std::string tool;
  std::string batch;
  std::optional<Verdict> verdict;
  std::string launch_error; // set instead of a verdict when the run failed to start
};

// Runs every job with run_confirmed, up to `workers` at a time. Rows come
// back in job order regardless of scheduling; launch failures are recorded
// per row.
std::vector<CampaignRow> check_batch(const ToolSpec &tool,
                                     const std::vector<ProgramJob> &jobs,
                                     unsigned workers = 1);

// Newline-delimited JSON, one object per row with a verdict:
// {seed, mutant_id, lineage, tool, batch, kind, wall_time_seconds, raw_exit}
// raw_exit is an integer or the string "timeout".
void write_results(std::ostream &out, const std::vector<CampaignRow> &rows);

class MalformedResults : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<CampaignRow> read_results(std::istream &in);

} // namespace mugie
