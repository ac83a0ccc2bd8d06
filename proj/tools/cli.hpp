// SPDX-License-Identifier: Apache-2.0
//
// The `mugie` command line: mutate, check, report and campaign. Every
// subcommand is also callable in-process; output goes to the given streams.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mugie/genloop.hpp"
#include "mugie/harness.hpp"
#include "mugie/metrics.hpp"

namespace mugie::cli {

enum ExitCode : int {
  kOk = 0,
  kNothingToDo = 1,
  kMalformedInput = 2,
  kIoError = 3,
  kToolLaunch = 4,
};

struct MutateOptions {
  std::filesystem::path seed;
  std::filesystem::path out;
  std::optional<std::size_t> num; // 100, or 50 with `only`
  std::uint64_t rng_seed = 0;
  std::optional<OperatorKind> only;
  std::string weights; // "S1=1,L2=0.5"; unlisted operators get 0
  std::optional<std::size_t> max_attempts;
  bool mutate_triggers = false;
};

// Throws std::invalid_argument for malformed weights or inconsistent flags.
BatchSpec batch_spec(const MutateOptions &opts);

// Shared by the mutate flags and campaign batches. Exactly one of: a single
// operator, explicit weights (others 0), or neither (all but G2).
struct BatchRequest {
  std::optional<OperatorKind> only;
  std::optional<std::map<OperatorKind, double>> weights;
  std::optional<std::size_t> num;
  std::uint64_t rng_seed = 0;
  std::optional<std::size_t> max_attempts;
  bool mutate_triggers = false;
};

BatchSpec make_batch_spec(const BatchRequest &req);

int cmd_mutate(const MutateOptions &opts, std::ostream &out, std::ostream &err);

struct CheckOptions {
  std::filesystem::path dir;
  ToolSpec tool;
  std::optional<std::filesystem::path> results; // default <dir>/results.ndjson
  std::optional<std::string> batch;             // default: the directory name
  unsigned workers = 1;
};

int cmd_check(const CheckOptions &opts, std::ostream &out, std::ostream &err);

struct ReportOptions {
  std::filesystem::path results;
  std::optional<std::filesystem::path> group_map;
  ReportFormat format = ReportFormat::Csv;
  std::optional<std::filesystem::path> out; // default: standard output
};

int cmd_report(const ReportOptions &opts, std::ostream &out, std::ostream &err);

struct CampaignBatch {
  std::string name;
  BatchSpec spec;
};

struct CampaignSeed {
  std::filesystem::path path;
  std::optional<std::string> group;
};

struct CampaignConfig {
  std::filesystem::path output = "mugie-campaign";
  unsigned workers = 1;
  std::uint64_t rng_seed = 0;
  std::vector<CampaignSeed> seeds;
  std::vector<ToolSpec> tools;
  std::vector<CampaignBatch> batches;
  ReportFormat report_format = ReportFormat::Csv;
};

// M_all (every operator but G2, 100 mutants) and one 50-mutant batch per
// operator, G2 included; all seeded with `rng_seed`.
std::vector<CampaignBatch> standard_batches(std::uint64_t rng_seed);

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// YAML. Throws ConfigError on unknown keys, wrong types or invalid values.
CampaignConfig parse_campaign_config(const std::string &yaml_text);
CampaignConfig load_campaign_config(const std::filesystem::path &path);

// Writes <output>/<seed stem>/<batch>/ per (seed, batch), results.ndjson,
// and report.<csv|json|txt> under <output>.
int cmd_campaign(const CampaignConfig &config, std::ostream &out, std::ostream &err);

// Full argument parsing and dispatch; returns the exit status.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace mugie::cli
