// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli_util.hpp"
#include "mugie/parser.hpp"

namespace mugie::cli {

namespace {

std::map<OperatorKind, double> parse_weights(const std::string &text) {
  std::map<OperatorKind, double> weights;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty())
      continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("weight '" + item + "' is not OP=VALUE");
    auto op = parse_operator(item.substr(0, eq));
    if (!op)
      throw std::invalid_argument("unknown operator '" + item.substr(0, eq) + "'");
    std::size_t used = 0;
    double w = 0;
    try {
      w = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1)
      throw std::invalid_argument("weight '" + item + "' has no numeric value");
    if (!weights.emplace(*op, w).second)
      throw std::invalid_argument("operator " + item.substr(0, eq) + " weighted twice");
  }
  return weights;
}

} // namespace

BatchSpec make_batch_spec(const BatchRequest &req) {
  if (req.only && req.weights)
    throw std::invalid_argument("an operator restriction and explicit weights are exclusive");
  BatchSpec spec;
  if (req.only) {
    spec = BatchSpec::single_operator(*req.only, req.rng_seed);
  } else if (req.weights) {
    spec.rng_seed = req.rng_seed;
    for (const auto &[op, w] : *req.weights)
      spec.set_weight(op, w);
  } else {
    spec = BatchSpec::all_operators(req.rng_seed);
  }
  if (req.num)
    spec.num_mutants = *req.num;
  spec.max_attempts = req.max_attempts ? *req.max_attempts : 10 * spec.num_mutants;
  spec.mutate_triggers = spec.mutate_triggers || req.mutate_triggers;
  validate(spec);
  return spec;
}

BatchSpec batch_spec(const MutateOptions &opts) {
  BatchRequest req;
  req.only = opts.only;
  if (!opts.weights.empty())
    req.weights = parse_weights(opts.weights);
  req.num = opts.num;
  req.rng_seed = opts.rng_seed;
  req.max_attempts = opts.max_attempts;
  req.mutate_triggers = opts.mutate_triggers;
  return make_batch_spec(req);
}

std::optional<std::string> read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    return std::nullopt;
  return buf.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush())
    throw std::runtime_error("failed writing " + path.string());
}

std::string directory_name(const std::filesystem::path &dir) {
  auto abs = std::filesystem::absolute(dir).lexically_normal();
  if (abs.filename().empty())
    abs = abs.parent_path();
  return abs.filename().string();
}

std::vector<ProgramJob> jobs_for(const std::vector<ProgramFiles> &programs,
                                 const std::string &batch) {
  std::vector<ProgramJob> jobs;
  for (const auto &pf : programs)
    jobs.push_back({pf.seed_name, pf.mutant_id, pf.lineage, batch, pf.files});
  return jobs;
}

std::string verdict_summary(const std::vector<CampaignRow> &rows) {
  std::map<std::string, std::size_t> counts;
  for (const auto &r : rows)
    if (r.verdict)
      ++counts[std::string(to_string(r.verdict->kind))];
  std::string s;
  for (auto k : {VerdictKind::Verified, VerdictKind::VerificationFailure,
                 VerdictKind::ToolError, VerdictKind::Timeout}) {
    std::string name(to_string(k));
    s += (s.empty() ? "" : ", ") + name + " " + std::to_string(counts[name]);
  }
  return s;
}

int report_launch_errors(const std::vector<CampaignRow> &rows, std::ostream &err) {
  int failures = 0;
  for (const auto &r : rows) {
    if (r.verdict)
      continue;
    if (failures < 5)
      err << "error: " << r.seed << " " << r.mutant_id << ": " << r.launch_error << '\n';
    ++failures;
  }
  if (failures > 5)
    err << "error: " << failures - 5 << " more launch failures\n";
  return failures;
}

// --- mutate ----------------------------------------------------------------

int cmd_mutate(const MutateOptions &opts, std::ostream &out, std::ostream &err) {
  auto text = read_text(opts.seed);
  if (!text) {
    err << "error: cannot read " << opts.seed.string() << '\n';
    return kIoError;
  }
  const std::string seed_name = opts.seed.filename().string();
  auto checked = parse_and_check(*text, opts.seed.string());
  if (!checked.ok()) {
    err << checked.error_text();
    return kMalformedInput;
  }
  BatchSpec spec;
  try {
    spec = batch_spec(opts);
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  MutantPool pool = generate_mutants(*checked, spec, seed_name);
  try {
    write_pool(pool, opts.out, opts.seed.stem().string());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  out << seed_name << ": requested " << spec.num_mutants << ", generated "
      << pool.mutant_count() << ", attempts " << pool.attempts << "/"
      << spec.max_attempts << '\n';
  return kOk;
}

// --- check -----------------------------------------------------------------

int cmd_check(const CheckOptions &opts, std::ostream &out, std::ostream &err) {
  try {
    validate(opts.tool);
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  std::vector<ProgramFiles> programs;
  try {
    programs = discover_programs(opts.dir);
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::runtime_error &e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  if (programs.empty()) {
    err << "error: no programs with lineage headers in " << opts.dir.string() << '\n';
    return kNothingToDo;
  }
  const std::string batch = opts.batch ? *opts.batch : directory_name(opts.dir);
  auto rows = check_batch(opts.tool, jobs_for(programs, batch), opts.workers);

  auto path = opts.results ? *opts.results : opts.dir / "results.ndjson";
  std::ostringstream ndjson;
  write_results(ndjson, rows);
  try {
    write_text(path, ndjson.str());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  out << batch << ": " << rows.size() << " programs; " << verdict_summary(rows) << '\n';
  if (report_launch_errors(rows, err) > 0)
    return kToolLaunch;
  return kOk;
}

// --- report ----------------------------------------------------------------

int cmd_report(const ReportOptions &opts, std::ostream &out, std::ostream &err) {
  std::ifstream in(opts.results);
  if (!in) {
    err << "error: cannot read " << opts.results.string() << '\n';
    return kIoError;
  }
  GroupMap groups;
  if (opts.group_map) {
    std::ifstream gin(*opts.group_map);
    if (!gin) {
      err << "error: cannot read " << opts.group_map->string() << '\n';
      return kIoError;
    }
    try {
      groups = parse_group_map(gin);
    } catch (const MalformedRows &e) {
      err << "error: " << e.what() << '\n';
      return kMalformedInput;
    }
  }
  std::string text;
  try {
    text = render_report(compute_measures(read_results(in), groups), opts.format);
  } catch (const MalformedResults &e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const MalformedRows &e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  if (!opts.out) {
    out << text;
    return kOk;
  }
  try {
    write_text(*opts.out, text);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

// --- argument parsing --------------------------------------------------------

namespace {

OperatorKind operator_arg(const std::string &text) {
  auto op = parse_operator(text);
  if (!op)
    throw CLI::ValidationError("--only", "unknown operator '" + text + "'");
  return *op;
}

std::string default_tool_name(const std::string &command) {
  std::istringstream words(command);
  std::string first;
  words >> first;
  auto name = std::filesystem::path(first).filename().string();
  return name.empty() ? "tool" : name;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Mutation-based robustness testing for Boogie verifiers", "mugie"};
  app.set_version_flag("--version", std::string("mugie ") + MUGIE_VERSION);
  app.require_subcommand(1);

  MutateOptions mutate;
  std::string only;
  std::size_t num = 0, max_attempts = 0;
  auto *mut = app.add_subcommand("mutate", "Generate mutants of one seed program");
  mut->add_option("--seed", mutate.seed, "Seed program")->required();
  mut->add_option("--out", mutate.out, "Output directory")->required();
  auto *num_opt = mut->add_option("--num", num, "Mutants to generate (default 100, 50 with --only)");
  mut->add_option("--rng-seed", mutate.rng_seed, "Random seed");
  mut->add_option("--only", only, "Use a single operator (S1, S5, ..., G2)");
  mut->add_option("--weights", mutate.weights, "Operator weights, e.g. S1=1,L6=2");
  auto *max_opt = mut->add_option("--max-attempts", max_attempts, "Attempt budget (default 10 x num)");
  mut->add_flag("--mutate-triggers", mutate.mutate_triggers, "Allow G2");

  CheckOptions check;
  std::string results_path, batch;
  std::vector<std::string> failure_patterns;
  auto *chk = app.add_subcommand("check", "Run a verifier on generated programs");
  chk->add_option("--dir", check.dir, "Directory written by mutate")->required();
  chk->add_option("--tool", check.tool.command_template,
                  "Command template; {files} expands to the program files")
      ->required();
  auto *name_opt = chk->add_option("--tool-name", check.tool.name, "Tool name in results");
  chk->add_option("--timeout", check.tool.timeout_seconds, "Seconds per run")
      ->capture_default_str();
  chk->add_option("--confirm", check.tool.timeout_confirm_runs,
                  "Runs before a timeout is accepted")
      ->capture_default_str();
  chk->add_option("--success-pattern", check.tool.success_pattern)->capture_default_str();
  auto *fail_opt = chk->add_option("--failure-pattern", failure_patterns,
                                   "Verification failure pattern (repeatable)");
  auto *out_opt = chk->add_option("--out", results_path, "Results file (default <dir>/results.ndjson)");
  auto *batch_opt = chk->add_option("--batch", batch, "Batch label (default: directory name)");
  chk->add_option("--workers", check.workers, "Parallel verifier runs")->capture_default_str();

  ReportOptions report;
  std::string format = "csv", report_out, group_map;
  auto *rep = app.add_subcommand("report", "Compute robustness measures from results");
  rep->add_option("--results", report.results, "Results file")->required();
  auto *gm_opt = rep->add_option("--group-map", group_map, "Lines of `seed group`");
  rep->add_option("--format", format, "csv, json or text")
      ->check(CLI::IsMember({"csv", "json", "text"}))
      ->capture_default_str();
  auto *rout_opt = rep->add_option("--out", report_out, "Output file (default stdout)");

  std::filesystem::path config_path;
  auto *camp = app.add_subcommand("campaign", "Run a configured mutate/check/report campaign");
  camp->add_option("--config", config_path, "YAML campaign file")->required();

  try {
    app.parse(argc, argv);
    if (!only.empty())
      mutate.only = operator_arg(only);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformedInput;
  }

  try {
    if (*mut) {
      if (*num_opt)
        mutate.num = num;
      if (*max_opt)
        mutate.max_attempts = max_attempts;
      return cmd_mutate(mutate, out, err);
    }
    if (*chk) {
      if (!*name_opt)
        check.tool.name = default_tool_name(check.tool.command_template);
      if (*fail_opt)
        check.tool.failure_patterns = failure_patterns;
      if (*out_opt)
        check.results = results_path;
      if (*batch_opt)
        check.batch = batch;
      return cmd_check(check, out, err);
    }
    if (*rep) {
      report.format = *parse_report_format(format);
      if (*gm_opt)
        report.group_map = group_map;
      if (*rout_opt)
        report.out = report_out;
      return cmd_report(report, out, err);
    }
    CampaignConfig config;
    try {
      config = load_campaign_config(config_path);
    } catch (const ConfigError &e) {
      err << "error: " << e.what() << '\n';
      return kMalformedInput;
    } catch (const std::ios_base::failure &e) {
      err << "error: " << e.what() << '\n';
      return kIoError;
    }
    return cmd_campaign(config, out, err);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

} // namespace mugie::cli
