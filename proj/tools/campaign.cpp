// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "cli.hpp"
#include "cli_util.hpp"
#include "mugie/parser.hpp"

namespace mugie::cli {

std::vector<CampaignBatch> standard_batches(std::uint64_t rng_seed) {
  std::vector<CampaignBatch> batches;
  batches.push_back({"M_all", BatchSpec::all_operators(rng_seed)});
  for (auto k : kAllOperators)
    batches.push_back({"M_" + std::string(to_string(k)), BatchSpec::single_operator(k, rng_seed)});
  return batches;
}

// --- config ------------------------------------------------------------------

namespace {

[[noreturn]] void fail(const YAML::Node &node, const std::string &what) {
  auto mark = node.Mark();
  std::string where = mark.is_null() ? "" : "line " + std::to_string(mark.line + 1) + ": ";
  throw ConfigError(where + what);
}

void allow_keys(const YAML::Node &map, std::initializer_list<std::string_view> keys,
                const std::string &section) {
  if (!map.IsMap())
    fail(map, section + " must be a mapping");
  for (const auto &kv : map) {
    auto key = kv.first.as<std::string>();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      fail(kv.first, "unknown key '" + key + "' in " + section);
  }
}

template <class T> T scalar(const YAML::Node &node, const std::string &what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(node, what + " has the wrong type");
  }
}

ToolSpec parse_tool(const YAML::Node &n) {
  allow_keys(n, {"name", "command", "timeout", "confirm", "success_pattern", "failure_patterns"},
             "tool");
  ToolSpec t;
  if (!n["name"] || !n["command"])
    fail(n, "a tool needs `name` and `command`");
  t.name = scalar<std::string>(n["name"], "tool name");
  t.command_template = scalar<std::string>(n["command"], "tool command");
  if (n["timeout"])
    t.timeout_seconds = scalar<double>(n["timeout"], "timeout");
  if (n["confirm"])
    t.timeout_confirm_runs = scalar<int>(n["confirm"], "confirm");
  if (n["success_pattern"])
    t.success_pattern = scalar<std::string>(n["success_pattern"], "success_pattern");
  if (n["failure_patterns"])
    t.failure_patterns = scalar<std::vector<std::string>>(n["failure_patterns"], "failure_patterns");
  try {
    validate(t);
  } catch (const std::invalid_argument &e) {
    fail(n, "tool " + t.name + ": " + e.what());
  }
  return t;
}

CampaignBatch parse_batch(const YAML::Node &n, std::uint64_t default_seed) {
  allow_keys(n, {"name", "only", "weights", "num", "max_attempts", "rng_seed", "mutate_triggers"},
             "batch");
  BatchRequest req;
  req.rng_seed = default_seed;
  std::string name;
  if (n["only"]) {
    auto text = scalar<std::string>(n["only"], "only");
    req.only = parse_operator(text);
    if (!req.only)
      fail(n["only"], "unknown operator '" + text + "'");
    name = "M_" + text;
  }
  if (n["weights"]) {
    if (!n["weights"].IsMap())
      fail(n["weights"], "weights must map operators to numbers");
    std::map<OperatorKind, double> w;
    for (const auto &kv : n["weights"]) {
      auto text = kv.first.as<std::string>();
      auto op = parse_operator(text);
      if (!op)
        fail(kv.first, "unknown operator '" + text + "'");
      w[*op] = scalar<double>(kv.second, "weight");
    }
    req.weights = std::move(w);
  }
  if (n["name"])
    name = scalar<std::string>(n["name"], "batch name");
  if (name.empty())
    fail(n, "a batch needs a `name` unless it sets `only`");
  if (name.find('/') != std::string::npos || name == "." || name == "..")
    fail(n, "batch name '" + name + "' is not a plain directory name");
  if (n["num"])
    req.num = scalar<std::size_t>(n["num"], "num");
  if (n["max_attempts"])
    req.max_attempts = scalar<std::size_t>(n["max_attempts"], "max_attempts");
  if (n["rng_seed"])
    req.rng_seed = scalar<std::uint64_t>(n["rng_seed"], "rng_seed");
  if (n["mutate_triggers"])
    req.mutate_triggers = scalar<bool>(n["mutate_triggers"], "mutate_triggers");
  try {
    return {name, make_batch_spec(req)};
  } catch (const std::invalid_argument &e) {
    fail(n, "batch " + name + ": " + e.what());
  }
}

} // namespace

CampaignConfig parse_campaign_config(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw ConfigError(e.what());
  }
  CampaignConfig c;
  if (root.IsNull())
    return c;
  allow_keys(root, {"output", "workers", "rng_seed", "seeds", "tools", "batches", "report"},
             "campaign");
  if (root["output"])
    c.output = scalar<std::string>(root["output"], "output");
  if (root["workers"])
    c.workers = scalar<unsigned>(root["workers"], "workers");
  if (c.workers == 0)
    fail(root["workers"], "workers must be at least 1");
  if (root["rng_seed"])
    c.rng_seed = scalar<std::uint64_t>(root["rng_seed"], "rng_seed");

  std::set<std::string> stems;
  if (const auto seeds = root["seeds"]) {
    if (!seeds.IsSequence())
      fail(seeds, "seeds must be a list");
    for (const auto &s : seeds) {
      CampaignSeed seed;
      if (s.IsScalar()) {
        seed.path = s.as<std::string>();
      } else {
        allow_keys(s, {"path", "group"}, "seed");
        if (!s["path"])
          fail(s, "a seed needs a `path`");
        seed.path = scalar<std::string>(s["path"], "seed path");
        if (s["group"])
          seed.group = scalar<std::string>(s["group"], "seed group");
      }
      if (!stems.insert(seed.path.filename().string()).second)
        fail(s, "two seeds share the file name " + seed.path.filename().string());
      c.seeds.push_back(std::move(seed));
    }
  }
  if (const auto tools = root["tools"]) {
    if (!tools.IsSequence())
      fail(tools, "tools must be a list");
    std::set<std::string> names;
    for (const auto &t : tools) {
      c.tools.push_back(parse_tool(t));
      if (!names.insert(c.tools.back().name).second)
        fail(t, "duplicate tool name " + c.tools.back().name);
    }
  }
  if (const auto batches = root["batches"]) {
    if (!batches.IsSequence())
      fail(batches, "batches must be a list");
    std::set<std::string> names;
    for (const auto &b : batches) {
      c.batches.push_back(parse_batch(b, c.rng_seed));
      if (!names.insert(c.batches.back().name).second)
        fail(b, "duplicate batch name " + c.batches.back().name);
    }
  } else {
    c.batches = standard_batches(c.rng_seed);
  }
  if (const auto report = root["report"]) {
    allow_keys(report, {"format"}, "report");
    if (report["format"]) {
      auto f = parse_report_format(scalar<std::string>(report["format"], "format"));
      if (!f)
        fail(report["format"], "report format must be csv, json or text");
      c.report_format = *f;
    }
  }
  return c;
}

CampaignConfig load_campaign_config(const std::filesystem::path &path) {
  auto text = read_text(path);
  if (!text)
    throw std::ios_base::failure("cannot read " + path.string());
  return parse_campaign_config(*text);
}

// --- campaign ----------------------------------------------------------------

namespace {

// Runs f(i) for i in [0, n) on up to `workers` threads.
template <class F> void parallel_for(std::size_t n, unsigned workers, F f) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      f(i);
  };
  unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();
}

const char *report_extension(ReportFormat f) {
  switch (f) {
  case ReportFormat::Csv: return "csv";
  case ReportFormat::Json: return "json";
  case ReportFormat::Text: return "txt";
  }
  return "txt";
}

} // namespace

int cmd_campaign(const CampaignConfig &config, std::ostream &out, std::ostream &err) {
  if (config.seeds.empty()) {
    err << "error: the campaign lists no seeds\n";
    return kNothingToDo;
  }
  if (config.tools.empty()) {
    err << "error: the campaign lists no tools\n";
    return kMalformedInput;
  }

  struct LoadedSeed {
    std::string name;
    std::string stem;
    ValidatedProgram program;
  };
  std::vector<LoadedSeed> seeds;
  GroupMap groups;
  for (const auto &s : config.seeds) {
    auto text = read_text(s.path);
    if (!text) {
      err << "warning: skipping seed " << s.path.string() << ": cannot read it\n";
      continue;
    }
    auto checked = parse_and_check(*text, s.path.string());
    if (!checked.ok()) {
      err << "warning: skipping seed " << s.path.string() << ":\n" << checked.error_text();
      continue;
    }
    std::string name = s.path.filename().string();
    if (s.group)
      groups[name] = *s.group;
    seeds.push_back({name, s.path.stem().string(), std::move(*checked)});
  }
  if (seeds.empty()) {
    err << "error: no seed could be loaded\n";
    return kMalformedInput;
  }

  // Generation: one unit per (seed, batch), each sequential inside.
  struct Unit {
    std::size_t seed;
    std::size_t batch;
    std::filesystem::path dir;
    std::string summary;
    std::string error;
  };
  std::vector<Unit> units;
  for (std::size_t s = 0; s < seeds.size(); ++s)
    for (std::size_t b = 0; b < config.batches.size(); ++b)
      units.push_back({s, b, config.output / seeds[s].stem / config.batches[b].name, {}, {}});

  parallel_for(units.size(), config.workers, [&](std::size_t i) {
    Unit &u = units[i];
    const auto &batch = config.batches[u.batch];
    try {
      std::filesystem::remove_all(u.dir);
      auto pool = generate_mutants(seeds[u.seed].program, batch.spec, seeds[u.seed].name);
      write_pool(pool, u.dir, seeds[u.seed].stem);
      u.summary = seeds[u.seed].name + " " + batch.name + ": generated " +
                  std::to_string(pool.mutant_count()) + "/" +
                  std::to_string(batch.spec.num_mutants) + " in " +
                  std::to_string(pool.attempts) + " attempts";
    } catch (const std::exception &e) {
      u.error = e.what();
    }
  });

  std::vector<ProgramJob> jobs;
  std::set<std::size_t> completed;
  std::set<std::size_t> broken;
  for (const auto &u : units) {
    if (!u.error.empty()) {
      err << "warning: " << seeds[u.seed].name << " " << config.batches[u.batch].name
          << ": " << u.error << '\n';
      broken.insert(u.seed);
      continue;
    }
    out << u.summary << '\n';
  }
  for (const auto &u : units) {
    if (broken.count(u.seed))
      continue;
    completed.insert(u.seed);
    auto more = jobs_for(discover_programs(u.dir), config.batches[u.batch].name);
    jobs.insert(jobs.end(), more.begin(), more.end());
  }
  if (completed.empty()) {
    err << "error: no seed completed generation\n";
    return kIoError;
  }

  std::vector<CampaignRow> rows;
  int launch_failures = 0;
  for (const auto &tool : config.tools) {
    auto tool_rows = check_batch(tool, jobs, config.workers);
    out << tool.name << ": " << tool_rows.size() << " programs; "
        << verdict_summary(tool_rows) << '\n';
    launch_failures += report_launch_errors(tool_rows, err);
    rows.insert(rows.end(), tool_rows.begin(), tool_rows.end());
  }

  std::ostringstream ndjson;
  write_results(ndjson, rows);
  std::string report;
  try {
    report = render_report(compute_measures(rows, groups), config.report_format);
    write_text(config.output / "results.ndjson", ndjson.str());
    write_text(config.output / (std::string("report.") + report_extension(config.report_format)),
               report);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  out << report;
  return launch_failures > 0 ? kToolLaunch : kOk;
}

} // namespace mugie::cli
