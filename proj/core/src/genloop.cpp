// SPDX-License-Identifier: Apache-2.0

#include "mugie/genloop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>

#include "mugie/mutops.hpp"
#include "mugie/printer.hpp"
#include "mugie/rng.hpp"

namespace mugie {

using namespace ivl;

BatchSpec BatchSpec::all_operators(std::uint64_t rng_seed, std::size_t num) {
  BatchSpec spec;
  for (auto k : kAllOperators)
    spec.set_weight(k, k == OperatorKind::G2 ? 0.0 : 1.0);
  spec.num_mutants = num;
  spec.max_attempts = 10 * num;
  spec.rng_seed = rng_seed;
  return spec;
}

BatchSpec BatchSpec::single_operator(OperatorKind k, std::uint64_t rng_seed,
                                     std::size_t num) {
  BatchSpec spec;
  spec.set_weight(k, 1.0);
  spec.num_mutants = num;
  spec.max_attempts = 10 * num;
  spec.rng_seed = rng_seed;
  spec.mutate_triggers = k == OperatorKind::G2;
  return spec;
}

void validate(const BatchSpec &spec) {
  double total = 0;
  for (double w : spec.weights) {
    if (!std::isfinite(w) || w < 0)
      throw std::invalid_argument("operator weights must be finite and non-negative");
    total += w;
  }
  if (spec.num_mutants > 0 && total <= 0)
    throw std::invalid_argument("at least one operator weight must be positive");
  if (spec.weight(OperatorKind::G2) > 0 && !spec.mutate_triggers)
    throw std::invalid_argument(
        "G2 removes triggers and is only enabled for trigger-mutating runs");
}

namespace {

// Cumulative-weight inversion over the fixed operator order.
OperatorKind draw_operator(const BatchSpec &spec, Rng &rng) {
  double total = 0;
  for (double w : spec.weights)
    total += w;
  double u = rng.unit() * total;
  double cumulative = 0;
  std::optional<OperatorKind> last;
  for (auto k : kAllOperators) {
    double w = spec.weight(k);
    if (w <= 0)
      continue;
    cumulative += w;
    last = k;
    if (u < cumulative)
      return k;
  }
  return *last;
}

} // namespace

MutantPool generate_mutants(const ValidatedProgram &seed, const BatchSpec &spec,
                            const std::string &seed_name) {
  validate(spec);
  MutantPool pool;
  PoolMember origin{{seed.program(), std::nullopt},
                    {seed_name, {}, spec.rng_seed, program_fingerprint(seed.program())}};
  pool.fingerprints.insert(origin.record.fingerprint);
  pool.members.push_back(std::move(origin));

  Rng rng(spec.rng_seed);
  const std::size_t target = spec.num_mutants + 1;
  while (pool.members.size() < target) {
    if (pool.attempts >= spec.max_attempts)
      break;
    ++pool.attempts;

    const PoolMember &parent = pool.members[rng.below(pool.members.size())];
    OperatorKind op = draw_operator(spec, rng);
    // A two-file unit is never split again.
    if (op == OperatorKind::S6 && parent.unit.companion)
      continue;
    auto sites = enumerate_sites(parent.unit.primary, op);
    if (sites.empty())
      continue;
    const Site &site = sites[rng.below(sites.size())];
    MutationResult result = apply_mutation(parent.unit.primary, site);

    MutantUnit unit{std::move(result.primary),
                    op == OperatorKind::S6 ? std::move(result.companion)
                                           : parent.unit.companion};
    Fingerprint fp = unit_fingerprint(unit.primary, unit.companion);
    if (!pool.fingerprints.insert(fp).second)
      continue;
    MutantRecord rec = parent.record;
    rec.lineage.push_back(site);
    rec.fingerprint = std::move(fp);
    pool.members.push_back({std::move(unit), std::move(rec)});
  }
  return pool;
}

MutantUnit replay(const Program &seed, const MutantRecord &rec) {
  MutantUnit unit{seed, std::nullopt};
  for (const auto &site : rec.lineage) {
    if (site.op == OperatorKind::S6 && unit.companion)
      throw InvalidLineage("lineage splits a two-file mutant again at " +
                           to_string(site));
    MutationResult r;
    try {
      r = apply_mutation(unit.primary, site);
    } catch (const InvalidSite &e) {
      throw InvalidLineage(std::string("stale lineage: ") + e.what());
    }
    unit.primary = std::move(r.primary);
    if (r.companion)
      unit.companion = std::move(r.companion);
  }
  if (!rec.fingerprint.hex.empty() &&
      unit_fingerprint(unit.primary, unit.companion) != rec.fingerprint)
    throw InvalidLineage("replayed program does not match the recorded fingerprint");
  return unit;
}

// --- files -----------------------------------------------------------------

namespace {

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush())
    throw std::runtime_error("failed writing " + path.string());
}

std::optional<std::string> read_first_line(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::string line;
  std::getline(in, line);
  return line;
}

} // namespace

std::vector<WrittenMutant> write_pool(const MutantPool &pool,
                                      const std::filesystem::path &dir,
                                      const std::string &stem) {
  std::filesystem::create_directories(dir);
  std::vector<WrittenMutant> out;
  if (pool.members.empty())
    return out;
  const auto &seed = pool.members.front();
  write_file(dir / (stem + ".seed.bpl"),
             print_with_lineage(seed.unit.primary, seed.record));
  for (std::size_t k = 1; k < pool.members.size(); ++k) {
    const auto &m = pool.members[k];
    WrittenMutant w{"m" + std::to_string(k), {}};
    auto primary = dir / (stem + "." + w.mutant_id + ".bpl");
    write_file(primary, print_with_lineage(m.unit.primary, m.record));
    w.files.push_back(primary);
    if (m.unit.companion) {
      auto part2 = dir / (stem + "." + w.mutant_id + ".part2.bpl");
      write_file(part2, print_with_lineage(*m.unit.companion, m.record));
      w.files.push_back(part2);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<ProgramFiles> discover_programs(const std::filesystem::path &dir) {
  static const std::regex kSeedFile(R"((.+)\.seed\.bpl)");
  static const std::regex kMutantFile(R"((.+)\.m([0-9]+)\.bpl)");
  static const std::regex kPart2File(R"((.+)\.m([0-9]+)\.part2\.bpl)");

  struct Key {
    std::string stem;
    std::size_t number; // 0 for the seed
    auto operator<=>(const Key &) const = default;
  };
  std::map<Key, ProgramFiles> found;
  std::map<Key, std::filesystem::path> companions;

  std::vector<std::filesystem::path> entries;
  for (const auto &e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file())
      entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());

  for (const auto &path : entries) {
    std::string name = path.filename().string();
    std::smatch m;
    if (std::regex_match(name, m, kPart2File)) {
      companions[{m[1], std::stoul(m[2])}] = path;
      continue;
    }
    Key key;
    if (std::regex_match(name, m, kSeedFile))
      key = {m[1], 0};
    else if (std::regex_match(name, m, kMutantFile))
      key = {m[1], std::stoul(m[2])};
    else
      continue;
    auto line = read_first_line(path);
    if (!line)
      throw std::runtime_error("cannot read " + path.string());
    auto rec = parse_lineage_header(*line);
    if (!rec)
      throw std::runtime_error(path.string() + ": missing or malformed lineage header");
    ProgramFiles pf;
    pf.seed_name = rec->seed_name;
    pf.mutant_id = key.number == 0 ? std::string(kSeedId)
                                   : "m" + std::to_string(key.number);
    pf.lineage = lineage_ops(rec->lineage);
    pf.files.push_back(path);
    found.emplace(key, std::move(pf));
  }
  for (auto &[key, path] : companions) {
    auto it = found.find(key);
    if (it == found.end())
      throw std::runtime_error(path.string() + ": companion file without its primary");
    it->second.files.push_back(path);
  }
  std::vector<ProgramFiles> out;
  for (auto &[key, pf] : found)
    out.push_back(std::move(pf));
  return out;
}

} // namespace mugie
