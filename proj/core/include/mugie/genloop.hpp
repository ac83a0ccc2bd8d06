// SPDX-License-Identifier: Apache-2.0
//
// Weighted random mutant generation. The pool starts as {seed}; every
// attempt picks a pool member uniformly, draws an operator with probability
// proportional to its weight, picks one of that operator's sites uniformly
// and adds the result if its fingerprint is new. Attempts that draw an
// inapplicable operator or produce a duplicate still count. The loop stops
// once the pool holds the seed plus `num_mutants` mutants or after
// `max_attempts` attempts, whichever comes first.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mugie/ast.hpp"
#include "mugie/lineage.hpp"
#include "mugie/parser.hpp"

namespace mugie {

struct BatchSpec {
  // Indexed in kAllOperators order.
  std::array<double, kAllOperators.size()> weights{};
  std::size_t num_mutants = 100;
  std::size_t max_attempts = 1000;
  std::uint64_t rng_seed = 0;
  bool mutate_triggers = false;

  double weight(OperatorKind k) const { return weights[static_cast<std::size_t>(k)]; }
  void set_weight(OperatorKind k, double w) { weights[static_cast<std::size_t>(k)] = w; }

  // Every operator but G2 with weight 1; 100 mutants.
  static BatchSpec all_operators(std::uint64_t rng_seed, std::size_t num = 100);
  // Only `k`, with weight 1; 50 mutants. Requesting G2 sets mutate_triggers.
  static BatchSpec single_operator(OperatorKind k, std::uint64_t rng_seed,
                                   std::size_t num = 50);
};

// Throws std::invalid_argument when the spec breaks its invariants: negative
// or non-finite weights, no positive weight while mutants are requested, or
// a positive G2 weight without mutate_triggers.
void validate(const BatchSpec &spec);

// A program as it is handed to a verifier: one file, or two for S6 mutants.
struct MutantUnit {
  ivl::Program primary;
  std::optional<ivl::Program> companion;
};

struct PoolMember {
  MutantUnit unit;
  MutantRecord record;
};

struct MutantPool {
  // members[0] is the seed; the rest are mutants in discovery order.
  std::vector<PoolMember> members;
  std::set<ivl::Fingerprint> fingerprints;
  std::size_t attempts = 0;

  std::size_t mutant_count() const { return members.empty() ? 0 : members.size() - 1; }
};

MutantPool generate_mutants(const ValidatedProgram &seed, const BatchSpec &spec,
                            const std::string &seed_name);

class InvalidLineage : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Re-applies rec.lineage to the seed. Throws InvalidLineage if a site does
// not apply or, when rec.fingerprint is set, the result does not match it.
MutantUnit replay(const ivl::Program &seed, const MutantRecord &rec);

// --- files -----------------------------------------------------------------

struct WrittenMutant {
  std::string mutant_id; // "m<k>"
  std::vector<std::filesystem::path> files;
};

// Writes `<stem>.seed.bpl` (the printed seed with an empty lineage) and one
// `<stem>.m<k>.bpl` per mutant, plus `<stem>.m<k>.part2.bpl` for two-file
// mutants. Every file starts with the lineage header. Throws
// std::filesystem::filesystem_error or std::runtime_error on I/O failure.
std::vector<WrittenMutant> write_pool(const MutantPool &pool,
                                      const std::filesystem::path &dir,
                                      const std::string &stem);

inline constexpr std::string_view kSeedId = "SEED";

// A program found on disk by its lineage header.
struct ProgramFiles {
  std::string seed_name;
  std::string mutant_id; // kSeedId or "m<k>"
  std::string lineage;   // the ops= payload
  std::vector<std::filesystem::path> files;
};

// Scans `dir` for files written by write_pool. Seeds come before their
// mutants; mutants are ordered by number. Throws std::runtime_error on a
// companion file without its primary or an unreadable header.
std::vector<ProgramFiles> discover_programs(const std::filesystem::path &dir);

} // namespace mugie
