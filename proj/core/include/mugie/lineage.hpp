// SPDX-License-Identifier: Apache-2.0
//
// Vocabulary shared by the mutation operators, the generation loop and the
// file formats: operator kinds, structural sites, mutant records and the
// one-line lineage header written at the top of every generated file:
//
//   // mugie-lineage seed=<basename> rng=<u64> ops=<OP1(args)>[,<OPk(args)>...]

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mugie/ast.hpp"

namespace mugie {

enum class OperatorKind { S1, S5, S6, L1, L2, L4, L5, L6, L8, G1, G2 };

// Fixed order used for weighted draws and report layout.
inline constexpr std::array<OperatorKind, 11> kAllOperators = {
    OperatorKind::S1, OperatorKind::S5, OperatorKind::S6, OperatorKind::L1,
    OperatorKind::L2, OperatorKind::L4, OperatorKind::L5, OperatorKind::L6,
    OperatorKind::L8, OperatorKind::G1, OperatorKind::G2,
};

std::string_view to_string(OperatorKind k);
std::optional<OperatorKind> parse_operator(std::string_view text);

// G2 may change what a verifier can prove; it only runs when requested.
constexpr bool semantics_risky(OperatorKind k) { return k == OperatorKind::G2; }

// Branch taken from a compound statement into one of its blocks.
enum class Branch : char { Then = 't', Else = 'e', Loop = 'w' };

struct PathStep {
  std::size_t stmt = 0;
  Branch branch = Branch::Then;
  friend bool operator==(const PathStep &, const PathStep &) = default;
};

// Structural address inside a procedure. `proc` names the procedure;
// `body_ordinal` picks among the bodies carrying that name in declaration
// order (inline definition or implementations). Steps descend into nested
// blocks and `stmt`, when set, selects one statement of the final block.
//
// Text form: proc[@k]{/<n><t|e|w>}[:<n>]
struct NodePath {
  std::string proc;
  std::size_t body_ordinal = 0;
  std::vector<PathStep> steps;
  std::optional<std::size_t> stmt;
  friend bool operator==(const NodePath &, const NodePath &) = default;
};

std::string to_string(const NodePath &p);
std::optional<NodePath> parse_node_path(std::string_view text);

// Where an operator applies. Which fields are meaningful depends on `op`:
//
//   S1(i,j)  S5(proc)  S6(decl)  L1(body,i,j)  L2(body,stmt)
//   L4(proc,i,j)  L5(proc,i,j)  L6(elem,kind,i,j)  L8(stmt)
//   G1(elem,kind,pos)  G2(decl:quant,trigger)
//
// `args` holds the trailing integers in that order (G2: decl, quant, t).
struct Site {
  OperatorKind op = OperatorKind::S1;
  NodePath path;
  ivl::ClauseKind clause = ivl::ClauseKind::Requires;
  std::vector<std::size_t> args;
  friend bool operator==(const Site &, const Site &) = default;
};

std::string to_string(const Site &s);
std::optional<Site> parse_site(std::string_view text);

struct MutantRecord {
  std::string seed_name;
  std::vector<Site> lineage;
  std::uint64_t rng_seed = 0;
  ivl::Fingerprint fingerprint;
};

// The `ops=` payload: sites comma-separated in application order.
std::string lineage_ops(const std::vector<Site> &lineage);
std::optional<std::vector<Site>> parse_lineage_ops(std::string_view text);

std::string lineage_header(const MutantRecord &rec);

// Reads a header line back. The fingerprint is not part of the header and
// is left empty.
std::optional<MutantRecord> parse_lineage_header(std::string_view line);

inline constexpr std::string_view kLineagePrefix = "// mugie-lineage ";

} // namespace mugie
