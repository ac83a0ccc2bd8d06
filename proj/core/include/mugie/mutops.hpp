// SPDX-License-Identifier: Apache-2.0
//
// The eleven mutation operators. Each is a pure function from a Program and
// a Site to a new Program; enumerate_sites lists every place an operator
// applies, in a fixed order, without duplicates (swaps use unordered pairs).
//
//   S1 swap two top-level declarations
//   S5 split a procedure definition into declaration + implementation
//   S6 move one declaration into a companion file
//   L1 swap two local variable declarations
//   L2 split `var v1, ..., vn: T` into `var v1: T; var v2, ..., vn: T`
//   L4 join two preconditions into `(e_i) && (e_j)`
//   L5 join two postconditions into `(e_i) && (e_j)`
//   L6 swap two requires/ensures/invariant clauses, or two adjacent asserts
//   L8 negate an if condition and exchange its then and else blocks
//   G1 insert a `true` requires/ensures/invariant/assert
//   G2 remove one trigger from a quantifier (not semantics-preserving)
//
// Free or attributed clauses are never sites.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mugie/ast.hpp"
#include "mugie/lineage.hpp"

namespace mugie {

struct MutationResult {
  ivl::Program primary;
  std::optional<ivl::Program> companion; // set exactly for S6
  Site applied;
};

class InvalidSite : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::vector<Site> enumerate_sites(const ivl::Program &p, OperatorKind k);

// Dispatches on site.op. Throws InvalidSite when the site does not address a
// valid location of `p`.
MutationResult apply_mutation(const ivl::Program &p, const Site &site);

MutationResult apply_S1(const ivl::Program &p, const Site &site);
MutationResult apply_S5(const ivl::Program &p, const Site &site);
MutationResult apply_S6(const ivl::Program &p, const Site &site);
MutationResult apply_L1(const ivl::Program &p, const Site &site);
MutationResult apply_L2(const ivl::Program &p, const Site &site);
MutationResult apply_L4(const ivl::Program &p, const Site &site);
MutationResult apply_L5(const ivl::Program &p, const Site &site);
MutationResult apply_L6(const ivl::Program &p, const Site &site);
MutationResult apply_L8(const ivl::Program &p, const Site &site);
MutationResult apply_G1(const ivl::Program &p, const Site &site);
MutationResult apply_G2(const ivl::Program &p, const Site &site);

// Total number of trigger annotations across all quantifiers of `p`.
std::size_t trigger_count(const ivl::Program &p);

} // namespace mugie
