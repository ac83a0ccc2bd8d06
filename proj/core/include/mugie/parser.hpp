// SPDX-License-Identifier: Apache-2.0
//
// Front end for the Boogie subset: a recursive-descent parser followed by a
// whole-unit resolution and type checking pass. Resolution sees every
// top-level name before checking any declaration, so declaration order never
// matters.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mugie/ast.hpp"
#include "mugie/diagnostics.hpp"

namespace mugie {

// A program that passed typecheck(). Only the checker constructs one.
class ValidatedProgram {
public:
  const ivl::Program &program() const { return program_; }
  operator const ivl::Program &() const { return program_; }

private:
  friend Result<ValidatedProgram> typecheck(const ivl::Program &p,
                                            const std::string &origin);
  explicit ValidatedProgram(ivl::Program p) : program_(std::move(p)) {}
  ivl::Program program_;
};

// Syntax only. Comments are skipped; constructs outside the subset
// (bitvectors, labels and gotos, `where` clauses, polymorphism) are rejected
// with a diagnostic naming the construct.
Result<ivl::Program> parse(std::string_view source,
                           const std::string &origin = "<input>");

Result<ValidatedProgram> typecheck(const ivl::Program &p,
                                   const std::string &origin = "<input>");

// Checks a two-file unit as a single compilation unit (primary first).
Result<ValidatedProgram> typecheck_unit(const ivl::Program &primary,
                                        const std::optional<ivl::Program> &companion,
                                        const std::string &origin = "<input>");

// parse() followed by typecheck().
Result<ValidatedProgram> parse_and_check(std::string_view source,
                                         const std::string &origin = "<input>");

} // namespace mugie
