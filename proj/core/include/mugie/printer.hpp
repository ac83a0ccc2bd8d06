// SPDX-License-Identifier: Apache-2.0
//
// Canonical concrete syntax. One declaration per line group, two-space
// indentation, every procedure and implementation with an explicit returns
// clause, and binary or unary operands that are themselves operators wrapped
// in parentheses. Output is a function of the AST alone.

#pragma once

#include <string>

#include "mugie/ast.hpp"

namespace mugie {

struct MutantRecord;

std::string print(const ivl::Program &p);
std::string print_expr(const ivl::Expr &e);
std::string print_type(const ivl::Type &t);

// print(p) preceded by the lineage header line.
std::string print_with_lineage(const ivl::Program &p, const MutantRecord &rec);

} // namespace mugie
