// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used to check the library: AST
// navigation written from the NodePath definition, and brute-force
// enumerators.

#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "mugie/ast.hpp"
#include "mugie/lineage.hpp"

namespace mugie::oracle {

inline ivl::Block *body_of(ivl::Program &p, const NodePath &path) {
  std::size_t seen = 0;
  for (auto &d : p.declarations) {
    ivl::Block *b = nullptr;
    if (auto *proc = d.as<ivl::ProcedureDecl>(); proc && proc->name == path.proc && proc->body)
      b = &*proc->body;
    else if (auto *impl = d.as<ivl::ImplementationDecl>(); impl && impl->name == path.proc)
      b = &impl->body;
    if (b && seen++ == path.body_ordinal)
      return b;
  }
  throw std::out_of_range("no body " + to_string(path));
}

// The block reached by following path.steps (ignores path.stmt).
inline ivl::Block *block_at(ivl::Program &p, const NodePath &path) {
  ivl::Block *b = body_of(p, path);
  for (const auto &step : path.steps) {
    auto &s = b->at(step.stmt);
    if (auto *i = s.as<ivl::If>())
      b = step.branch == Branch::Then ? &i->then_block : &*i->else_block;
    else if (auto *w = s.as<ivl::While>())
      b = &w->body;
    else
      throw std::out_of_range("step into a simple statement");
  }
  return b;
}

inline ivl::ProcedureDecl *procedure(ivl::Program &p, const std::string &name) {
  for (auto &d : p.declarations)
    if (auto *proc = d.as<ivl::ProcedureDecl>(); proc && proc->name == name)
      return proc;
  throw std::out_of_range("no procedure " + name);
}

// Undoes a G1 insertion described by `s`.
inline ivl::Program remove_inserted(ivl::Program p, const Site &s) {
  const std::size_t pos = s.args.back();
  switch (s.clause) {
  case ivl::ClauseKind::Requires: {
    auto &v = procedure(p, s.path.proc)->spec.requires_;
    v.erase(v.begin() + pos);
    break;
  }
  case ivl::ClauseKind::Ensures: {
    auto &v = procedure(p, s.path.proc)->spec.ensures;
    v.erase(v.begin() + pos);
    break;
  }
  case ivl::ClauseKind::Invariant: {
    auto &v = block_at(p, s.path)->at(*s.path.stmt).as<ivl::While>()->invariants;
    v.erase(v.begin() + pos);
    break;
  }
  case ivl::ClauseKind::Assert: {
    auto *b = block_at(p, s.path);
    b->erase(b->begin() + pos);
    break;
  }
  }
  return p;
}

// Operands of a right- or left-nested chain of &&.
inline void flatten_and(const ivl::ExprPtr &e, std::vector<ivl::Expr> &out) {
  if (const auto *b = e->as<ivl::Binary>(); b && b->op == ivl::BinaryOp::And) {
    flatten_and(b->lhs, out);
    flatten_and(b->rhs, out);
  } else {
    out.push_back(*e);
  }
}

inline std::vector<ivl::Expr> flatten_clauses(const std::vector<ivl::SpecClause> &cs) {
  std::vector<ivl::Expr> out;
  for (const auto &c : cs)
    flatten_and(c.expr, out);
  return out;
}

// Every ordering of p's top-level declarations, by std::next_permutation
// over indices.
inline std::vector<ivl::Program> all_declaration_orders(const ivl::Program &p) {
  std::vector<std::size_t> idx(p.declarations.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<ivl::Program> out;
  do {
    ivl::Program q;
    for (auto i : idx)
      q.declarations.push_back(p.declarations[i]);
    out.push_back(std::move(q));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

} // namespace mugie::oracle
