// SPDX-License-Identifier: Apache-2.0
//
// Canonical traversal orders shared by site enumeration and application.

#pragma once

#include <type_traits>
#include <utility>

#include "mugie/ast.hpp"

namespace mugie::detail {

template <class Blk, class F> void for_each_slot_in_block(Blk &block, F &f);

// Calls f on every expression slot of a statement, in source order.
template <class Stmt, class F> void for_each_slot_in_stmt(Stmt &s, F &f) {
  std::visit(
      [&](auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ivl::Assign>) {
          for (auto &t : n.lhs)
            for (auto &sel : t.selectors)
              for (auto &e : sel)
                f(e);
          for (auto &e : n.rhs)
            f(e);
        } else if constexpr (std::is_same_v<T, ivl::AssertStmt> ||
                             std::is_same_v<T, ivl::AssumeStmt>) {
          f(n.expr);
        } else if constexpr (std::is_same_v<T, ivl::Call>) {
          for (auto &e : n.args)
            f(e);
        } else if constexpr (std::is_same_v<T, ivl::If>) {
          f(n.cond);
          for_each_slot_in_block(n.then_block, f);
          if (n.else_block)
            for_each_slot_in_block(*n.else_block, f);
        } else if constexpr (std::is_same_v<T, ivl::While>) {
          f(n.cond);
          for (auto &c : n.invariants)
            f(c.expr);
          for_each_slot_in_block(n.body, f);
        }
      },
      s.node);
}

template <class Blk, class F> void for_each_slot_in_block(Blk &block, F &f) {
  for (auto &s : block)
    for_each_slot_in_stmt(s, f);
}

// Calls f on every top-level expression slot of a declaration, in source
// order. Works on const and mutable declarations alike.
template <class Decl, class F> void for_each_expr_slot(Decl &d, F &&f) {
  std::visit(
      [&](auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ivl::FunctionDecl>) {
          if (n.body)
            f(*n.body);
        } else if constexpr (std::is_same_v<T, ivl::AxiomDecl>) {
          f(n.expr);
        } else if constexpr (std::is_same_v<T, ivl::ProcedureDecl>) {
          for (auto &c : n.spec.requires_)
            f(c.expr);
          for (auto &c : n.spec.ensures)
            f(c.expr);
          if (n.body)
            for_each_slot_in_block(*n.body, f);
        } else if constexpr (std::is_same_v<T, ivl::ImplementationDecl>) {
          for_each_slot_in_block(n.body, f);
        }
      },
      d.node);
}

// Pre-order walk over every quantifier inside `e`.
template <class F> void for_each_quantifier(const ivl::Expr &e, F &f) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ivl::Quantifier>) {
          f(n);
          for (const auto &t : n.triggers)
            for (const auto &term : t.terms)
              for_each_quantifier(*term, f);
          for_each_quantifier(*n.body, f);
        } else if constexpr (std::is_same_v<T, ivl::MapSelect>) {
          for_each_quantifier(*n.map, f);
          for (const auto &i : n.indices)
            for_each_quantifier(*i, f);
        } else if constexpr (std::is_same_v<T, ivl::MapUpdate>) {
          for_each_quantifier(*n.map, f);
          for (const auto &i : n.indices)
            for_each_quantifier(*i, f);
          for_each_quantifier(*n.value, f);
        } else if constexpr (std::is_same_v<T, ivl::Unary>) {
          for_each_quantifier(*n.operand, f);
        } else if constexpr (std::is_same_v<T, ivl::Binary>) {
          for_each_quantifier(*n.lhs, f);
          for_each_quantifier(*n.rhs, f);
        } else if constexpr (std::is_same_v<T, ivl::FunctionApp>) {
          for (const auto &a : n.args)
            for_each_quantifier(*a, f);
        } else if constexpr (std::is_same_v<T, ivl::Old>) {
          for_each_quantifier(*n.operand, f);
        }
      },
      e.node);
}

// Rebuilds `e` with the `target`-th quantifier (pre-order, counting from
// `counter`) replaced by fn(quantifier). `counter` advances past every
// quantifier visited.
template <class F>
ivl::ExprPtr rewrite_quantifier(const ivl::ExprPtr &e, std::size_t &counter,
                                std::size_t target, F &fn) {
  using namespace ivl;
  auto rec = [&](const ExprPtr &child) {
    return rewrite_quantifier(child, counter, target, fn);
  };
  auto rec_all = [&](const std::vector<ExprPtr> &xs) {
    std::vector<ExprPtr> out;
    out.reserve(xs.size());
    for (const auto &x : xs)
      out.push_back(rec(x));
    return out;
  };
  return std::visit(
      [&](const auto &n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Quantifier>) {
          if (counter++ == target)
            return make_expr(fn(n), e->loc);
          Quantifier q = n;
          for (auto &t : q.triggers)
            t.terms = rec_all(t.terms);
          q.body = rec(n.body);
          return make_expr(std::move(q), e->loc);
        } else if constexpr (std::is_same_v<T, MapSelect>) {
          auto m = rec(n.map);
          return make_expr(MapSelect{m, rec_all(n.indices)}, e->loc);
        } else if constexpr (std::is_same_v<T, MapUpdate>) {
          auto m = rec(n.map);
          auto idx = rec_all(n.indices);
          return make_expr(MapUpdate{m, std::move(idx), rec(n.value)}, e->loc);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return make_expr(Unary{n.op, rec(n.operand)}, e->loc);
        } else if constexpr (std::is_same_v<T, Binary>) {
          auto l = rec(n.lhs);
          return make_expr(Binary{n.op, l, rec(n.rhs)}, e->loc);
        } else if constexpr (std::is_same_v<T, FunctionApp>) {
          return make_expr(FunctionApp{n.name, rec_all(n.args)}, e->loc);
        } else if constexpr (std::is_same_v<T, Old>) {
          return make_expr(Old{rec(n.operand)}, e->loc);
        } else {
          return e;
        }
      },
      e->node);
}

} // namespace mugie::detail
