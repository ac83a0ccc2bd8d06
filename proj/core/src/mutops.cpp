// SPDX-License-Identifier: Apache-2.0

#include "mugie/mutops.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "traverse.hpp"

namespace mugie {

using namespace ivl;

namespace {

[[noreturn]] void invalid(const Site &site, const std::string &why) {
  throw InvalidSite("invalid site " + to_string(site) + ": " + why);
}

void require_op(const Site &site, OperatorKind k) {
  if (site.op != k)
    invalid(site, "operator mismatch");
}

void require_args(const Site &site, std::size_t n) {
  if (site.args.size() != n)
    invalid(site, "expected " + std::to_string(n) + " arguments");
}

// --- addressing ------------------------------------------------------------

// Visits every body in declaration order with its NodePath root.
template <class Prog, class F> void for_each_body(Prog &p, F &&f) {
  std::map<std::string, std::size_t> ordinals;
  for (std::size_t d = 0; d < p.declarations.size(); ++d) {
    auto &decl = p.declarations[d];
    if (auto *proc = decl.template as<ProcedureDecl>()) {
      if (!proc->body)
        continue;
      NodePath root{proc->name, ordinals[proc->name]++, {}, std::nullopt};
      f(root, *proc->body);
    } else if (auto *impl = decl.template as<ImplementationDecl>()) {
      NodePath root{impl->name, ordinals[impl->name]++, {}, std::nullopt};
      f(root, impl->body);
    }
  }
}

Block *find_body(Program &p, const std::string &proc, std::size_t ordinal) {
  Block *found = nullptr;
  for_each_body(p, [&](const NodePath &root, Block &b) {
    if (!found && root.proc == proc && root.body_ordinal == ordinal)
      found = &b;
  });
  return found;
}

ProcedureDecl *find_procedure(Program &p, const std::string &name) {
  for (auto &d : p.declarations)
    if (auto *proc = d.as<ProcedureDecl>(); proc && proc->name == name)
      return proc;
  return nullptr;
}

// Follows path.steps from the addressed body. Returns null on a dangling
// path.
Block *find_block(Program &p, const NodePath &path) {
  Block *b = find_body(p, path.proc, path.body_ordinal);
  for (const auto &step : path.steps) {
    if (!b || step.stmt >= b->size())
      return nullptr;
    Statement &s = (*b)[step.stmt];
    if (auto *i = s.as<If>()) {
      if (step.branch == Branch::Then)
        b = &i->then_block;
      else if (step.branch == Branch::Else && i->else_block)
        b = &*i->else_block;
      else
        return nullptr;
    } else if (auto *w = s.as<While>(); w && step.branch == Branch::Loop) {
      b = &w->body;
    } else {
      return nullptr;
    }
  }
  return b;
}

Statement *find_stmt(Program &p, const NodePath &path) {
  if (!path.stmt)
    return nullptr;
  Block *b = find_block(p, path);
  if (!b || *path.stmt >= b->size())
    return nullptr;
  return &(*b)[*path.stmt];
}

// Pre-order walk of every block reachable from `b`.
template <class F> void walk_blocks(const Block &b, NodePath &at, F &f) {
  f(at, b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Statement &s = b[i];
    if (const auto *ifs = s.as<If>()) {
      at.steps.push_back({i, Branch::Then});
      walk_blocks(ifs->then_block, at, f);
      at.steps.back().branch = Branch::Else;
      if (ifs->else_block)
        walk_blocks(*ifs->else_block, at, f);
      at.steps.pop_back();
    } else if (const auto *w = s.as<While>()) {
      at.steps.push_back({i, Branch::Loop});
      walk_blocks(w->body, at, f);
      at.steps.pop_back();
    }
  }
}

void add_pairs(std::vector<Site> &out, const Site &base,
               const std::vector<std::size_t> &candidates) {
  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      Site s = base;
      s.args = {candidates[a], candidates[b]};
      out.push_back(std::move(s));
    }
}

std::vector<std::size_t> mutable_clauses(const std::vector<SpecClause> &cs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (cs[i].mutable_site())
      out.push_back(i);
  return out;
}

NodePath proc_path(const std::string &name) { return {name, 0, {}, std::nullopt}; }

// --- enumeration -----------------------------------------------------------

std::vector<Site> sites_S1(const Program &p) {
  std::vector<Site> out;
  std::vector<std::size_t> all(p.declarations.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  add_pairs(out, Site{OperatorKind::S1, {}, {}, {}}, all);
  return out;
}

std::vector<Site> sites_S5(const Program &p) {
  std::vector<Site> out;
  for (const auto &d : p.declarations)
    if (const auto *proc = d.as<ProcedureDecl>(); proc && proc->body)
      out.push_back({OperatorKind::S5, proc_path(proc->name), {}, {}});
  return out;
}

std::vector<Site> sites_S6(const Program &p) {
  std::vector<Site> out;
  if (p.declarations.size() < 2)
    return out;
  for (std::size_t d = 0; d < p.declarations.size(); ++d)
    out.push_back({OperatorKind::S6, {}, {}, {d}});
  return out;
}

std::vector<Site> sites_L1(const Program &p) {
  std::vector<Site> out;
  for_each_body(p, [&](const NodePath &root, const Block &b) {
    std::size_t n = local_decl_count(b);
    std::vector<std::size_t> locals(n);
    for (std::size_t i = 0; i < n; ++i)
      locals[i] = i;
    add_pairs(out, Site{OperatorKind::L1, root, {}, {}}, locals);
  });
  return out;
}

std::vector<Site> sites_L2(const Program &p) {
  std::vector<Site> out;
  for_each_body(p, [&](const NodePath &root, const Block &b) {
    std::size_t n = local_decl_count(b);
    for (std::size_t i = 0; i < n; ++i) {
      const auto &v = *b[i].as<LocalVarDecl>();
      if (v.names.size() >= 2 && v.attrs.empty())
        out.push_back({OperatorKind::L2, root, {}, {i}});
    }
  });
  return out;
}

std::vector<Site> sites_join(const Program &p, OperatorKind k) {
  std::vector<Site> out;
  for (const auto &d : p.declarations) {
    const auto *proc = d.as<ProcedureDecl>();
    if (!proc)
      continue;
    const auto &clauses =
        k == OperatorKind::L4 ? proc->spec.requires_ : proc->spec.ensures;
    add_pairs(out, Site{k, proc_path(proc->name), {}, {}}, mutable_clauses(clauses));
  }
  return out;
}

// Visits every body block of a procedure-like declaration.
template <class F> void for_each_body_block(const Program &p, F &&f) {
  for_each_body(p, [&](const NodePath &root, const Block &b) {
    NodePath at = root;
    walk_blocks(b, at, f);
  });
}

std::vector<Site> sites_L6(const Program &p) {
  std::vector<Site> out;
  for (const auto &d : p.declarations) {
    const auto *proc = d.as<ProcedureDecl>();
    if (!proc)
      continue;
    add_pairs(out, Site{OperatorKind::L6, proc_path(proc->name), ClauseKind::Requires, {}},
              mutable_clauses(proc->spec.requires_));
    add_pairs(out, Site{OperatorKind::L6, proc_path(proc->name), ClauseKind::Ensures, {}},
              mutable_clauses(proc->spec.ensures));
  }
  for_each_body_block(p, [&](const NodePath &at, const Block &b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (const auto *w = b[i].as<While>()) {
        NodePath loop = at;
        loop.stmt = i;
        add_pairs(out, Site{OperatorKind::L6, loop, ClauseKind::Invariant, {}},
                  mutable_clauses(w->invariants));
      }
    }
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const auto *a1 = b[i].as<AssertStmt>();
      const auto *a2 = b[i + 1].as<AssertStmt>();
      if (a1 && a2 && a1->attrs.empty() && a2->attrs.empty())
        out.push_back({OperatorKind::L6, at, ClauseKind::Assert, {i, i + 1}});
    }
  });
  return out;
}

std::vector<Site> sites_L8(const Program &p) {
  std::vector<Site> out;
  for_each_body_block(p, [&](const NodePath &at, const Block &b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (const auto *s = b[i].as<If>(); s && s->else_block) {
        NodePath stmt = at;
        stmt.stmt = i;
        out.push_back({OperatorKind::L8, stmt, {}, {}});
      }
    }
  });
  return out;
}

std::vector<Site> sites_G1(const Program &p) {
  std::vector<Site> out;
  for (const auto &d : p.declarations) {
    const auto *proc = d.as<ProcedureDecl>();
    if (!proc)
      continue;
    for (std::size_t i = 0; i <= proc->spec.requires_.size(); ++i)
      out.push_back({OperatorKind::G1, proc_path(proc->name), ClauseKind::Requires, {i}});
    for (std::size_t i = 0; i <= proc->spec.ensures.size(); ++i)
      out.push_back({OperatorKind::G1, proc_path(proc->name), ClauseKind::Ensures, {i}});
  }
  for_each_body_block(p, [&](const NodePath &at, const Block &b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (const auto *w = b[i].as<While>()) {
        NodePath loop = at;
        loop.stmt = i;
        for (std::size_t k = 0; k <= w->invariants.size(); ++k)
          out.push_back({OperatorKind::G1, loop, ClauseKind::Invariant, {k}});
      }
    }
    std::size_t first = at.steps.empty() ? local_decl_count(b) : 0;
    for (std::size_t i = first; i <= b.size(); ++i)
      out.push_back({OperatorKind::G1, at, ClauseKind::Assert, {i}});
  });
  return out;
}

std::vector<Site> sites_G2(const Program &p) {
  std::vector<Site> out;
  for (std::size_t d = 0; d < p.declarations.size(); ++d) {
    std::size_t q = 0;
    auto on_quant = [&](const Quantifier &quant) {
      for (std::size_t t = 0; t < quant.triggers.size(); ++t)
        out.push_back({OperatorKind::G2, {}, {}, {d, q, t}});
      ++q;
    };
    detail::for_each_expr_slot(p.declarations[d], [&](const ExprPtr &e) {
      detail::for_each_quantifier(*e, on_quant);
    });
  }
  return out;
}

} // namespace

std::vector<Site> enumerate_sites(const Program &p, OperatorKind k) {
  switch (k) {
  case OperatorKind::S1: return sites_S1(p);
  case OperatorKind::S5: return sites_S5(p);
  case OperatorKind::S6: return sites_S6(p);
  case OperatorKind::L1: return sites_L1(p);
  case OperatorKind::L2: return sites_L2(p);
  case OperatorKind::L4:
  case OperatorKind::L5: return sites_join(p, k);
  case OperatorKind::L6: return sites_L6(p);
  case OperatorKind::L8: return sites_L8(p);
  case OperatorKind::G1: return sites_G1(p);
  case OperatorKind::G2: return sites_G2(p);
  }
  return {};
}

// --- application -----------------------------------------------------------

MutationResult apply_S1(const Program &p, const Site &site) {
  require_op(site, OperatorKind::S1);
  require_args(site, 2);
  auto [i, j] = std::pair{site.args[0], site.args[1]};
  if (i == j || i >= p.declarations.size() || j >= p.declarations.size())
    invalid(site, "declaration indices out of range or equal");
  Program out = p;
  std::swap(out.declarations[i], out.declarations[j]);
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_S5(const Program &p, const Site &site) {
  require_op(site, OperatorKind::S5);
  Program out = p;
  for (std::size_t d = 0; d < out.declarations.size(); ++d) {
    auto *proc = out.declarations[d].as<ProcedureDecl>();
    if (!proc || proc->name != site.path.proc)
      continue;
    if (!proc->body)
      invalid(site, "procedure has no inline body");
    ImplementationDecl impl;
    impl.name = proc->name;
    impl.ins = proc->ins;
    impl.outs = proc->outs;
    impl.explicit_returns = proc->explicit_returns;
    impl.body = std::move(*proc->body);
    proc->body.reset();
    Declaration decl{std::move(impl), out.declarations[d].loc};
    out.declarations.insert(out.declarations.begin() + static_cast<long>(d) + 1,
                            std::move(decl));
    return {std::move(out), std::nullopt, site};
  }
  invalid(site, "no such procedure");
}

MutationResult apply_S6(const Program &p, const Site &site) {
  require_op(site, OperatorKind::S6);
  require_args(site, 1);
  std::size_t d = site.args[0];
  if (p.declarations.size() < 2)
    invalid(site, "program has fewer than two declarations");
  if (d >= p.declarations.size())
    invalid(site, "declaration index out of range");
  Program primary = p;
  Program companion;
  companion.declarations.push_back(primary.declarations[d]);
  primary.declarations.erase(primary.declarations.begin() + static_cast<long>(d));
  return {std::move(primary), std::move(companion), site};
}

MutationResult apply_L1(const Program &p, const Site &site) {
  require_op(site, OperatorKind::L1);
  require_args(site, 2);
  Program out = p;
  Block *b = find_body(out, site.path.proc, site.path.body_ordinal);
  if (!b || !site.path.steps.empty() || site.path.stmt)
    invalid(site, "no such body");
  std::size_t n = local_decl_count(*b);
  auto [i, j] = std::pair{site.args[0], site.args[1]};
  if (i == j || i >= n || j >= n)
    invalid(site, "not two distinct local declarations");
  std::swap((*b)[i], (*b)[j]);
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_L2(const Program &p, const Site &site) {
  require_op(site, OperatorKind::L2);
  require_args(site, 1);
  Program out = p;
  Block *b = find_body(out, site.path.proc, site.path.body_ordinal);
  if (!b || !site.path.steps.empty() || site.path.stmt)
    invalid(site, "no such body");
  std::size_t i = site.args[0];
  if (i >= local_decl_count(*b))
    invalid(site, "not a local declaration");
  auto &v = *(*b)[i].as<LocalVarDecl>();
  if (v.names.size() < 2 || !v.attrs.empty())
    invalid(site, "declaration does not declare several unattributed variables");
  LocalVarDecl first{{}, {v.names.front()}, v.type};
  v.names.erase(v.names.begin());
  SourceLoc loc = (*b)[i].loc;
  b->insert(b->begin() + static_cast<long>(i), Statement{std::move(first), loc});
  return {std::move(out), std::nullopt, site};
}

namespace {

MutationResult apply_join(const Program &p, const Site &site, OperatorKind k) {
  require_op(site, k);
  require_args(site, 2);
  Program out = p;
  ProcedureDecl *proc = find_procedure(out, site.path.proc);
  if (!proc)
    invalid(site, "no such procedure");
  auto &clauses = k == OperatorKind::L4 ? proc->spec.requires_ : proc->spec.ensures;
  auto [i, j] = std::pair{site.args[0], site.args[1]};
  if (i >= j || j >= clauses.size())
    invalid(site, "clause indices must satisfy i < j < count");
  if (!clauses[i].mutable_site() || !clauses[j].mutable_site())
    invalid(site, "free or attributed clause");
  clauses[i].expr = make_binary(BinaryOp::And, clauses[i].expr, clauses[j].expr);
  clauses.erase(clauses.begin() + static_cast<long>(j));
  return {std::move(out), std::nullopt, site};
}

std::vector<SpecClause> &proc_clauses(Program &p, const Site &site) {
  if (!site.path.steps.empty() || site.path.stmt || site.path.body_ordinal != 0)
    invalid(site, "procedure clauses are addressed by name only");
  ProcedureDecl *proc = find_procedure(p, site.path.proc);
  if (!proc)
    invalid(site, "no such procedure");
  return site.clause == ClauseKind::Requires ? proc->spec.requires_
                                             : proc->spec.ensures;
}

While &loop_at(Program &p, const Site &site) {
  Statement *s = find_stmt(p, site.path);
  While *w = s ? s->as<While>() : nullptr;
  if (!w)
    invalid(site, "path does not address a while loop");
  return *w;
}

Block &block_at(Program &p, const Site &site) {
  if (site.path.stmt)
    invalid(site, "assert sites address a block, not a statement");
  Block *b = find_block(p, site.path);
  if (!b)
    invalid(site, "path does not address a block");
  return *b;
}

void swap_clauses(std::vector<SpecClause> &cs, const Site &site) {
  auto [i, j] = std::pair{site.args[0], site.args[1]};
  if (i == j || i >= cs.size() || j >= cs.size())
    invalid(site, "clause indices out of range or equal");
  if (!cs[i].mutable_site() || !cs[j].mutable_site())
    invalid(site, "free or attributed clause");
  std::swap(cs[i], cs[j]);
}

} // namespace

MutationResult apply_L4(const Program &p, const Site &site) {
  return apply_join(p, site, OperatorKind::L4);
}

MutationResult apply_L5(const Program &p, const Site &site) {
  return apply_join(p, site, OperatorKind::L5);
}

MutationResult apply_L6(const Program &p, const Site &site) {
  require_op(site, OperatorKind::L6);
  require_args(site, 2);
  Program out = p;
  switch (site.clause) {
  case ClauseKind::Requires:
  case ClauseKind::Ensures:
    swap_clauses(proc_clauses(out, site), site);
    break;
  case ClauseKind::Invariant:
    swap_clauses(loop_at(out, site).invariants, site);
    break;
  case ClauseKind::Assert: {
    Block &b = block_at(out, site);
    auto [i, j] = std::pair{site.args[0], site.args[1]};
    if (j != i + 1 || j >= b.size())
      invalid(site, "asserts must be adjacent");
    const auto *a1 = b[i].as<AssertStmt>();
    const auto *a2 = b[j].as<AssertStmt>();
    if (!a1 || !a2 || !a1->attrs.empty() || !a2->attrs.empty())
      invalid(site, "not two unattributed assert statements");
    std::swap(b[i], b[j]);
    break;
  }
  }
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_L8(const Program &p, const Site &site) {
  require_op(site, OperatorKind::L8);
  Program out = p;
  Statement *s = find_stmt(out, site.path);
  If *ifs = s ? s->as<If>() : nullptr;
  if (!ifs)
    invalid(site, "path does not address an if statement");
  if (!ifs->else_block)
    invalid(site, "if statement has no else branch");
  ifs->cond = make_not(ifs->cond);
  std::swap(ifs->then_block, *ifs->else_block);
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_G1(const Program &p, const Site &site) {
  require_op(site, OperatorKind::G1);
  require_args(site, 1);
  std::size_t pos = site.args[0];
  Program out = p;
  auto insert_clause = [&](std::vector<SpecClause> &cs, ClauseKind kind) {
    if (pos > cs.size())
      invalid(site, "insertion position out of range");
    SpecClause c;
    c.kind = kind;
    c.expr = make_bool(true);
    cs.insert(cs.begin() + static_cast<long>(pos), std::move(c));
  };
  switch (site.clause) {
  case ClauseKind::Requires:
  case ClauseKind::Ensures:
    insert_clause(proc_clauses(out, site), site.clause);
    break;
  case ClauseKind::Invariant:
    insert_clause(loop_at(out, site).invariants, ClauseKind::Invariant);
    break;
  case ClauseKind::Assert: {
    Block &b = block_at(out, site);
    std::size_t first = site.path.steps.empty() ? local_decl_count(b) : 0;
    if (pos < first || pos > b.size())
      invalid(site, "insertion position out of range");
    b.insert(b.begin() + static_cast<long>(pos),
             Statement{AssertStmt{{}, make_bool(true)}, {}});
    break;
  }
  }
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_G2(const Program &p, const Site &site) {
  require_op(site, OperatorKind::G2);
  require_args(site, 3);
  std::size_t d = site.args[0], target = site.args[1], t = site.args[2];
  if (d >= p.declarations.size())
    invalid(site, "declaration index out of range");
  Program out = p;
  std::size_t counter = 0;
  bool removed = false;
  auto drop = [&](const Quantifier &q) {
    if (t >= q.triggers.size())
      invalid(site, "trigger index out of range");
    Quantifier copy = q;
    copy.triggers.erase(copy.triggers.begin() + static_cast<long>(t));
    removed = true;
    return copy;
  };
  detail::for_each_expr_slot(out.declarations[d], [&](ExprPtr &e) {
    if (!removed)
      e = detail::rewrite_quantifier(e, counter, target, drop);
  });
  if (!removed)
    invalid(site, "no such quantifier");
  return {std::move(out), std::nullopt, site};
}

MutationResult apply_mutation(const Program &p, const Site &site) {
  switch (site.op) {
  case OperatorKind::S1: return apply_S1(p, site);
  case OperatorKind::S5: return apply_S5(p, site);
  case OperatorKind::S6: return apply_S6(p, site);
  case OperatorKind::L1: return apply_L1(p, site);
  case OperatorKind::L2: return apply_L2(p, site);
  case OperatorKind::L4: return apply_L4(p, site);
  case OperatorKind::L5: return apply_L5(p, site);
  case OperatorKind::L6: return apply_L6(p, site);
  case OperatorKind::L8: return apply_L8(p, site);
  case OperatorKind::G1: return apply_G1(p, site);
  case OperatorKind::G2: return apply_G2(p, site);
  }
  invalid(site, "unknown operator");
}

std::size_t trigger_count(const Program &p) {
  std::size_t n = 0;
  auto on_quant = [&](const Quantifier &q) { n += q.triggers.size(); };
  for (const auto &d : p.declarations)
    detail::for_each_expr_slot(d, [&](const ExprPtr &e) {
      detail::for_each_quantifier(*e, on_quant);
    });
  return n;
}

} // namespace mugie
