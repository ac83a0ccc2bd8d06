// SPDX-License-Identifier: Apache-2.0
//
// Whole-unit name resolution and monomorphic type checking. All top-level
// names are collected first so that forward references resolve.

#include <algorithm>
#include <map>
#include <set>

#include "mugie/parser.hpp"
#include "mugie/printer.hpp"

namespace mugie {

using namespace ivl;

namespace {

struct VarInfo {
  Type type;
  bool assignable = false;
  bool global = false;
};

enum class Context { Single, TwoState };

class Checker {
public:
  explicit Checker(std::string origin) : origin_(std::move(origin)) {}

  std::vector<Diagnostic> run(const Program &p) {
    collect(p);
    check_type_decls();
    expand_global_types();
    for (const auto &d : p.declarations)
      std::visit([&](const auto &n) { check(n, d.loc); }, d.node);
    return std::move(diags_);
  }

private:
  void error(SourceLoc at, std::string msg) {
    diags_.push_back({Severity::Error, origin_, at.line, at.column, std::move(msg)});
  }

  // --- collection ----------------------------------------------------------

  void collect(const Program &p) {
    for (const auto &d : p.declarations) {
      if (const auto *t = d.as<TypeDecl>()) {
        if (!types_.emplace(t->name, t).second)
          error(d.loc, "duplicate type declaration '" + t->name + "'");
      } else if (const auto *c = d.as<ConstDecl>()) {
        for (const auto &n : c->names)
          add_global(n, c->type, false, d.loc);
      } else if (const auto *v = d.as<GlobalVarDecl>()) {
        for (const auto &n : v->names)
          add_global(n, v->type, true, d.loc);
      } else if (const auto *f = d.as<FunctionDecl>()) {
        if (!functions_.emplace(f->name, f).second)
          error(d.loc, "duplicate function declaration '" + f->name + "'");
      } else if (const auto *pr = d.as<ProcedureDecl>()) {
        if (!procedures_.emplace(pr->name, pr).second)
          error(d.loc, "duplicate procedure declaration '" + pr->name + "'");
      }
    }
  }

  void add_global(const std::string &name, const Type &t, bool assignable,
                  SourceLoc at) {
    if (!globals_.emplace(name, VarInfo{t, assignable, true}).second)
      error(at, "duplicate global name '" + name + "'");
  }

  // Unknown names are reported where the declaration itself is checked.
  void expand_global_types() {
    auto saved = std::move(diags_);
    diags_.clear();
    for (auto &[name, info] : globals_)
      info.type = resolve(info.type, {});
    diags_ = std::move(saved);
  }

  void check_type_decls() {
    for (const auto &[name, decl] : types_) {
      if (!decl->synonym)
        continue;
      std::set<std::string> seen{name};
      if (!synonym_acyclic(*decl->synonym, seen))
        error({}, "type synonym '" + name + "' is cyclic");
    }
  }

  bool synonym_acyclic(const Type &t, std::set<std::string> &seen) {
    if (t.kind == TypeKind::Map) {
      for (const auto &a : t.args)
        if (!synonym_acyclic(a, seen))
          return false;
      return true;
    }
    if (t.kind != TypeKind::Named)
      return true;
    if (seen.count(t.name))
      return false;
    auto it = types_.find(t.name);
    if (it == types_.end() || !it->second->synonym)
      return true;
    seen.insert(t.name);
    bool ok = synonym_acyclic(*it->second->synonym, seen);
    seen.erase(t.name);
    return ok;
  }

  // Expands synonyms; reports unknown type names. Cyclic synonyms were
  // already reported and expand to themselves.
  Type resolve(const Type &t, SourceLoc at, int depth = 0) {
    switch (t.kind) {
    case TypeKind::Int:
    case TypeKind::Bool:
      return t;
    case TypeKind::Map: {
      Type out = t;
      for (auto &a : out.args)
        a = resolve(a, at, depth);
      return out;
    }
    case TypeKind::Named: {
      auto it = types_.find(t.name);
      if (it == types_.end()) {
        error(at, "undeclared type '" + t.name + "'");
        return t;
      }
      if (it->second->synonym && depth < 64)
        return resolve(*it->second->synonym, at, depth + 1);
      return t;
    }
    }
    return t;
  }

  // --- scopes --------------------------------------------------------------

  struct Scope {
    std::map<std::string, VarInfo> vars;
  };

  const VarInfo *lookup(const std::string &name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->vars.find(name);
      if (f != it->vars.end())
        return &f->second;
    }
    auto g = globals_.find(name);
    return g == globals_.end() ? nullptr : &g->second;
  }

  void bind(const std::string &name, const Type &t, bool assignable, SourceLoc at,
            bool allow_shadow) {
    auto &top = scopes_.back().vars;
    if (!allow_shadow) {
      for (const auto &s : scopes_)
        if (s.vars.count(name)) {
          error(at, "duplicate variable '" + name + "'");
          return;
        }
    }
    if (!top.emplace(name, VarInfo{resolve(t, at), assignable, false}).second)
      error(at, "duplicate variable '" + name + "'");
  }

  struct ScopeGuard {
    Checker &c;
    explicit ScopeGuard(Checker &checker) : c(checker) { c.scopes_.emplace_back(); }
    ~ScopeGuard() { c.scopes_.pop_back(); }
  };

  // --- declarations --------------------------------------------------------

  void check(const TypeDecl &d, SourceLoc at) {
    if (d.synonym)
      resolve(*d.synonym, at);
  }
  void check(const ConstDecl &d, SourceLoc at) { resolve(d.type, at); }
  void check(const GlobalVarDecl &d, SourceLoc at) { resolve(d.type, at); }

  void check(const FunctionDecl &d, SourceLoc at) {
    ScopeGuard g(*this);
    for (const auto &a : d.params) {
      Type t = resolve(a.type, at);
      if (a.name)
        bind(*a.name, t, false, at, false);
    }
    Type result = resolve(d.result.type, at);
    if (d.body) {
      Type body = expr(**d.body, Context::Single);
      expect_type(body, result, (*d.body)->loc, "function body");
    }
  }

  void check(const AxiomDecl &d, SourceLoc) {
    expect_bool(expr(*d.expr, Context::Single), d.expr->loc, "axiom");
  }

  void bind_params(const std::vector<TypedName> &ins,
                   const std::vector<TypedName> &outs, SourceLoc at) {
    for (const auto &p : ins)
      bind(p.name, p.type, false, at, false);
    for (const auto &p : outs)
      bind(p.name, p.type, true, at, false);
  }

  void check(const ProcedureDecl &d, SourceLoc at) {
    modifies_.clear();
    for (const auto &m : d.spec.modifies) {
      auto g = globals_.find(m);
      if (g == globals_.end())
        error(at, "modifies clause names undeclared variable '" + m + "'");
      else if (!g->second.assignable)
        error(at, "modifies clause names constant '" + m + "'");
      modifies_.insert(m);
    }
    {
      ScopeGuard g(*this);
      for (const auto &p : d.ins)
        bind(p.name, p.type, false, at, false);
      for (const auto &c : d.spec.requires_)
        expect_bool(expr(*c.expr, Context::Single), c.expr->loc, "precondition");
      for (const auto &p : d.outs)
        bind(p.name, p.type, true, at, false);
      for (const auto &c : d.spec.ensures)
        expect_bool(expr(*c.expr, Context::TwoState), c.expr->loc, "postcondition");
    }
    if (d.body) {
      ScopeGuard g(*this);
      bind_params(d.ins, d.outs, at);
      body(*d.body);
    }
  }

  void check(const ImplementationDecl &d, SourceLoc at) {
    auto it = procedures_.find(d.name);
    if (it == procedures_.end()) {
      error(at, "implementation of undeclared procedure '" + d.name + "'");
      return;
    }
    const ProcedureDecl &proc = *it->second;
    auto same = [&](const std::vector<TypedName> &a,
                    const std::vector<TypedName> &b) {
      if (a.size() != b.size())
        return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!(resolve(a[i].type, at) == resolve(b[i].type, at)))
          return false;
      return true;
    };
    if (!same(d.ins, proc.ins) || !same(d.outs, proc.outs)) {
      error(at, "implementation signature of '" + d.name +
                    "' does not match its procedure");
      return;
    }
    modifies_ = {proc.spec.modifies.begin(), proc.spec.modifies.end()};
    ScopeGuard g(*this);
    bind_params(d.ins, d.outs, at);
    body(d.body);
  }

  // --- statements ----------------------------------------------------------

  void body(const Block &b) {
    std::size_t locals = local_decl_count(b);
    for (std::size_t i = 0; i < locals; ++i) {
      const auto &v = *b[i].as<LocalVarDecl>();
      for (const auto &n : v.names)
        bind(n, v.type, true, b[i].loc, false);
    }
    for (std::size_t i = locals; i < b.size(); ++i)
      statement(b[i]);
  }

  void block(const Block &b) {
    for (const auto &s : b)
      statement(s);
  }

  void check_assignable(const std::string &name, SourceLoc at) {
    const VarInfo *v = lookup(name);
    if (!v) {
      error(at, "undeclared identifier '" + name + "'");
      return;
    }
    if (!v->assignable) {
      error(at, "cannot assign to immutable '" + name + "'");
      return;
    }
    if (v->global && !modifies_.count(name))
      error(at, "assignment to global '" + name +
                    "' not listed in the modifies clause");
  }

  void statement(const Statement &s) {
    std::visit([&](const auto &n) { stmt(n, s.loc); }, s.node);
  }

  void stmt(const Assign &a, SourceLoc at) {
    if (a.lhs.size() != a.rhs.size()) {
      error(at, "assignment has " + std::to_string(a.lhs.size()) +
                    " targets but " + std::to_string(a.rhs.size()) + " values");
      return;
    }
    std::set<std::string> targets;
    for (std::size_t i = 0; i < a.lhs.size(); ++i) {
      const auto &t = a.lhs[i];
      if (!targets.insert(t.name).second)
        error(at, "variable '" + t.name + "' assigned more than once");
      check_assignable(t.name, at);
      const VarInfo *v = lookup(t.name);
      Type ty = v ? v->type : Type::integer();
      bool known = v != nullptr;
      for (const auto &sel : t.selectors) {
        if (ty.kind != TypeKind::Map || ty.map_arity() != sel.size()) {
          if (known)
            error(at, "selector applied to non-map or with wrong arity");
          known = false;
          break;
        }
        for (std::size_t k = 0; k < sel.size(); ++k)
          expect_type(expr(*sel[k], Context::TwoState), ty.args[k], sel[k]->loc,
                      "map index");
        Type range = ty.map_range();
        ty = range;
      }
      Type rhs = expr(*a.rhs[i], Context::TwoState);
      if (known)
        expect_type(rhs, ty, a.rhs[i]->loc, "assignment");
    }
  }

  void stmt(const AssertStmt &s, SourceLoc) {
    expect_bool(expr(*s.expr, Context::TwoState), s.expr->loc, "assertion");
  }
  void stmt(const AssumeStmt &s, SourceLoc) {
    expect_bool(expr(*s.expr, Context::TwoState), s.expr->loc, "assumption");
  }
  void stmt(const Havoc &h, SourceLoc at) {
    for (const auto &n : h.names)
      check_assignable(n, at);
  }

  void stmt(const Call &c, SourceLoc at) {
    auto it = procedures_.find(c.proc);
    if (it == procedures_.end()) {
      error(at, "call to undeclared procedure '" + c.proc + "'");
      for (const auto &a : c.args)
        expr(*a, Context::TwoState);
      return;
    }
    const ProcedureDecl &callee = *it->second;
    if (c.args.size() != callee.ins.size())
      error(at, "call to '" + c.proc + "' passes " + std::to_string(c.args.size()) +
                    " arguments, expected " + std::to_string(callee.ins.size()));
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      Type t = expr(*c.args[i], Context::TwoState);
      if (i < callee.ins.size())
        expect_type(t, resolve(callee.ins[i].type, at), c.args[i]->loc,
                    "call argument");
    }
    if (c.outs.size() != callee.outs.size())
      error(at, "call to '" + c.proc + "' binds " + std::to_string(c.outs.size()) +
                    " results, expected " + std::to_string(callee.outs.size()));
    for (std::size_t i = 0; i < c.outs.size(); ++i) {
      check_assignable(c.outs[i], at);
      const VarInfo *v = lookup(c.outs[i]);
      if (v && i < callee.outs.size())
        expect_type(resolve(callee.outs[i].type, at), v->type, at, "call result");
    }
    for (const auto &m : callee.spec.modifies)
      if (!modifies_.count(m))
        error(at, "call to '" + c.proc + "' modifies '" + m +
                      "', which the caller does not list in its modifies clause");
  }

  void stmt(const If &s, SourceLoc) {
    expect_bool(expr(*s.cond, Context::TwoState), s.cond->loc, "if condition");
    block(s.then_block);
    if (s.else_block)
      block(*s.else_block);
  }

  void stmt(const While &s, SourceLoc) {
    expect_bool(expr(*s.cond, Context::TwoState), s.cond->loc, "loop condition");
    for (const auto &inv : s.invariants)
      expect_bool(expr(*inv.expr, Context::TwoState), inv.expr->loc,
                  "loop invariant");
    block(s.body);
  }

  void stmt(const Return &, SourceLoc) {}

  void stmt(const LocalVarDecl &, SourceLoc at) {
    error(at, "local variable declarations must precede all statements");
  }

  // --- expressions ---------------------------------------------------------

  void expect_type(const Type &got, const Type &want, SourceLoc at,
                   std::string_view what) {
    if (!(got == want))
      error(at, "type mismatch in " + std::string(what) + ": expected " +
                    print_type(want) + " but got " + print_type(got));
  }
  void expect_bool(const Type &got, SourceLoc at, std::string_view what) {
    expect_type(got, Type::boolean(), at, what);
  }
  void expect_int(const Type &got, SourceLoc at, std::string_view what) {
    expect_type(got, Type::integer(), at, what);
  }

  Type expr(const Expr &e, Context ctx) {
    return std::visit([&](const auto &n) { return node(n, e.loc, ctx); }, e.node);
  }

  Type node(const IntLit &, SourceLoc, Context) { return Type::integer(); }
  Type node(const BoolLit &, SourceLoc, Context) { return Type::boolean(); }

  Type node(const Ident &n, SourceLoc at, Context) {
    const VarInfo *v = lookup(n.name);
    if (!v) {
      error(at, "undeclared identifier '" + n.name + "'");
      return Type::integer();
    }
    return resolve(v->type, at);
  }

  Type select_type(const ExprPtr &map, const std::vector<ExprPtr> &indices,
                   SourceLoc at, Context ctx) {
    Type m = expr(*map, ctx);
    if (m.kind != TypeKind::Map) {
      error(at, "map access on value of type " + print_type(m));
      for (const auto &i : indices)
        expr(*i, ctx);
      return Type::integer();
    }
    if (m.map_arity() != indices.size()) {
      error(at, "map of arity " + std::to_string(m.map_arity()) + " indexed with " +
                    std::to_string(indices.size()) + " arguments");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
      Type t = expr(*indices[i], ctx);
      if (i < m.map_arity())
        expect_type(t, m.args[i], indices[i]->loc, "map index");
    }
    return m;
  }

  Type node(const MapSelect &n, SourceLoc at, Context ctx) {
    Type m = select_type(n.map, n.indices, at, ctx);
    return m.kind == TypeKind::Map ? m.map_range() : m;
  }

  Type node(const MapUpdate &n, SourceLoc at, Context ctx) {
    Type m = select_type(n.map, n.indices, at, ctx);
    Type v = expr(*n.value, ctx);
    if (m.kind == TypeKind::Map)
      expect_type(v, m.map_range(), n.value->loc, "map update");
    return m;
  }

  Type node(const Unary &n, SourceLoc at, Context ctx) {
    Type t = expr(*n.operand, ctx);
    if (n.op == UnaryOp::Not) {
      expect_bool(t, at, "negation");
      return Type::boolean();
    }
    expect_int(t, at, "arithmetic negation");
    return Type::integer();
  }

  Type node(const Binary &n, SourceLoc at, Context ctx) {
    Type l = expr(*n.lhs, ctx);
    Type r = expr(*n.rhs, ctx);
    switch (n.op) {
    case BinaryOp::Iff:
    case BinaryOp::Implies:
    case BinaryOp::And:
    case BinaryOp::Or:
      expect_bool(l, n.lhs->loc, "boolean operator");
      expect_bool(r, n.rhs->loc, "boolean operator");
      return Type::boolean();
    case BinaryOp::Eq:
    case BinaryOp::Neq:
      expect_type(r, l, at, "equality");
      return Type::boolean();
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      expect_int(l, n.lhs->loc, "comparison");
      expect_int(r, n.rhs->loc, "comparison");
      return Type::boolean();
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod:
      expect_int(l, n.lhs->loc, "arithmetic");
      expect_int(r, n.rhs->loc, "arithmetic");
      return Type::integer();
    }
    return Type::boolean();
  }

  static bool mentions(const Expr &e, const std::set<std::string> &names) {
    return std::visit(
        [&](const auto &n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Ident>) {
            return names.count(n.name) > 0;
          } else if constexpr (std::is_same_v<T, MapSelect>) {
            if (mentions(*n.map, names))
              return true;
            return std::any_of(n.indices.begin(), n.indices.end(),
                               [&](const ExprPtr &i) { return mentions(*i, names); });
          } else if constexpr (std::is_same_v<T, MapUpdate>) {
            if (mentions(*n.map, names) || mentions(*n.value, names))
              return true;
            return std::any_of(n.indices.begin(), n.indices.end(),
                               [&](const ExprPtr &i) { return mentions(*i, names); });
          } else if constexpr (std::is_same_v<T, Unary>) {
            return mentions(*n.operand, names);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return mentions(*n.lhs, names) || mentions(*n.rhs, names);
          } else if constexpr (std::is_same_v<T, FunctionApp>) {
            return std::any_of(n.args.begin(), n.args.end(),
                               [&](const ExprPtr &a) { return mentions(*a, names); });
          } else if constexpr (std::is_same_v<T, Old>) {
            return mentions(*n.operand, names);
          } else if constexpr (std::is_same_v<T, Quantifier>) {
            std::set<std::string> inner = names;
            for (const auto &b : n.bound)
              inner.erase(b.name);
            return mentions(*n.body, inner);
          } else {
            return false;
          }
        },
        e.node);
  }

  Type node(const Quantifier &n, SourceLoc at, Context ctx) {
    ScopeGuard g(*this);
    std::set<std::string> bound;
    for (const auto &b : n.bound) {
      if (!bound.insert(b.name).second)
        error(at, "duplicate bound variable '" + b.name + "'");
      else
        bind(b.name, b.type, false, at, true);
    }
    for (const auto &t : n.triggers) {
      for (const auto &term : t.terms) {
        expr(*term, ctx);
        if (!mentions(*term, bound))
          error(term->loc, "trigger term does not mention any bound variable");
      }
    }
    expect_bool(expr(*n.body, ctx), n.body->loc, "quantifier body");
    return Type::boolean();
  }

  Type node(const FunctionApp &n, SourceLoc at, Context ctx) {
    auto it = functions_.find(n.name);
    if (it == functions_.end()) {
      error(at, "undeclared function '" + n.name + "'");
      for (const auto &a : n.args)
        expr(*a, ctx);
      return Type::integer();
    }
    const FunctionDecl &f = *it->second;
    if (f.params.size() != n.args.size())
      error(at, "function '" + n.name + "' applied to " +
                    std::to_string(n.args.size()) + " arguments, expected " +
                    std::to_string(f.params.size()));
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      Type t = expr(*n.args[i], ctx);
      if (i < f.params.size())
        expect_type(t, resolve(f.params[i].type, at), n.args[i]->loc,
                    "function argument");
    }
    return resolve(f.result.type, at);
  }

  Type node(const Old &n, SourceLoc at, Context ctx) {
    if (ctx != Context::TwoState)
      error(at, "old() is only allowed in postconditions and procedure bodies");
    return expr(*n.operand, ctx);
  }

  std::string origin_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, const TypeDecl *> types_;
  std::map<std::string, VarInfo> globals_;
  std::map<std::string, const FunctionDecl *> functions_;
  std::map<std::string, const ProcedureDecl *> procedures_;
  std::vector<Scope> scopes_;
  std::set<std::string> modifies_;
};

} // namespace

Result<ValidatedProgram> typecheck(const Program &p, const std::string &origin) {
  Checker checker(origin);
  auto diags = checker.run(p);
  if (!diags.empty())
    return Result<ValidatedProgram>::failure(std::move(diags));
  return Result<ValidatedProgram>::success(ValidatedProgram(p));
}

Result<ValidatedProgram> typecheck_unit(const Program &primary,
                                        const std::optional<Program> &companion,
                                        const std::string &origin) {
  if (!companion)
    return typecheck(primary, origin);
  Program joint = primary;
  joint.declarations.insert(joint.declarations.end(),
                            companion->declarations.begin(),
                            companion->declarations.end());
  return typecheck(joint, origin);
}

} // namespace mugie
