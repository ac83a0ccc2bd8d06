// SPDX-License-Identifier: Apache-2.0

#include "mugie/printer.hpp"

#include <sstream>

#include "mugie/lineage.hpp"

namespace mugie {

using namespace ivl;

namespace {

std::string_view op_text(BinaryOp op) {
  switch (op) {
  case BinaryOp::Iff: return "<==>";
  case BinaryOp::Implies: return "==>";
  case BinaryOp::And: return "&&";
  case BinaryOp::Or: return "||";
  case BinaryOp::Eq: return "==";
  case BinaryOp::Neq: return "!=";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "div";
  case BinaryOp::Mod: return "mod";
  }
  return "?";
}

bool needs_parens(const Expr &e) { return e.is<Binary>() || e.is<Unary>(); }

std::string attr_text(const Attribute &a) {
  std::string out = "{:" + a.name;
  bool glue = false;
  for (const auto &t : a.tokens) {
    bool closing = t == "," || t == ")" || t == "]";
    if (!glue && !closing)
      out += ' ';
    out += t;
    glue = t == "(" || t == "[";
  }
  out += '}';
  return out;
}

class Printer {
public:
  std::string str() const { return out_.str(); }

  void program(const Program &p) {
    for (const auto &d : p.declarations)
      declaration(d);
  }

  void expr(const Expr &e) {
    std::visit([&](const auto &n) { expr_node(n); }, e.node);
  }

  void type(const Type &t) {
    switch (t.kind) {
    case TypeKind::Int: out_ << "int"; break;
    case TypeKind::Bool: out_ << "bool"; break;
    case TypeKind::Named: out_ << t.name; break;
    case TypeKind::Map:
      out_ << '[';
      for (std::size_t i = 0; i < t.map_arity(); ++i) {
        if (i)
          out_ << ", ";
        type(t.args[i]);
      }
      out_ << ']';
      type(t.map_range());
      break;
    }
  }

private:
  void attrs(const Attributes &as) {
    for (const auto &a : as)
      out_ << attr_text(a) << ' ';
  }

  void names(const std::vector<std::string> &ns) {
    for (std::size_t i = 0; i < ns.size(); ++i)
      out_ << (i ? ", " : "") << ns[i];
  }

  void typed_names(const std::vector<TypedName> &ns) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      out_ << (i ? ", " : "") << ns[i].name << ": ";
      type(ns[i].type);
    }
  }

  void formal(const FormalArg &a) {
    if (a.name)
      out_ << *a.name << ": ";
    type(a.type);
  }

  void exprs(const std::vector<ExprPtr> &es) {
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (i)
        out_ << ", ";
      expr(*es[i]);
    }
  }

  void operand(const Expr &e) {
    if (needs_parens(e)) {
      out_ << '(';
      expr(e);
      out_ << ')';
    } else {
      expr(e);
    }
  }

  // --- expressions ---------------------------------------------------------

  void expr_node(const IntLit &n) { out_ << n.digits; }
  void expr_node(const BoolLit &n) { out_ << (n.value ? "true" : "false"); }
  void expr_node(const Ident &n) { out_ << n.name; }
  void expr_node(const MapSelect &n) {
    operand(*n.map);
    out_ << '[';
    exprs(n.indices);
    out_ << ']';
  }
  void expr_node(const MapUpdate &n) {
    operand(*n.map);
    out_ << '[';
    exprs(n.indices);
    out_ << " := ";
    expr(*n.value);
    out_ << ']';
  }
  void expr_node(const Unary &n) {
    out_ << (n.op == UnaryOp::Not ? "!" : "-");
    operand(*n.operand);
  }
  void expr_node(const Binary &n) {
    operand(*n.lhs);
    out_ << ' ' << op_text(n.op) << ' ';
    operand(*n.rhs);
  }
  void expr_node(const Quantifier &n) {
    out_ << '(' << (n.kind == QuantKind::Forall ? "forall " : "exists ");
    typed_names(n.bound);
    out_ << " :: ";
    attrs(n.attrs);
    for (const auto &t : n.triggers) {
      out_ << '{';
      exprs(t.terms);
      out_ << "} ";
    }
    expr(*n.body);
    out_ << ')';
  }
  void expr_node(const FunctionApp &n) {
    out_ << n.name << '(';
    exprs(n.args);
    out_ << ')';
  }
  void expr_node(const Old &n) {
    out_ << "old(";
    expr(*n.operand);
    out_ << ')';
  }

  // --- declarations --------------------------------------------------------

  void declaration(const Declaration &d) {
    std::visit([&](const auto &n) { decl_node(n); }, d.node);
  }

  void decl_node(const TypeDecl &d) {
    out_ << "type ";
    attrs(d.attrs);
    out_ << d.name;
    if (d.synonym) {
      out_ << " = ";
      type(*d.synonym);
    }
    out_ << ";\n";
  }
  void decl_node(const ConstDecl &d) {
    out_ << "const ";
    attrs(d.attrs);
    if (d.unique)
      out_ << "unique ";
    names(d.names);
    out_ << ": ";
    type(d.type);
    out_ << ";\n";
  }
  void decl_node(const GlobalVarDecl &d) {
    out_ << "var ";
    attrs(d.attrs);
    names(d.names);
    out_ << ": ";
    type(d.type);
    out_ << ";\n";
  }
  void decl_node(const FunctionDecl &d) {
    out_ << "function ";
    attrs(d.attrs);
    out_ << d.name << '(';
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i)
        out_ << ", ";
      formal(d.params[i]);
    }
    out_ << ") returns (";
    formal(d.result);
    out_ << ')';
    if (d.body) {
      out_ << " { ";
      expr(**d.body);
      out_ << " }\n";
    } else {
      out_ << ";\n";
    }
  }
  void decl_node(const AxiomDecl &d) {
    out_ << "axiom ";
    attrs(d.attrs);
    expr(*d.expr);
    out_ << ";\n";
  }
  void signature(const std::string &name, const std::vector<TypedName> &ins,
                 const std::vector<TypedName> &outs) {
    out_ << name << '(';
    typed_names(ins);
    out_ << ") returns (";
    typed_names(outs);
    out_ << ')';
  }
  void decl_node(const ProcedureDecl &d) {
    out_ << "procedure ";
    attrs(d.attrs);
    signature(d.name, d.ins, d.outs);
    if (!d.body)
      out_ << ';';
    out_ << '\n';
    for (const auto &c : d.spec.requires_)
      clause(c, 1);
    if (!d.spec.modifies.empty()) {
      out_ << "  modifies ";
      names(d.spec.modifies);
      out_ << ";\n";
    }
    for (const auto &c : d.spec.ensures)
      clause(c, 1);
    if (d.body)
      body(*d.body);
  }
  void decl_node(const ImplementationDecl &d) {
    out_ << "implementation ";
    attrs(d.attrs);
    signature(d.name, d.ins, d.outs);
    out_ << '\n';
    body(d.body);
  }

  // --- statements ----------------------------------------------------------

  void indent(int depth) {
    for (int i = 0; i < depth; ++i)
      out_ << "  ";
  }

  void clause(const SpecClause &c, int depth) {
    indent(depth);
    if (c.free)
      out_ << "free ";
    out_ << to_string(c.kind) << ' ';
    attrs(c.attrs);
    expr(*c.expr);
    out_ << ";\n";
  }

  void body(const Block &b) {
    out_ << "{\n";
    statements(b, 1);
    out_ << "}\n";
  }

  void statements(const Block &b, int depth) {
    for (const auto &s : b)
      statement(s, depth);
  }

  void statement(const Statement &s, int depth) {
    indent(depth);
    std::visit([&](const auto &n) { stmt_node(n, depth); }, s.node);
  }

  void stmt_node(const Assign &s, int) {
    for (std::size_t i = 0; i < s.lhs.size(); ++i) {
      if (i)
        out_ << ", ";
      out_ << s.lhs[i].name;
      for (const auto &sel : s.lhs[i].selectors) {
        out_ << '[';
        exprs(sel);
        out_ << ']';
      }
    }
    out_ << " := ";
    exprs(s.rhs);
    out_ << ";\n";
  }
  void stmt_node(const AssertStmt &s, int) {
    out_ << "assert ";
    attrs(s.attrs);
    expr(*s.expr);
    out_ << ";\n";
  }
  void stmt_node(const AssumeStmt &s, int) {
    out_ << "assume ";
    attrs(s.attrs);
    expr(*s.expr);
    out_ << ";\n";
  }
  void stmt_node(const Havoc &s, int) {
    out_ << "havoc ";
    names(s.names);
    out_ << ";\n";
  }
  void stmt_node(const Call &s, int) {
    out_ << "call ";
    attrs(s.attrs);
    if (!s.outs.empty()) {
      names(s.outs);
      out_ << " := ";
    }
    out_ << s.proc << '(';
    exprs(s.args);
    out_ << ");\n";
  }
  void stmt_node(const If &s, int depth) {
    out_ << "if (";
    expr(*s.cond);
    out_ << ") {\n";
    statements(s.then_block, depth + 1);
    indent(depth);
    out_ << '}';
    if (s.else_block) {
      out_ << " else {\n";
      statements(*s.else_block, depth + 1);
      indent(depth);
      out_ << '}';
    }
    out_ << '\n';
  }
  void stmt_node(const While &s, int depth) {
    out_ << "while (";
    expr(*s.cond);
    out_ << ")\n";
    for (const auto &c : s.invariants)
      clause(c, depth + 1);
    indent(depth);
    out_ << "{\n";
    statements(s.body, depth + 1);
    indent(depth);
    out_ << "}\n";
  }
  void stmt_node(const Return &, int) { out_ << "return;\n"; }
  void stmt_node(const LocalVarDecl &s, int) {
    out_ << "var ";
    attrs(s.attrs);
    names(s.names);
    out_ << ": ";
    type(s.type);
    out_ << ";\n";
  }

  std::ostringstream out_;
};

} // namespace

std::string print(const Program &p) {
  Printer pr;
  pr.program(p);
  return pr.str();
}

std::string print_expr(const Expr &e) {
  Printer pr;
  pr.expr(e);
  return pr.str();
}

std::string print_type(const Type &t) {
  Printer pr;
  pr.type(t);
  return pr.str();
}

std::string print_with_lineage(const Program &p, const MutantRecord &rec) {
  return lineage_header(rec) + "\n" + print(p);
}

} // namespace mugie
