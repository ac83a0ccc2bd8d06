// SPDX-License-Identifier: Apache-2.0

#include "mugie/parser.hpp"

#include <stdexcept>
#include <utility>

#include "lexer.hpp"

namespace mugie {

using namespace ivl;
using detail::Tok;
using detail::Token;

std::string Diagnostic::str() const {
  std::string out = file + ":" + std::to_string(line) + ":" +
                    std::to_string(column) + ": ";
  out += severity == Severity::Error ? "error: " : "warning: ";
  out += message;
  return out;
}

namespace {

struct SyntaxError : std::runtime_error {
  SyntaxError(const Token &at, const std::string &msg)
      : std::runtime_error(msg), line(at.line), column(at.column) {}
  int line;
  int column;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    while (!at_end())
      p.declarations.push_back(declaration());
    return p;
  }

private:
  // --- token helpers -------------------------------------------------------

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  SourceLoc loc() const { return {peek().line, peek().column}; }

  bool is(std::string_view text, std::size_t k = 0) const {
    const Token &t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Keyword) && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text))
      return false;
    ++pos_;
    return true;
  }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string &msg) const {
    throw SyntaxError(peek(), msg);
  }
  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Token &t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    fail("expected " + std::string(wanted) + " but found " + got);
  }
  void expect(std::string_view text) {
    if (!accept(text))
      unexpected("'" + std::string(text) + "'");
  }
  std::string ident(std::string_view what = "identifier") {
    if (peek().kind != Tok::Ident) {
      reject_unsupported_word();
      unexpected(what);
    }
    return next().text;
  }

  // Words that belong to full Boogie but not to the supported subset.
  void reject_unsupported_word() const {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      return;
    static const std::pair<std::string_view, std::string_view> kWords[] = {
        {"goto", "goto statements are not supported"},
        {"break", "break statements are not supported"},
        {"where", "where clauses are not supported"},
        {"real", "the real type is not supported"},
        {"lambda", "lambda expressions are not supported"},
        {"finite", "finite type declarations are not supported"},
        {"complete", "complete const declarations are not supported"},
        {"extends", "const order constraints are not supported"},
        {"then", "if-then-else expressions are not supported"},
        {"yield", "yield statements are not supported"},
        {"par", "parallel calls are not supported"},
        {"async", "async calls are not supported"},
    };
    for (auto [word, msg] : kWords)
      if (t.text == word)
        fail(std::string(msg));
    if (t.text.size() > 2 && t.text.rfind("bv", 0) == 0 &&
        t.text.find_first_not_of("0123456789", 2) == std::string::npos)
      fail("bitvector types are not supported");
  }

  // --- attributes ----------------------------------------------------------

  Attributes attributes() {
    Attributes out;
    while (is("{:"))
      out.push_back(attribute());
    return out;
  }

  Attribute attribute() {
    expect("{:");
    Attribute a;
    if (peek().kind != Tok::Ident && peek().kind != Tok::Keyword)
      unexpected("attribute name");
    a.name = next().text;
    int depth = 0;
    while (true) {
      if (at_end())
        unexpected("'}'");
      if (is("}") && depth == 0)
        break;
      if (is("{") || is("{:"))
        ++depth;
      if (is("}"))
        --depth;
      a.tokens.push_back(next().text);
    }
    expect("}");
    return a;
  }

  // --- types ---------------------------------------------------------------

  Type type() {
    if (accept("int"))
      return Type::integer();
    if (accept("bool"))
      return Type::boolean();
    if (is("<"))
      fail("polymorphic map types are not supported");
    if (accept("[")) {
      std::vector<Type> domain;
      if (!is("]")) {
        domain.push_back(type());
        while (accept(","))
          domain.push_back(type());
      }
      expect("]");
      Type range = type();
      return Type::map(std::move(domain), std::move(range));
    }
    if (accept("(")) {
      Type t = type();
      expect(")");
      return t;
    }
    if (peek().kind == Tok::Ident) {
      reject_unsupported_word();
      std::string name = next().text;
      if (peek().kind == Tok::Ident || is("int") || is("bool") || is("["))
        fail("type constructor arguments are not supported");
      return Type::named(std::move(name));
    }
    unexpected("type");
  }

  // `x, y: T` groups separated by commas, flattened to one entry per name.
  std::vector<TypedName> typed_names(std::string_view close) {
    std::vector<TypedName> out;
    if (is(close))
      return out;
    do {
      std::vector<std::string> names{ident()};
      while (accept(","))
        names.push_back(ident());
      expect(":");
      Type t = type();
      if (is("where") || (peek().kind == Tok::Ident && peek().text == "where"))
        fail("where clauses are not supported");
      for (auto &n : names)
        out.push_back({std::move(n), t});
    } while (accept(","));
    return out;
  }

  // --- declarations --------------------------------------------------------

  Declaration declaration() {
    SourceLoc at = loc();
    if (accept("type"))
      return {type_decl(), at};
    if (accept("const"))
      return {const_decl(), at};
    if (accept("var"))
      return {global_var_decl(), at};
    if (accept("function"))
      return {function_decl(), at};
    if (accept("axiom")) {
      AxiomDecl a;
      a.attrs = attributes();
      a.expr = expression();
      expect(";");
      return {std::move(a), at};
    }
    if (accept("procedure"))
      return {procedure_decl(), at};
    if (accept("implementation"))
      return {implementation_decl(), at};
    reject_unsupported_word();
    unexpected("declaration");
  }

  TypeDecl type_decl() {
    TypeDecl d;
    d.attrs = attributes();
    reject_unsupported_word();
    d.name = ident("type name");
    if (peek().kind == Tok::Ident)
      fail("type constructor parameters are not supported");
    if (is(","))
      fail("multiple names in one type declaration are not supported");
    if (is("=")) {
      next();
      d.synonym = type();
    }
    expect(";");
    return d;
  }

  ConstDecl const_decl() {
    ConstDecl d;
    d.attrs = attributes();
    d.unique = accept("unique");
    d.names.push_back(ident());
    while (accept(","))
      d.names.push_back(ident());
    expect(":");
    d.type = type();
    if (is("<:"))
      fail("const order constraints are not supported");
    reject_unsupported_word();
    expect(";");
    return d;
  }

  GlobalVarDecl global_var_decl() {
    GlobalVarDecl d;
    d.attrs = attributes();
    d.names.push_back(ident());
    while (accept(","))
      d.names.push_back(ident());
    expect(":");
    d.type = type();
    reject_unsupported_word();
    if (is(","))
      fail("variable declarations with several types are not supported");
    expect(";");
    return d;
  }

  FormalArg formal_arg() {
    if (peek().kind == Tok::Ident && is(":", 1)) {
      FormalArg a;
      a.name = next().text;
      next();
      a.type = type();
      return a;
    }
    return {std::nullopt, type()};
  }

  FunctionDecl function_decl() {
    FunctionDecl f;
    f.attrs = attributes();
    f.name = ident("function name");
    if (is("<"))
      fail("polymorphic functions are not supported");
    expect("(");
    if (!is(")")) {
      f.params.push_back(formal_arg());
      while (accept(","))
        f.params.push_back(formal_arg());
    }
    expect(")");
    if (accept("returns")) {
      expect("(");
      f.result = formal_arg();
      expect(")");
    } else if (accept(":")) {
      f.result = {std::nullopt, type()};
    } else {
      unexpected("'returns' or ':'");
    }
    if (accept("{")) {
      f.body = expression();
      expect("}");
    } else {
      expect(";");
    }
    return f;
  }

  void signature(std::string &name, std::vector<TypedName> &ins,
                 std::vector<TypedName> &outs, bool &explicit_returns) {
    name = ident("procedure name");
    if (is("<"))
      fail("polymorphic procedures are not supported");
    expect("(");
    ins = typed_names(")");
    expect(")");
    explicit_returns = accept("returns");
    if (explicit_returns) {
      expect("(");
      outs = typed_names(")");
      expect(")");
    }
  }

  ProcedureDecl procedure_decl() {
    ProcedureDecl d;
    d.attrs = attributes();
    signature(d.name, d.ins, d.outs, d.explicit_returns);
    bool declaration_only = accept(";");
    while (true) {
      SourceLoc at = loc();
      bool is_free = accept("free");
      if (accept("requires")) {
        d.spec.requires_.push_back(clause(ClauseKind::Requires, is_free, at));
        expect(";");
      } else if (accept("ensures")) {
        d.spec.ensures.push_back(clause(ClauseKind::Ensures, is_free, at));
        expect(";");
      } else if (!is_free && accept("modifies")) {
        if (!is(";")) {
          d.spec.modifies.push_back(ident());
          while (accept(","))
            d.spec.modifies.push_back(ident());
        }
        expect(";");
      } else if (is_free) {
        unexpected("'requires' or 'ensures'");
      } else {
        break;
      }
    }
    if (!declaration_only) {
      if (!is("{"))
        unexpected("'{' or ';'");
      d.body = body();
    }
    return d;
  }

  ImplementationDecl implementation_decl() {
    ImplementationDecl d;
    d.attrs = attributes();
    signature(d.name, d.ins, d.outs, d.explicit_returns);
    d.body = body();
    return d;
  }

  SpecClause clause(ClauseKind kind, bool is_free, SourceLoc at) {
    SpecClause c;
    c.kind = kind;
    c.free = is_free;
    c.attrs = attributes();
    c.expr = expression();
    c.loc = at;
    return c;
  }

  // --- statements ----------------------------------------------------------

  Block body() {
    expect("{");
    Block out;
    while (is("var")) {
      SourceLoc at = loc();
      next();
      LocalVarDecl v;
      v.attrs = attributes();
      v.names.push_back(ident());
      while (accept(","))
        v.names.push_back(ident());
      expect(":");
      v.type = type();
      reject_unsupported_word();
      if (is(","))
        fail("variable declarations with several types are not supported");
      expect(";");
      out.push_back({std::move(v), at});
    }
    while (!is("}")) {
      if (is("var"))
        fail("local variable declarations must precede all statements");
      out.push_back(statement());
    }
    expect("}");
    return out;
  }

  Block block() {
    expect("{");
    Block out;
    while (!is("}")) {
      if (is("var"))
        fail("local variable declarations are only allowed at the start of a body");
      out.push_back(statement());
    }
    expect("}");
    return out;
  }

  Statement statement() {
    SourceLoc at = loc();
    if (accept("assert")) {
      AssertStmt s;
      s.attrs = attributes();
      s.expr = expression();
      expect(";");
      return {std::move(s), at};
    }
    if (accept("assume")) {
      AssumeStmt s;
      s.attrs = attributes();
      s.expr = expression();
      expect(";");
      return {std::move(s), at};
    }
    if (accept("havoc")) {
      Havoc h;
      h.names.push_back(ident());
      while (accept(","))
        h.names.push_back(ident());
      expect(";");
      return {std::move(h), at};
    }
    if (accept("call"))
      return {call(), at};
    if (accept("if"))
      return {if_stmt(), at};
    if (accept("while")) {
      While w;
      expect("(");
      if (is("*"))
        fail("nondeterministic loop conditions are not supported");
      w.cond = expression();
      expect(")");
      while (is("free") || is("invariant")) {
        SourceLoc cat = loc();
        bool is_free = accept("free");
        expect("invariant");
        w.invariants.push_back(clause(ClauseKind::Invariant, is_free, cat));
        expect(";");
      }
      w.body = block();
      return {std::move(w), at};
    }
    if (accept("return")) {
      expect(";");
      return {Return{}, at};
    }
    if (peek().kind == Tok::Ident) {
      reject_unsupported_word();
      if (is(":", 1))
        fail("labels are not supported");
      return {assignment(), at};
    }
    unexpected("statement");
  }

  Call call() {
    Call c;
    c.attrs = attributes();
    if (is("forall") || (peek().kind == Tok::Ident && peek().text == "forall"))
      fail("call forall is not supported");
    std::vector<std::string> names{ident()};
    if (is(",") || is(":=")) {
      while (accept(","))
        names.push_back(ident());
      expect(":=");
      c.outs = std::move(names);
      c.proc = ident("procedure name");
    } else {
      c.proc = std::move(names.front());
    }
    expect("(");
    if (!is(")")) {
      c.args.push_back(expression());
      while (accept(","))
        c.args.push_back(expression());
    }
    expect(")");
    expect(";");
    return c;
  }

  If if_stmt() {
    If s;
    expect("(");
    if (is("*"))
      fail("nondeterministic if conditions are not supported");
    s.cond = expression();
    expect(")");
    s.then_block = block();
    if (accept("else")) {
      if (is("if")) {
        SourceLoc at = loc();
        next();
        Block nested;
        nested.push_back({if_stmt(), at});
        s.else_block = std::move(nested);
      } else {
        s.else_block = block();
      }
    }
    return s;
  }

  Assign assignment() {
    Assign a;
    do {
      AssignTarget t;
      t.name = ident();
      while (accept("[")) {
        std::vector<ExprPtr> idx;
        idx.push_back(expression());
        while (accept(","))
          idx.push_back(expression());
        expect("]");
        t.selectors.push_back(std::move(idx));
      }
      a.lhs.push_back(std::move(t));
    } while (accept(","));
    expect(":=");
    a.rhs.push_back(expression());
    while (accept(","))
      a.rhs.push_back(expression());
    expect(";");
    return a;
  }

  // --- expressions ---------------------------------------------------------

  ExprPtr expression() { return equiv(); }

  ExprPtr equiv() {
    ExprPtr e = implies();
    while (is("<==>")) {
      next();
      e = make_binary(BinaryOp::Iff, e, implies());
    }
    return e;
  }

  ExprPtr implies() {
    ExprPtr e = logical();
    if (is("<=="))
      fail("reverse implication '<==' is not supported");
    if (accept("==>"))
      return make_binary(BinaryOp::Implies, e, implies());
    return e;
  }

  ExprPtr logical() {
    ExprPtr e = relational();
    if (is("&&")) {
      while (accept("&&"))
        e = make_binary(BinaryOp::And, e, relational());
      if (is("||"))
        fail("mixing '&&' and '||' requires parentheses");
    } else if (is("||")) {
      while (accept("||"))
        e = make_binary(BinaryOp::Or, e, relational());
      if (is("&&"))
        fail("mixing '&&' and '||' requires parentheses");
    }
    return e;
  }

  ExprPtr relational() {
    ExprPtr e = additive();
    static const std::pair<std::string_view, BinaryOp> kRel[] = {
        {"==", BinaryOp::Eq}, {"!=", BinaryOp::Neq}, {"<=", BinaryOp::Le},
        {">=", BinaryOp::Ge}, {"<", BinaryOp::Lt},   {">", BinaryOp::Gt},
    };
    if (is("<:"))
      fail("the partial order operator '<:' is not supported");
    for (auto [text, op] : kRel) {
      if (accept(text)) {
        e = make_binary(op, e, additive());
        break;
      }
    }
    return e;
  }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    while (true) {
      if (accept("+"))
        e = make_binary(BinaryOp::Add, e, multiplicative());
      else if (accept("-"))
        e = make_binary(BinaryOp::Sub, e, multiplicative());
      else
        return e;
    }
  }

  ExprPtr multiplicative() {
    ExprPtr e = unary();
    while (true) {
      if (is("/"))
        fail("real division '/' is not supported");
      if (is("%"))
        fail("'%' is not supported; use 'mod'");
      if (accept("*"))
        e = make_binary(BinaryOp::Mul, e, unary());
      else if (accept("div"))
        e = make_binary(BinaryOp::Div, e, unary());
      else if (accept("mod"))
        e = make_binary(BinaryOp::Mod, e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    SourceLoc at = loc();
    if (accept("!"))
      return make_expr(Unary{UnaryOp::Not, unary()}, at);
    if (accept("-"))
      return make_expr(Unary{UnaryOp::Neg, unary()}, at);
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (is("[")) {
      SourceLoc at = loc();
      next();
      std::vector<ExprPtr> idx;
      idx.push_back(expression());
      while (accept(","))
        idx.push_back(expression());
      if (accept(":=")) {
        ExprPtr v = expression();
        expect("]");
        e = make_expr(MapUpdate{e, std::move(idx), v}, at);
      } else {
        expect("]");
        e = make_expr(MapSelect{e, std::move(idx)}, at);
      }
    }
    return e;
  }

  ExprPtr atom() {
    SourceLoc at = loc();
    const Token &t = peek();
    if (t.kind == Tok::Int) {
      std::string digits = next().text;
      return make_expr(IntLit{std::move(digits)}, at);
    }
    if (accept("true"))
      return make_bool(true, at);
    if (accept("false"))
      return make_bool(false, at);
    if (accept("old")) {
      expect("(");
      ExprPtr e = expression();
      expect(")");
      return make_expr(Old{e}, at);
    }
    if (accept("(")) {
      if (is("forall") || is("exists"))
        return quantifier(at);
      if (peek().kind == Tok::Ident && peek().text == "lambda")
        fail("lambda expressions are not supported");
      ExprPtr e = expression();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      reject_unsupported_word();
      std::string name = next().text;
      if (accept("(")) {
        FunctionApp app{std::move(name), {}};
        if (!is(")")) {
          app.args.push_back(expression());
          while (accept(","))
            app.args.push_back(expression());
        }
        expect(")");
        return make_expr(std::move(app), at);
      }
      return make_expr(Ident{std::move(name)}, at);
    }
    if (is("if"))
      fail("if-then-else expressions are not supported");
    unexpected("expression");
  }

  ExprPtr quantifier(SourceLoc at) {
    Quantifier q;
    q.kind = accept("forall") ? QuantKind::Forall : (next(), QuantKind::Exists);
    if (is("<"))
      fail("type parameters on quantifiers are not supported");
    q.bound = typed_names("::");
    if (q.bound.empty())
      unexpected("bound variable");
    expect("::");
    while (is("{:") || is("{")) {
      if (is("{:")) {
        q.attrs.push_back(attribute());
        continue;
      }
      next();
      Trigger trig;
      trig.terms.push_back(expression());
      while (accept(","))
        trig.terms.push_back(expression());
      expect("}");
      q.triggers.push_back(std::move(trig));
    }
    q.body = expression();
    expect(")");
    return make_expr(std::move(q), at);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

Result<Program> parse(std::string_view source, const std::string &origin) {
  std::vector<Token> toks;
  detail::LexError lex_error;
  if (!detail::tokenize(source, toks, lex_error)) {
    return Result<Program>::failure({{Severity::Error, origin, lex_error.line,
                                      lex_error.column, lex_error.message}});
  }
  try {
    Parser parser(std::move(toks));
    return Result<Program>::success(parser.program());
  } catch (const SyntaxError &e) {
    return Result<Program>::failure(
        {{Severity::Error, origin, e.line, e.column, e.what()}});
  }
}

Result<ValidatedProgram> parse_and_check(std::string_view source,
                                         const std::string &origin) {
  auto parsed = parse(source, origin);
  if (!parsed.ok())
    return Result<ValidatedProgram>::failure(std::move(parsed.diagnostics));
  return typecheck(*parsed, origin);
}

} // namespace mugie
