// SPDX-License-Identifier: Apache-2.0
//
// Abstract syntax of the supported Boogie subset.
//
// Every node is an immutable value. Subexpressions are held through Box<T>,
// a shared pointer to const that compares by value, so copying a Program is
// cheap and structural equality is the defaulted operator== everywhere.
// Source locations ride along for diagnostics but never take part in
// equality.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mugie::ivl {

struct SourceLoc {
  int line = 0;
  int column = 0;

  // Locations are diagnostic payload only.
  friend bool operator==(const SourceLoc &, const SourceLoc &) { return true; }
};

template <class T> class Box {
public:
  Box() = default;
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

  const T &operator*() const { return *ptr_; }
  const T *operator->() const { return ptr_.get(); }
  const T *get() const { return ptr_.get(); }
  explicit operator bool() const { return static_cast<bool>(ptr_); }

  friend bool operator==(const Box &a, const Box &b) {
    if (a.ptr_ == b.ptr_)
      return true;
    if (!a.ptr_ || !b.ptr_)
      return false;
    return *a.ptr_ == *b.ptr_;
  }

private:
  std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Int, Bool, Named, Map };

// For Map, `args` holds the domain types followed by the range type.
struct Type {
  TypeKind kind = TypeKind::Int;
  std::string name;
  std::vector<Type> args;

  static Type integer() { return {TypeKind::Int, {}, {}}; }
  static Type boolean() { return {TypeKind::Bool, {}, {}}; }
  static Type named(std::string n) { return {TypeKind::Named, std::move(n), {}}; }
  static Type map(std::vector<Type> domain, Type range) {
    domain.push_back(std::move(range));
    return {TypeKind::Map, {}, std::move(domain)};
  }

  std::size_t map_arity() const { return args.empty() ? 0 : args.size() - 1; }
  const Type &map_range() const { return args.back(); }

  friend bool operator==(const Type &, const Type &) = default;
};

// `{:name args}`. Arguments are kept as their token spellings and are never
// analysed or mutated.
struct Attribute {
  std::string name;
  std::vector<std::string> tokens;

  friend bool operator==(const Attribute &, const Attribute &) = default;
};

using Attributes = std::vector<Attribute>;

struct TypedName {
  std::string name;
  Type type;

  friend bool operator==(const TypedName &, const TypedName &) = default;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = Box<Expr>;

// Decimal digits without leading zeros; integers are unbounded.
struct IntLit {
  std::string digits;
  friend bool operator==(const IntLit &, const IntLit &) = default;
};

struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit &, const BoolLit &) = default;
};

struct Ident {
  std::string name;
  friend bool operator==(const Ident &, const Ident &) = default;
};

struct MapSelect {
  ExprPtr map;
  std::vector<ExprPtr> indices;
  friend bool operator==(const MapSelect &, const MapSelect &) = default;
};

struct MapUpdate {
  ExprPtr map;
  std::vector<ExprPtr> indices;
  ExprPtr value;
  friend bool operator==(const MapUpdate &, const MapUpdate &) = default;
};

enum class UnaryOp { Not, Neg };

struct Unary {
  UnaryOp op = UnaryOp::Not;
  ExprPtr operand;
  friend bool operator==(const Unary &, const Unary &) = default;
};

enum class BinaryOp {
  Iff,
  Implies,
  And,
  Or,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
};

struct Binary {
  BinaryOp op = BinaryOp::And;
  ExprPtr lhs;
  ExprPtr rhs;
  friend bool operator==(const Binary &, const Binary &) = default;
};

struct Trigger {
  std::vector<ExprPtr> terms;
  friend bool operator==(const Trigger &, const Trigger &) = default;
};

enum class QuantKind { Forall, Exists };

struct Quantifier {
  QuantKind kind = QuantKind::Forall;
  std::vector<TypedName> bound;
  Attributes attrs;
  std::vector<Trigger> triggers;
  ExprPtr body;
  friend bool operator==(const Quantifier &, const Quantifier &) = default;
};

struct FunctionApp {
  std::string name;
  std::vector<ExprPtr> args;
  friend bool operator==(const FunctionApp &, const FunctionApp &) = default;
};

struct Old {
  ExprPtr operand;
  friend bool operator==(const Old &, const Old &) = default;
};

struct Expr {
  using Node = std::variant<IntLit, BoolLit, Ident, MapSelect, MapUpdate,
                            Unary, Binary, Quantifier, FunctionApp, Old>;
  Node node;
  SourceLoc loc;

  template <class T> const T *as() const { return std::get_if<T>(&node); }
  template <class T> bool is() const { return std::holds_alternative<T>(node); }

  friend bool operator==(const Expr &, const Expr &) = default;
};

ExprPtr make_expr(Expr::Node node, SourceLoc loc = {});
ExprPtr make_bool(bool value, SourceLoc loc = {});
ExprPtr make_not(ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

// ---------------------------------------------------------------------------
// Specifications and statements

enum class ClauseKind { Requires, Ensures, Invariant, Assert };

struct SpecClause {
  ClauseKind kind = ClauseKind::Requires;
  ExprPtr expr;
  bool free = false;
  Attributes attrs;
  SourceLoc loc;

  // Free or attributed clauses are never mutation sites.
  bool mutable_site() const { return !free && attrs.empty(); }

  friend bool operator==(const SpecClause &, const SpecClause &) = default;
};

struct Specification {
  std::vector<SpecClause> requires_;
  std::vector<SpecClause> ensures;
  std::vector<std::string> modifies;
  friend bool operator==(const Specification &, const Specification &) = default;
};

struct Statement;
using Block = std::vector<Statement>;

struct AssignTarget {
  std::string name;
  std::vector<std::vector<ExprPtr>> selectors;
  friend bool operator==(const AssignTarget &, const AssignTarget &) = default;
};

struct Assign {
  std::vector<AssignTarget> lhs;
  std::vector<ExprPtr> rhs;
  friend bool operator==(const Assign &, const Assign &) = default;
};

struct AssertStmt {
  Attributes attrs;
  ExprPtr expr;
  friend bool operator==(const AssertStmt &, const AssertStmt &) = default;
};

struct AssumeStmt {
  Attributes attrs;
  ExprPtr expr;
  friend bool operator==(const AssumeStmt &, const AssumeStmt &) = default;
};

struct Havoc {
  std::vector<std::string> names;
  friend bool operator==(const Havoc &, const Havoc &) = default;
};

struct Call {
  Attributes attrs;
  std::vector<std::string> outs;
  std::string proc;
  std::vector<ExprPtr> args;
  friend bool operator==(const Call &, const Call &) = default;
};

struct If {
  ExprPtr cond;
  Block then_block;
  std::optional<Block> else_block;
  friend bool operator==(const If &, const If &) = default;
};

struct While {
  ExprPtr cond;
  std::vector<SpecClause> invariants;
  Block body;
  friend bool operator==(const While &, const While &) = default;
};

struct Return {
  friend bool operator==(const Return &, const Return &) = default;
};

// `var v1, ..., vn: T;` heading a body.
struct LocalVarDecl {
  Attributes attrs;
  std::vector<std::string> names;
  Type type;
  friend bool operator==(const LocalVarDecl &, const LocalVarDecl &) = default;
};

struct Statement {
  using Node = std::variant<Assign, AssertStmt, AssumeStmt, Havoc, Call, If,
                            While, Return, LocalVarDecl>;
  Node node;
  SourceLoc loc;

  template <class T> const T *as() const { return std::get_if<T>(&node); }
  template <class T> T *as() { return std::get_if<T>(&node); }
  template <class T> bool is() const { return std::holds_alternative<T>(node); }

  friend bool operator==(const Statement &, const Statement &) = default;
};

// Number of LocalVarDecl statements at the head of a body.
std::size_t local_decl_count(const Block &body);

// ---------------------------------------------------------------------------
// Declarations

struct TypeDecl {
  Attributes attrs;
  std::string name;
  std::optional<Type> synonym;
  friend bool operator==(const TypeDecl &, const TypeDecl &) = default;
};

struct ConstDecl {
  Attributes attrs;
  bool unique = false;
  std::vector<std::string> names;
  Type type;
  friend bool operator==(const ConstDecl &, const ConstDecl &) = default;
};

struct GlobalVarDecl {
  Attributes attrs;
  std::vector<std::string> names;
  Type type;
  friend bool operator==(const GlobalVarDecl &, const GlobalVarDecl &) = default;
};

// Function formals may be anonymous (`function h(int) returns (int)`).
struct FormalArg {
  std::optional<std::string> name;
  Type type;
  friend bool operator==(const FormalArg &, const FormalArg &) = default;
};

struct FunctionDecl {
  Attributes attrs;
  std::string name;
  std::vector<FormalArg> params;
  FormalArg result;
  std::optional<ExprPtr> body;
  friend bool operator==(const FunctionDecl &, const FunctionDecl &) = default;
};

struct AxiomDecl {
  Attributes attrs;
  ExprPtr expr;
  friend bool operator==(const AxiomDecl &, const AxiomDecl &) = default;
};

// `explicit_returns` records whether the source spelled a returns clause;
// normalization sets it.
struct ProcedureDecl {
  Attributes attrs;
  std::string name;
  std::vector<TypedName> ins;
  std::vector<TypedName> outs;
  bool explicit_returns = false;
  Specification spec;
  std::optional<Block> body;
  friend bool operator==(const ProcedureDecl &, const ProcedureDecl &) = default;
};

struct ImplementationDecl {
  Attributes attrs;
  std::string name;
  std::vector<TypedName> ins;
  std::vector<TypedName> outs;
  bool explicit_returns = false;
  Block body;
  friend bool operator==(const ImplementationDecl &,
                         const ImplementationDecl &) = default;
};

struct Declaration {
  using Node = std::variant<TypeDecl, ConstDecl, GlobalVarDecl, FunctionDecl,
                            AxiomDecl, ProcedureDecl, ImplementationDecl>;
  Node node;
  SourceLoc loc;

  template <class T> const T *as() const { return std::get_if<T>(&node); }
  template <class T> T *as() { return std::get_if<T>(&node); }
  template <class T> bool is() const { return std::holds_alternative<T>(node); }

  friend bool operator==(const Declaration &, const Declaration &) = default;
};

struct Program {
  std::vector<Declaration> declarations;
  friend bool operator==(const Program &, const Program &) = default;
};

// Drops nothing the parser keeps (comments never reach the AST) and gives
// every procedure and implementation an explicit returns clause. Idempotent.
Program normalize(Program p);

// SHA-256 of the normalized printed text, as 64 lowercase hex digits.
struct Fingerprint {
  std::string hex;
  friend bool operator==(const Fingerprint &, const Fingerprint &) = default;
  friend auto operator<=>(const Fingerprint &, const Fingerprint &) = default;
};

Fingerprint program_fingerprint(const Program &p);

// Fingerprint of a two-file unit; the companion is hashed after a separator
// that cannot occur in printed text.
Fingerprint unit_fingerprint(const Program &primary,
                             const std::optional<Program> &companion);

std::string_view to_string(ClauseKind kind);

} // namespace mugie::ivl
