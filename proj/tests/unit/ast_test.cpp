// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "mugie/fixtures.hpp"
#include "mugie/printer.hpp"
#include "test_support.hpp"

using namespace mugie;
using namespace mugie::ivl;
using test::parse_ok;

TEST(Normalize, DeclarationOnlyProcedureGetsReturns) {
  auto p = normalize(parse_ok("procedure q(i: int);"));
  const auto *q = p.declarations[0].as<ProcedureDecl>();
  ASSERT_NE(q, nullptr);
  EXPECT_TRUE(q->explicit_returns);
  EXPECT_TRUE(q->outs.empty());
}

TEST(Normalize, Idempotent) {
  for (const auto &cp : fixtures::corpus()) {
    auto once = normalize(cp.program);
    EXPECT_EQ(normalize(once), once) << cp.name;
  }
}

TEST(Normalize, Listing1SignaturesUnchanged) {
  auto p = fixtures::build_listing1();
  auto n = normalize(p);
  EXPECT_EQ(*n.declarations[0].as<FunctionDecl>(), *p.declarations[0].as<FunctionDecl>());
  const auto *proc = n.declarations[4].as<ProcedureDecl>();
  ASSERT_EQ(proc->outs.size(), 1u);
  EXPECT_EQ(proc->outs[0].name, "o");
  EXPECT_EQ(print(n), print(p));
}

TEST(Fingerprint, StableUnderNormalization) {
  for (const auto &cp : fixtures::corpus())
    EXPECT_EQ(program_fingerprint(cp.program), program_fingerprint(normalize(cp.program)))
        << cp.name;
}

TEST(Fingerprint, SwappedDeclarationsDiffer) {
  auto p = fixtures::build_listing1();
  auto q = p;
  std::swap(q.declarations[0], q.declarations[1]);
  EXPECT_NE(program_fingerprint(p), program_fingerprint(q));
}

TEST(Fingerprint, IndependentParsesAgree) {
  auto a = parse_ok(fixtures::listing1_source());
  auto b = parse_ok(fixtures::listing1_source());
  EXPECT_EQ(program_fingerprint(a), program_fingerprint(b));
  EXPECT_EQ(program_fingerprint(a).hex.size(), 64u);
}

TEST(Fingerprint, LayoutAndCommentsDoNotMatter) {
  auto a = parse_ok("const c: int;\naxiom c > 0;");
  auto b = parse_ok("// note\nconst   c : int ; axiom (c > 0);");
  EXPECT_EQ(program_fingerprint(a), program_fingerprint(b));
}

TEST(Fingerprint, UnitDistinguishesSplitFromWhole) {
  auto p = parse_ok("const a: int; const b: int;");
  auto first = parse_ok("const a: int;");
  auto second = parse_ok("const b: int;");
  EXPECT_NE(unit_fingerprint(p, std::nullopt), unit_fingerprint(first, second));
  EXPECT_EQ(unit_fingerprint(p, std::nullopt), program_fingerprint(p));
  EXPECT_NE(unit_fingerprint(first, second), unit_fingerprint(second, first));
}

TEST(Ast, StructuralEqualityIsDeep) {
  auto a = make_binary(BinaryOp::And, make_bool(true), make_bool(false));
  auto b = make_binary(BinaryOp::And, make_bool(true), make_bool(false));
  auto c = make_binary(BinaryOp::And, make_bool(true), make_bool(true));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  EXPECT_TRUE(make_not(make_not(a))->is<Unary>());
}

TEST(Ast, LocalDeclCount) {
  auto p = parse_ok("procedure p() { var x: int; var y, z: int; x := 1; }");
  EXPECT_EQ(local_decl_count(*p.declarations[0].as<ProcedureDecl>()->body), 2u);
}
