// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mugie/fixtures.hpp"
#include "mugie/mutops.hpp"
#include "mugie/printer.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mugie;
using namespace mugie::ivl;
using test::checks;
using test::parse_ok;

namespace {

Site site(const char *text) {
  auto s = parse_site(text);
  EXPECT_TRUE(s) << text;
  return *s;
}

Program apply(const Program &p, const char *text) {
  return apply_mutation(p, site(text)).primary;
}

std::size_t count_sites(const Program &p, OperatorKind k) { return enumerate_sites(p, k).size(); }

bool contains(const std::string &hay, const std::string &needle) {
  return hay.find(needle) != std::string::npos;
}

const ProcedureDecl &proc(const Program &p, std::size_t i) {
  return *p.declarations.at(i).as<ProcedureDecl>();
}

} // namespace

TEST(Enumerate, Listing1) {
  auto p = fixtures::build_listing1();
  EXPECT_EQ(count_sites(p, OperatorKind::S1), 10u);
  EXPECT_TRUE(enumerate_sites(p, OperatorKind::L8).empty());
  EXPECT_EQ(count_sites(p, OperatorKind::S5), 1u);
  EXPECT_EQ(count_sites(p, OperatorKind::S6), 5u);
  EXPECT_EQ(count_sites(p, OperatorKind::G2), 0u);
}

TEST(Enumerate, SitesAreUnorderedPairsWithoutDuplicates) {
  for (const auto &cp : fixtures::corpus()) {
    for (auto k : kAllOperators) {
      auto sites = enumerate_sites(cp.program, k);
      std::set<std::string> seen;
      for (const auto &s : sites) {
        EXPECT_EQ(s.op, k);
        EXPECT_TRUE(seen.insert(to_string(s)).second) << cp.name << " " << to_string(s);
        if (k == OperatorKind::S1 || k == OperatorKind::L1 || k == OperatorKind::L6)
          EXPECT_LT(s.args[s.args.size() - 2], s.args.back()) << to_string(s);
      }
    }
  }
}

TEST(Enumerate, TwoRequiresGiveOneL4Site) {
  auto p = parse_ok("procedure p(i: int, n: int) requires i >= 0; requires i < n; { }");
  auto sites = enumerate_sites(p, OperatorKind::L4);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(to_string(sites[0]), "L4(p,0,1)");
}

// --- S1 ------------------------------------------------------------------------

TEST(S1, TwoSwapsPutAsDeclarationsFirst) {
  auto p = fixtures::build_listing1();
  auto q = apply(apply(p, "S1(0,2)"), "S1(1,3)");
  ASSERT_EQ(q.declarations.size(), 5u);
  EXPECT_EQ(q.declarations[0], p.declarations[2]);
  EXPECT_EQ(q.declarations[1], p.declarations[3]);
  EXPECT_EQ(q.declarations[2], p.declarations[0]);
  EXPECT_EQ(q.declarations[3], p.declarations[1]);
  EXPECT_EQ(q.declarations[4], p.declarations[4]);
}

TEST(S1, SingleDeclarationHasNoSites) {
  EXPECT_TRUE(enumerate_sites(parse_ok("const c: int;"), OperatorKind::S1).empty());
}

TEST(S1, Involution) {
  auto p = fixtures::build_listing1();
  EXPECT_EQ(program_fingerprint(apply(apply(p, "S1(1,4)"), "S1(1,4)")), program_fingerprint(p));
}

// --- S5 ------------------------------------------------------------------------

TEST(S5, SplitsDefinitionIntoDeclarationAndImplementation) {
  auto p = parse_ok("procedure p(x: int) returns (y: int) requires x > 0; { y := x; }");
  auto q = apply(p, "S5(p)");
  EXPECT_EQ(print(q), "procedure p(x: int) returns (y: int);\n"
                      "  requires x > 0;\n"
                      "implementation p(x: int) returns (y: int)\n"
                      "{\n"
                      "  y := x;\n"
                      "}\n");
  EXPECT_TRUE(checks(q));
  EXPECT_TRUE(enumerate_sites(q, OperatorKind::S5).empty());
  EXPECT_THROW(apply_mutation(q, site("S5(p)")), InvalidSite);
}

TEST(S5, DeclarationOnlyIsNotASite) {
  EXPECT_TRUE(enumerate_sites(parse_ok("procedure q(i: int);"), OperatorKind::S5).empty());
}

// --- S6 ------------------------------------------------------------------------

TEST(S6, MoveConstToCompanion) {
  auto p = fixtures::build_listing1();
  auto r = apply_mutation(p, site("S6(2)"));
  ASSERT_TRUE(r.companion);
  EXPECT_EQ(r.primary.declarations.size(), 4u);
  ASSERT_EQ(r.companion->declarations.size(), 1u);
  EXPECT_EQ(r.companion->declarations[0], p.declarations[2]);
  EXPECT_TRUE(typecheck_unit(r.primary, r.companion).ok());
}

TEST(S6, SingleDeclarationIsNotASite) {
  auto p = parse_ok("const c: int;");
  EXPECT_TRUE(enumerate_sites(p, OperatorKind::S6).empty());
  EXPECT_THROW(apply_mutation(p, site("S6(0)")), InvalidSite);
}

TEST(S6, CompanionOnlyForS6) {
  auto p = fixtures::build_listing1();
  for (auto k : kAllOperators)
    for (const auto &s : enumerate_sites(p, k))
      EXPECT_EQ(apply_mutation(p, s).companion.has_value(), k == OperatorKind::S6);
}

// --- L1 / L2 -------------------------------------------------------------------

TEST(L1, SwapsLocalDeclarations) {
  auto p = parse_ok("procedure p() { var x: int; var y: bool; }");
  auto q = apply(p, "L1(p,0,1)");
  EXPECT_TRUE(contains(print(q), "  var y: bool;\n  var x: int;\n"));
  EXPECT_EQ(apply(q, "L1(p,0,1)"), p);
}

TEST(L1, OneLocalHasNoSites) {
  EXPECT_TRUE(enumerate_sites(parse_ok("procedure p() { var x: int; x := 1; }"),
                              OperatorKind::L1)
                  .empty());
}

TEST(L2, SplitsFirstVariable) {
  auto two = apply(parse_ok("procedure p() { var x, y: int; }"), "L2(p,0)");
  EXPECT_TRUE(contains(print(two), "  var x: int;\n  var y: int;\n"));
  auto three = apply(parse_ok("procedure p() { var x, y, z: int; }"), "L2(p,0)");
  EXPECT_TRUE(contains(print(three), "  var x: int;\n  var y, z: int;\n"));
}

TEST(L2, SingleVariableIsNotASite) {
  EXPECT_TRUE(enumerate_sites(parse_ok("procedure p() { var x: int; }"), OperatorKind::L2).empty());
}

// --- L4 / L5 -------------------------------------------------------------------

TEST(L4, JoinsPreconditions) {
  auto p = parse_ok("procedure p(i: int, n: int) requires i >= 0; requires i < n; { }");
  auto q = apply(p, "L4(p,0,1)");
  EXPECT_TRUE(contains(print(q), "  requires (i >= 0) && (i < n);\n")) << print(q);
  EXPECT_EQ(proc(q, 0).spec.requires_.size(), 1u);
  EXPECT_TRUE(enumerate_sites(q, OperatorKind::L4).empty());
}

TEST(L4, JoinLandsAtEarlierPosition) {
  auto p = parse_ok("procedure p(a: int) requires a > 0; requires a > 1; requires a > 2; { }");
  auto q = apply(p, "L4(p,0,2)");
  auto text = print(q);
  EXPECT_TRUE(contains(text, "  requires (a > 0) && (a > 2);\n  requires a > 1;\n")) << text;
}

TEST(L4, FreeAndAttributedClausesAreNotSites) {
  auto p = parse_ok("procedure p(a: int) free requires a > 0; requires {:id 1} a > 1;"
                    " requires a > 2; { }");
  EXPECT_TRUE(enumerate_sites(p, OperatorKind::L4).empty());
  EXPECT_TRUE(enumerate_sites(p, OperatorKind::L6).empty());
}

TEST(L5, JoinsPostconditions) {
  auto p = parse_ok("procedure p(m: int) returns (o: int) ensures o > 0; ensures o < m; { }");
  auto q = apply(p, "L5(p,0,1)");
  EXPECT_TRUE(contains(print(q), "  ensures (o > 0) && (o < m);\n")) << print(q);
  EXPECT_EQ(proc(q, 0).spec.ensures.size(), 1u);
}

TEST(L5, OneEnsuresHasNoSites) {
  EXPECT_TRUE(enumerate_sites(fixtures::build_listing1(), OperatorKind::L5).empty());
}

// --- L6 ------------------------------------------------------------------------

TEST(L6, SwapsPostconditions) {
  auto p = parse_ok("procedure p() returns (o: int) ensures o > 0; ensures o < 9; { o := 1; }");
  auto q = apply(p, "L6(p,ensures,0,1)");
  EXPECT_TRUE(contains(print(q), "  ensures o < 9;\n  ensures o > 0;\n"));
}

TEST(L6, AdjacentAssertsOnly) {
  auto p = parse_ok("procedure p() { assert true; assert false ==> true; }");
  auto q = apply(p, "L6(p,assert,0,1)");
  EXPECT_TRUE(contains(print(q), "  assert false ==> true;\n  assert true;\n")) << print(q);

  auto gap = parse_ok("procedure p() { var x: int; assert true; x := 1; assert x == 1; }");
  for (const auto &s : enumerate_sites(gap, OperatorKind::L6))
    EXPECT_NE(s.clause, ClauseKind::Assert) << to_string(s);
  EXPECT_THROW(apply_mutation(gap, site("L6(p,assert,1,3)")), InvalidSite);
}

TEST(L6, SingleInvariantHasNoInvariantSites) {
  auto p = parse_ok("procedure p() { var i: int; while (i < 0) invariant i <= 0; { i := i + 1; } }");
  for (const auto &s : enumerate_sites(p, OperatorKind::L6))
    EXPECT_NE(s.clause, ClauseKind::Invariant);
}

// --- L8 ------------------------------------------------------------------------

TEST(L8, NegatesAndSwapsBranches) {
  auto p = parse_ok("procedure p(x: int) returns (y: int) {"
                    " if (x > 0) { y := 1; } else { y := 2; } }");
  auto q = apply(p, "L8(p:0)");
  EXPECT_TRUE(contains(print(q), "  if (!(x > 0)) {\n    y := 2;\n  } else {\n    y := 1;\n  }\n"))
      << print(q);
  auto qq = apply(q, "L8(p:0)");
  EXPECT_TRUE(contains(print(qq), "  if (!(!(x > 0))) {\n    y := 1;\n  } else {\n    y := 2;\n  }\n"))
      << print(qq);
  EXPECT_NE(program_fingerprint(qq), program_fingerprint(p));
}

TEST(L8, IfWithoutElseIsNotASite) {
  auto p = parse_ok("procedure p(x: int) returns (y: int) { if (x > 0) { y := 1; } }");
  EXPECT_TRUE(enumerate_sites(p, OperatorKind::L8).empty());
  EXPECT_THROW(apply_mutation(p, site("L8(p:0)")), InvalidSite);
}

// --- G1 ------------------------------------------------------------------------

TEST(G1, RequiresInTheMiddle) {
  auto p = parse_ok("procedure p(a: int) requires a > 0; requires a > 1; { }");
  auto q = apply(p, "G1(p,requires,1)");
  EXPECT_TRUE(contains(print(q), "  requires a > 0;\n  requires true;\n  requires a > 1;\n"));
}

TEST(G1, AssertBeforeReturn) {
  auto p = parse_ok("procedure p() { return; }");
  auto q = apply(p, "G1(p,assert,0)");
  EXPECT_TRUE(contains(print(q), "  assert true;\n  return;\n")) << print(q);
}

TEST(G1, FirstLoopInvariant) {
  auto p = parse_ok("procedure p() { var i: int; while (i < 0) invariant i <= 0; { i := i + 1; } }");
  auto q = apply(p, "G1(p:1,invariant,0)");
  EXPECT_TRUE(contains(print(q), "    invariant true;\n    invariant i <= 0;\n")) << print(q);
}

TEST(G1, NeverInsideLocalDeclarationSection) {
  auto p = parse_ok("procedure p() { var a: int; var b: int; a := 1; }");
  for (const auto &s : enumerate_sites(p, OperatorKind::G1))
    if (s.clause == ClauseKind::Assert && s.path.steps.empty())
      EXPECT_GE(s.args.back(), 2u) << to_string(s);
}

// --- G2 ------------------------------------------------------------------------

TEST(G2, RemovesTrigger) {
  auto p = parse_ok("function f(x: int) returns (int); axiom (forall x: int :: {f(x)} f(x) > 0);");
  auto q = apply(p, "G2(1:0,0)");
  EXPECT_TRUE(contains(print(q), "axiom (forall x: int :: f(x) > 0);")) << print(q);
  EXPECT_EQ(trigger_count(q), 0u);
}

TEST(G2, QuantifierWithoutTriggersIsNotASite) {
  EXPECT_TRUE(enumerate_sites(fixtures::build_listing1(), OperatorKind::G2).empty());
}

// --- invalid sites ---------------------------------------------------------------

TEST(InvalidSites, Throw) {
  auto p = fixtures::build_listing1();
  for (const char *bad : {"S1(0,5)", "S1(2,2)", "S5(q)", "S6(9)", "L1(p,0,1)", "L2(p,0)",
                          "L4(p,0,1)", "L5(p,0,1)", "L6(p,requires,0,1)", "L8(p:0)",
                          "G1(p,requires,2)", "G1(p@1,requires,0)", "G1(p/0t,assert,0)",
                          "G2(1:0,0)", "G2(4:0,0)"})
    EXPECT_THROW(apply_mutation(p, site(bad)), InvalidSite) << bad;
}

// --- properties over the corpus ----------------------------------------------------

TEST(Properties, EverySiteYieldsAWellFormedProgram) {
  for (const auto &cp : fixtures::corpus()) {
    for (auto k : kAllOperators) {
      for (const auto &s : enumerate_sites(cp.program, k)) {
        auto r = apply_mutation(cp.program, s);
        EXPECT_EQ(r.applied, s);
        auto checked = typecheck_unit(r.primary, r.companion);
        EXPECT_TRUE(checked.ok()) << cp.name << " " << to_string(s) << "\n"
                                  << checked.error_text();
        EXPECT_NE(unit_fingerprint(r.primary, r.companion), program_fingerprint(cp.program))
            << cp.name << " " << to_string(s);
      }
    }
  }
}

TEST(Properties, G1InsertThenDeleteRestoresFingerprint) {
  for (const auto &cp : fixtures::corpus()) {
    for (const auto &s : enumerate_sites(cp.program, OperatorKind::G1)) {
      auto q = apply_mutation(cp.program, s).primary;
      EXPECT_NE(program_fingerprint(q), program_fingerprint(cp.program));
      EXPECT_EQ(program_fingerprint(oracle::remove_inserted(q, s)),
                program_fingerprint(cp.program))
          << cp.name << " " << to_string(s);
    }
  }
}

TEST(Properties, JoinsPreserveFlattenedConjunction) {
  for (const auto &cp : fixtures::corpus()) {
    for (auto k : {OperatorKind::L4, OperatorKind::L5}) {
      for (const auto &s : enumerate_sites(cp.program, k)) {
        auto before = cp.program;
        auto after = apply_mutation(cp.program, s).primary;
        auto *b = oracle::procedure(before, s.path.proc);
        auto *a = oracle::procedure(after, s.path.proc);
        const auto &cb = k == OperatorKind::L4 ? b->spec.requires_ : b->spec.ensures;
        const auto &ca = k == OperatorKind::L4 ? a->spec.requires_ : a->spec.ensures;
        EXPECT_EQ(ca.size() + 1, cb.size());
        auto fb = oracle::flatten_clauses(cb);
        auto fa = oracle::flatten_clauses(ca);
        // same multiset of conjuncts
        auto key = [](const ivl::Expr &e) { return print_expr(e); };
        std::multiset<std::string> mb, ma;
        for (const auto &e : fb) mb.insert(key(e));
        for (const auto &e : fa) ma.insert(key(e));
        EXPECT_EQ(ma, mb) << cp.name << " " << to_string(s);
      }
    }
  }
}
