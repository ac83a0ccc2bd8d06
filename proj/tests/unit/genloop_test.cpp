// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "mugie/fixtures.hpp"
#include "mugie/genloop.hpp"
#include "mugie/mutops.hpp"
#include "mugie/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mugie;
using namespace mugie::ivl;

namespace {

ValidatedProgram listing1() { return *typecheck(fixtures::build_listing1()); }

BatchSpec s1_only(std::size_t num, std::size_t max_attempts, std::uint64_t seed = 42) {
  BatchSpec spec;
  spec.set_weight(OperatorKind::S1, 1);
  spec.num_mutants = num;
  spec.max_attempts = max_attempts;
  spec.rng_seed = seed;
  return spec;
}

std::set<Fingerprint> fingerprints(const MutantPool &pool) {
  std::set<Fingerprint> out;
  for (const auto &m : pool.members)
    out.insert(unit_fingerprint(m.unit.primary, m.unit.companion));
  return out;
}

} // namespace

TEST(Rng, EngineIsStandardMt19937_64) {
  // [rand.predef]: the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i)
    v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(Rng, BoundedDrawsArePinned) {
  // Regression values: any change here changes every generated pool.
  Rng rng(42);
  std::vector<std::size_t> got;
  for (int i = 0; i < 6; ++i)
    got.push_back(rng.below(10));
  EXPECT_EQ(got, (std::vector<std::size_t>{6, 4, 0, 2, 1, 8}));
  EXPECT_DOUBLE_EQ(Rng(42).unit(), 0.75515553295453897);
}

TEST(Rng, BelowIsInRangeAndUnitInUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.below(7), 7u);
    double u = rng.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, UniformChoiceOverThreeMembers) {
  Rng rng(2024);
  std::array<int, 3> hits{};
  const int draws = 30000;
  for (int i = 0; i < draws; ++i)
    ++hits[rng.below(3)];
  for (int h : hits)
    EXPECT_NEAR(static_cast<double>(h) / draws, 1.0 / 3.0, 0.05);
}

TEST(BatchSpec, Defaults) {
  auto all = BatchSpec::all_operators(1);
  EXPECT_EQ(all.num_mutants, 100u);
  EXPECT_EQ(all.max_attempts, 1000u);
  EXPECT_EQ(all.weight(OperatorKind::G2), 0.0);
  EXPECT_FALSE(all.mutate_triggers);
  for (auto k : kAllOperators)
    if (k != OperatorKind::G2)
      EXPECT_EQ(all.weight(k), 1.0);
  auto one = BatchSpec::single_operator(OperatorKind::L6, 1);
  EXPECT_EQ(one.num_mutants, 50u);
  EXPECT_EQ(one.max_attempts, 500u);
  EXPECT_TRUE(BatchSpec::single_operator(OperatorKind::G2, 1).mutate_triggers);
}

TEST(BatchSpec, ValidationErrors) {
  BatchSpec zero;
  zero.num_mutants = 1;
  EXPECT_THROW(validate(zero), std::invalid_argument);
  zero.num_mutants = 0;
  EXPECT_NO_THROW(validate(zero));

  auto negative = s1_only(1, 10);
  negative.set_weight(OperatorKind::L1, -1);
  EXPECT_THROW(validate(negative), std::invalid_argument);

  auto g2 = s1_only(1, 10);
  g2.set_weight(OperatorKind::G2, 1);
  EXPECT_THROW(validate(g2), std::invalid_argument);
  g2.mutate_triggers = true;
  EXPECT_NO_THROW(validate(g2));

  EXPECT_THROW(generate_mutants(listing1(), negative, "x"), std::invalid_argument);
}

// The S1-reachable set of Listing 1 is the full symmetric group on its five
// declarations; the oracle enumerates it directly.
TEST(Generate, S1ClosureIsAllPermutations) {
  auto pool = generate_mutants(listing1(), s1_only(119, 100000), "listing1.bpl");
  EXPECT_EQ(pool.members.size(), 120u);
  std::set<Fingerprint> oracle;
  for (const auto &q : oracle::all_declaration_orders(fixtures::build_listing1()))
    oracle.insert(program_fingerprint(q));
  EXPECT_EQ(oracle.size(), 120u);
  EXPECT_EQ(fingerprints(pool), oracle);
}

TEST(Generate, CapacityExhaustedStopsAtMaxAttempts) {
  auto pool = generate_mutants(listing1(), s1_only(200, 2000), "listing1.bpl");
  EXPECT_EQ(pool.members.size(), 120u);
  EXPECT_EQ(pool.attempts, 2000u);
}

TEST(Generate, ZeroMutantsMeansNoIterations) {
  auto pool = generate_mutants(listing1(), s1_only(0, 10), "listing1.bpl");
  EXPECT_EQ(pool.members.size(), 1u);
  EXPECT_EQ(pool.attempts, 0u);
  EXPECT_EQ(pool.mutant_count(), 0u);
}

TEST(Generate, MaxAttemptsZeroAndOne) {
  auto none = generate_mutants(listing1(), s1_only(5, 0), "s");
  EXPECT_EQ(none.attempts, 0u);
  EXPECT_EQ(none.members.size(), 1u);

  auto one = generate_mutants(listing1(), s1_only(5, 1), "s");
  EXPECT_EQ(one.attempts, 1u);
  // The only draw is an S1 swap of Listing 1, which is always new.
  EXPECT_EQ(one.members.size(), 2u);
}

TEST(Generate, SeedIsFirstAndFingerprintsUnique) {
  auto pool = generate_mutants(listing1(), BatchSpec::all_operators(3, 60), "listing1.bpl");
  ASSERT_FALSE(pool.members.empty());
  EXPECT_EQ(pool.members[0].unit.primary, fixtures::build_listing1());
  EXPECT_TRUE(pool.members[0].record.lineage.empty());
  EXPECT_LE(pool.members.size(), 61u);
  EXPECT_EQ(fingerprints(pool).size(), pool.members.size());
  EXPECT_EQ(pool.fingerprints, fingerprints(pool));
  for (std::size_t i = 1; i < pool.members.size(); ++i)
    EXPECT_FALSE(pool.members[i].record.lineage.empty());
}

TEST(Generate, Deterministic) {
  for (const auto &cp : fixtures::corpus()) {
    auto seed = *typecheck(cp.program);
    auto a = generate_mutants(seed, BatchSpec::all_operators(11, 30), cp.name);
    auto b = generate_mutants(seed, BatchSpec::all_operators(11, 30), cp.name);
    ASSERT_EQ(a.members.size(), b.members.size()) << cp.name;
    for (std::size_t i = 0; i < a.members.size(); ++i)
      EXPECT_EQ(a.members[i].record.fingerprint, b.members[i].record.fingerprint);
    EXPECT_EQ(a.attempts, b.attempts);
  }
}

TEST(Generate, DifferentRngSeedsDiffer) {
  auto seed = *typecheck(fixtures::corpus_program("gcd.bpl").program);
  auto a = generate_mutants(seed, BatchSpec::all_operators(1, 30), "gcd.bpl");
  auto b = generate_mutants(seed, BatchSpec::all_operators(2, 30), "gcd.bpl");
  EXPECT_NE(fingerprints(a), fingerprints(b));
}

TEST(Generate, ZeroWeightOperatorsNeverAppear) {
  BatchSpec spec;
  spec.set_weight(OperatorKind::L6, 1);
  spec.set_weight(OperatorKind::G1, 2);
  spec.num_mutants = 80;
  spec.max_attempts = 800;
  spec.rng_seed = 9;
  for (const char *name : {"bank.bpl", "gcd.bpl", "fib.bpl"}) {
    auto pool = generate_mutants(*typecheck(fixtures::corpus_program(name).program), spec, name);
    for (const auto &m : pool.members)
      for (const auto &s : m.record.lineage)
        EXPECT_TRUE(s.op == OperatorKind::L6 || s.op == OperatorKind::G1) << to_string(s);
  }
}

TEST(Generate, EveryMemberTypechecks) {
  for (const auto &cp : fixtures::corpus()) {
    auto pool = generate_mutants(*typecheck(cp.program), BatchSpec::all_operators(5, 40), cp.name);
    for (const auto &m : pool.members)
      EXPECT_TRUE(typecheck_unit(m.unit.primary, m.unit.companion).ok())
          << cp.name << " " << lineage_ops(m.record.lineage);
  }
}

TEST(Generate, NoSecondSplitOfTwoFileUnits) {
  BatchSpec spec;
  spec.set_weight(OperatorKind::S6, 1);
  spec.set_weight(OperatorKind::S1, 1);
  spec.num_mutants = 100;
  spec.max_attempts = 1000;
  auto pool = generate_mutants(listing1(), spec, "listing1.bpl");
  for (const auto &m : pool.members) {
    auto splits = std::count_if(m.record.lineage.begin(), m.record.lineage.end(),
                                [](const Site &s) { return s.op == OperatorKind::S6; });
    EXPECT_LE(splits, 1);
    EXPECT_EQ(m.unit.companion.has_value(), splits == 1);
  }
}

// D inline definitions give 2^D programs under S5 alone.
TEST(Generate, S5ClosureOfThreeDefinitions) {
  auto seed = *typecheck(fixtures::corpus_program("three_procs.bpl").program);
  auto pool = generate_mutants(seed, BatchSpec::single_operator(OperatorKind::S5, 4, 50), "t");
  EXPECT_EQ(pool.members.size(), 8u);
}

// --- replay --------------------------------------------------------------------

TEST(Replay, EmptyLineageIsSeed) {
  MutantRecord rec{"listing1.bpl", {}, 0, {}};
  auto unit = replay(fixtures::build_listing1(), rec);
  EXPECT_EQ(unit.primary, fixtures::build_listing1());
  EXPECT_FALSE(unit.companion);
}

TEST(Replay, MatchesDirectApplication) {
  auto p = fixtures::build_listing1();
  auto s = *parse_site("S1(0,2)");
  MutantRecord rec{"listing1.bpl", {s}, 0, {}};
  EXPECT_EQ(program_fingerprint(replay(p, rec).primary),
            program_fingerprint(apply_mutation(p, s).primary));
}

TEST(Replay, OutOfRangeIsInvalidLineage) {
  MutantRecord rec{"listing1.bpl", {*parse_site("S1(0,7)")}, 0, {}};
  EXPECT_THROW(replay(fixtures::build_listing1(), rec), InvalidLineage);
}

TEST(Replay, FingerprintMismatchIsInvalidLineage) {
  MutantRecord rec{"listing1.bpl", {*parse_site("S1(0,2)")}, 0, Fingerprint{"00"}};
  EXPECT_THROW(replay(fixtures::build_listing1(), rec), InvalidLineage);
}

TEST(Replay, ReproducesEveryPoolMember) {
  for (const char *name : {"listing1.bpl", "bank.bpl", "gcd.bpl", "triggers.bpl"}) {
    auto seed = *typecheck(fixtures::corpus_program(name).program);
    auto spec = BatchSpec::all_operators(77, 40);
    spec.set_weight(OperatorKind::G2, 1);
    spec.mutate_triggers = true;
    auto pool = generate_mutants(seed, spec, name);
    for (const auto &m : pool.members) {
      auto unit = replay(seed.program(), m.record);
      EXPECT_EQ(unit_fingerprint(unit.primary, unit.companion), m.record.fingerprint) << name;
    }
  }
}

// --- files -----------------------------------------------------------------------

TEST(Files, WriteAndDiscover) {
  test::TempDir dir;
  BatchSpec spec = BatchSpec::all_operators(8, 30);
  spec.set_weight(OperatorKind::S6, 5);
  auto pool = generate_mutants(listing1(), spec, "listing1.bpl");
  auto written = write_pool(pool, dir.path(), "listing1");
  ASSERT_EQ(written.size(), pool.mutant_count());
  EXPECT_TRUE(std::filesystem::exists(dir / "listing1.seed.bpl"));

  auto found = discover_programs(dir.path());
  ASSERT_EQ(found.size(), pool.members.size());
  EXPECT_EQ(found[0].mutant_id, kSeedId);
  EXPECT_EQ(found[0].lineage, "");
  bool saw_companion = false;
  for (std::size_t k = 1; k < found.size(); ++k) {
    EXPECT_EQ(found[k].mutant_id, "m" + std::to_string(k));
    EXPECT_EQ(found[k].seed_name, "listing1.bpl");
    EXPECT_EQ(found[k].lineage, lineage_ops(pool.members[k].record.lineage));
    EXPECT_EQ(found[k].files.size(), pool.members[k].unit.companion ? 2u : 1u);
    EXPECT_EQ(found[k].files, written[k - 1].files);
    saw_companion |= found[k].files.size() == 2;

    // Files reparse to the pooled unit.
    std::ifstream in(found[k].files[0]);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    auto reparsed = parse(text);
    ASSERT_TRUE(reparsed.ok());
    EXPECT_EQ(*reparsed, pool.members[k].unit.primary);
  }
  EXPECT_TRUE(saw_companion);
}

TEST(Files, CompanionWithoutPrimaryIsAnError) {
  test::TempDir dir;
  std::ofstream(dir / "x.m1.part2.bpl") << "// mugie-lineage seed=x rng=0 ops=S6(0)\n";
  EXPECT_THROW(discover_programs(dir.path()), std::runtime_error);
}

TEST(Files, MissingHeaderIsAnError) {
  test::TempDir dir;
  std::ofstream(dir / "x.m1.bpl") << "const c: int;\n";
  EXPECT_THROW(discover_programs(dir.path()), std::runtime_error);
}
