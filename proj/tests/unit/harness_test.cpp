// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mugie/fixtures.hpp"
#include "mugie/harness.hpp"
#include "test_support.hpp"

using namespace mugie;
using Files = std::vector<std::filesystem::path>;

namespace {

ToolSpec mock(const std::vector<std::string> &behavior, double timeout = 10, int confirm = 10) {
  ToolSpec t;
  t.name = "mock";
  t.command_template = fixtures::mock_command(behavior);
  t.timeout_seconds = timeout;
  t.timeout_confirm_runs = confirm;
  return t;
}

class HarnessTest : public ::testing::Test {
protected:
  void SetUp() override {
    plain = dir / "plain.bpl";
    marked = dir / "marked.bpl";
    std::ofstream(plain) << "// header\nconst c: int;\n";
    std::ofstream(marked) << "// header\nconst MARK: int;\nconst c: int;\n";
  }
  test::TempDir dir;
  std::filesystem::path plain, marked;
};

} // namespace

TEST(Classify, DecisionTable) {
  ToolSpec t;
  const std::string ok = "Boogie program verifier finished with 3 verified, 0 errors";
  const std::string fail = "Boogie program verifier finished with 2 verified, 1 error";
  const std::string post = "x.bpl(3,1): Error: A postcondition might not hold on this return path.";
  const std::string type = "1 type checking errors detected in x.bpl";
  EXPECT_EQ(classify(t, 0, false, ok), VerdictKind::Verified);
  EXPECT_EQ(classify(t, std::nullopt, true, ok), VerdictKind::Timeout);
  EXPECT_EQ(classify(t, 1, false, fail), VerdictKind::VerificationFailure);
  EXPECT_EQ(classify(t, 0, false, fail), VerdictKind::VerificationFailure);
  EXPECT_EQ(classify(t, 1, false, post), VerdictKind::VerificationFailure);
  EXPECT_EQ(classify(t, 2, false, type), VerdictKind::ToolError);
  EXPECT_EQ(classify(t, 1, false, ok), VerdictKind::ToolError); // nonzero exit is not success
  EXPECT_EQ(classify(t, 0, false, ""), VerdictKind::ToolError);
  EXPECT_EQ(classify(t, 139, false, "Segmentation fault"), VerdictKind::ToolError);
  EXPECT_EQ(classify(t, 0, false, "0 verified, 0 errors"), VerdictKind::Verified);
  EXPECT_EQ(classify(t, 1, false, "1 verified, 12 errors"), VerdictKind::VerificationFailure);
}

TEST(Classify, PatternsAreConfigurable) {
  ToolSpec t;
  t.success_pattern = "^OK$";
  t.failure_patterns = {"^NO$"};
  EXPECT_EQ(classify(t, 0, false, "OK"), VerdictKind::Verified);
  EXPECT_EQ(classify(t, 1, false, "NO"), VerdictKind::VerificationFailure);
  EXPECT_EQ(classify(t, 0, false, "1 verified, 0 errors"), VerdictKind::ToolError);
}

TEST(VerdictKindNames, RoundTrip) {
  for (auto k : {VerdictKind::Verified, VerdictKind::VerificationFailure, VerdictKind::ToolError,
                 VerdictKind::Timeout})
    EXPECT_EQ(parse_verdict_kind(to_string(k)), k);
  EXPECT_FALSE(parse_verdict_kind("verified"));
}

TEST(ToolSpecValidation, Errors) {
  ToolSpec t;
  EXPECT_NO_THROW(validate(t));
  t.command_template = "boogie";
  EXPECT_THROW(validate(t), std::invalid_argument);
  t.command_template = "boogie {files} {files}";
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = ToolSpec{};
  t.timeout_seconds = 0;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = ToolSpec{};
  t.timeout_confirm_runs = 0;
  EXPECT_THROW(validate(t), std::invalid_argument);
  t = ToolSpec{};
  t.failure_patterns = {"("};
  EXPECT_THROW(validate(t), std::invalid_argument);
}

TEST(ExpandCommand, QuotingAndFiles) {
  ToolSpec t;
  t.command_template = "boogie /timeLimit:20 '/proverOpt:O:a b' {files} -x \"q r\"";
  auto argv = expand_command(t, {"a.bpl", "b c.bpl"});
  EXPECT_EQ(argv, (std::vector<std::string>{"boogie", "/timeLimit:20", "/proverOpt:O:a b",
                                            "a.bpl", "b c.bpl", "-x", "q r"}));
  t.command_template = "tool --in={files}";
  EXPECT_EQ(expand_command(t, {"a", "b"}), (std::vector<std::string>{"tool", "--in=a b"}));
}

TEST_F(HarnessTest, AlwaysVerify) {
  auto v = run_one(mock({"always-verify"}), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Verified);
  EXPECT_EQ(v.raw_exit, 0);
  EXPECT_NE(v.captured_output.find("1 verified, 0 errors"), std::string::npos);
}

TEST_F(HarnessTest, AlwaysFail) {
  EXPECT_EQ(run_one(mock({"always-fail", "verification"}), {plain}).kind,
            VerdictKind::VerificationFailure);
  auto type = run_one(mock({"always-fail"}), {plain});
  EXPECT_EQ(type.kind, VerdictKind::ToolError);
  EXPECT_EQ(type.raw_exit, 2);
}

TEST_F(HarnessTest, FailOnMarker) {
  auto t = mock({"fail-on-marker", "MARK: int; "});
  EXPECT_EQ(run_one(t, {plain}).kind, VerdictKind::Verified);
  EXPECT_EQ(run_one(t, {marked}).kind, VerdictKind::VerificationFailure);
  EXPECT_EQ(run_one(t, {plain, marked}).kind, VerdictKind::VerificationFailure);
  // A marker at the very end does not match the trailing space.
  std::ofstream(dir / "last.bpl") << "const c: int;\nconst MARK: int;\n";
  EXPECT_EQ(run_one(t, {dir / "last.bpl"}).kind, VerdictKind::Verified);
  // Comment lines are ignored.
  std::ofstream(dir / "comment.bpl") << "// const MARK: int; x\nconst c: int;\n";
  EXPECT_EQ(run_one(t, {dir / "comment.bpl"}).kind, VerdictKind::Verified);
}

TEST_F(HarnessTest, TimeoutKillsAndReportsWallTime) {
  auto v = run_one(mock({"sleep-then-verify", "5"}, 1.0), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Timeout);
  EXPECT_FALSE(v.raw_exit.has_value());
  EXPECT_GE(v.wall_time_seconds, 1.0);
  EXPECT_LE(v.wall_time_seconds, 2.5);
}

TEST_F(HarnessTest, ConfirmedTimeoutUsesEveryRun) {
  auto v = run_confirmed(mock({"sleep-then-verify", "5"}, 0.2, 3), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Timeout);
  EXPECT_EQ(v.runs, 3);
}

TEST_F(HarnessTest, ImmediateVerdictUsesOneRun) {
  auto v = run_confirmed(mock({"always-verify"}), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Verified);
  EXPECT_EQ(v.runs, 1);
}

TEST_F(HarnessTest, FlakyTimeoutVerifiesOnLaterRun) {
  auto counter = dir / "counter";
  auto v = run_confirmed(mock({"flaky-timeout", counter.string(), "3"}, 0.3, 10), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Verified);
  EXPECT_EQ(v.runs, 3);
}

TEST_F(HarnessTest, SlowButInTimeIsVerified) {
  auto v = run_one(mock({"sleep-then-verify", "0.2"}, 5), {plain});
  EXPECT_EQ(v.kind, VerdictKind::Verified);
  EXPECT_GE(v.wall_time_seconds, 0.2);
}

TEST_F(HarnessTest, LaunchFailures) {
  ToolSpec t;
  t.command_template = "/nonexistent/verifier {files}";
  EXPECT_THROW(run_one(t, {plain}), LaunchError);
  EXPECT_THROW(run_one(mock({"always-verify"}), {dir / "missing.bpl"}), std::runtime_error);
}

TEST_F(HarnessTest, SignalledToolIsToolError) {
  ToolSpec t;
  t.command_template = "sh -c 'kill -SEGV $$' sh {files}";
  auto v = run_one(t, {plain});
  EXPECT_EQ(v.kind, VerdictKind::ToolError);
  EXPECT_EQ(v.raw_exit, 128 + 11);
}

// --- batches ---------------------------------------------------------------------

TEST_F(HarnessTest, BatchRowsInJobOrder) {
  // Reports how many files each run received.
  ToolSpec t;
  t.name = "count";
  t.command_template = "sh -c 'echo \"$# verified, 0 errors\"' sh {files}";
  std::vector<ProgramJob> jobs = {
      {"s.bpl", "SEED", "", "b", {plain}},
      {"s.bpl", "m1", "S1(0,1)", "b", {plain}},
      {"s.bpl", "m2", "S6(0)", "b", {plain, marked}},
      {"s.bpl", "m3", "S1(0,1),L4(p,0,1)", "b", {marked}},
  };
  for (unsigned workers : {1u, 4u}) {
    auto rows = check_batch(t, jobs, workers);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].mutant_id, jobs[i].mutant_id);
      EXPECT_EQ(rows[i].lineage, jobs[i].lineage);
      EXPECT_EQ(rows[i].tool, "count");
      ASSERT_TRUE(rows[i].verdict);
      EXPECT_EQ(rows[i].verdict->kind, VerdictKind::Verified);
    }
    EXPECT_NE(rows[2].verdict->captured_output.find("2 verified"), std::string::npos);
    EXPECT_NE(rows[1].verdict->captured_output.find("1 verified"), std::string::npos);
  }
}

TEST_F(HarnessTest, BatchWithOnlySeed) {
  auto rows = check_batch(mock({"always-verify"}), {{"s.bpl", "SEED", "", "b", {plain}}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].verdict->kind, VerdictKind::Verified);
}

TEST_F(HarnessTest, BatchKeepsGoingAfterLaunchFailure) {
  std::vector<ProgramJob> jobs = {{"s.bpl", "SEED", "", "b", {plain}},
                                  {"s.bpl", "m1", "", "b", {dir / "gone.bpl"}},
                                  {"s.bpl", "m2", "", "b", {marked}}};
  auto rows = check_batch(mock({"always-verify"}), jobs, 2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].verdict);
  EXPECT_FALSE(rows[1].verdict);
  EXPECT_FALSE(rows[1].launch_error.empty());
  EXPECT_TRUE(rows[2].verdict);
}

TEST_F(HarnessTest, ParallelAndSerialAgree) {
  std::vector<ProgramJob> jobs;
  for (int i = 0; i < 12; ++i)
    jobs.push_back({"s.bpl", "m" + std::to_string(i), "", "b", {i % 3 ? plain : marked}});
  auto t = mock({"fail-on-marker", "MARK: int; "});
  auto serial = check_batch(t, jobs, 1);
  auto parallel = check_batch(t, jobs, 6);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].mutant_id, parallel[i].mutant_id);
    EXPECT_EQ(serial[i].verdict->kind, parallel[i].verdict->kind);
  }
}

// --- results file ----------------------------------------------------------------

TEST(Results, RoundTrip) {
  std::vector<CampaignRow> rows(3);
  rows[0] = {"a.bpl", "SEED", "", "boogie", "M_all", Verdict{VerdictKind::Verified, 1.25, 0, "", 1}, ""};
  rows[1] = {"a.bpl", "m1", "S1(0,1),L4(p,0,1)", "boogie", "M_all",
             Verdict{VerdictKind::Timeout, 20.5, std::nullopt, "", 10}, ""};
  rows[2] = {"a.bpl", "m2", "S6(0)", "boogie", "M_all", std::nullopt, "cannot execute"};
  std::stringstream io;
  write_results(io, rows);
  auto text = io.str();
  EXPECT_NE(text.find("\"raw_exit\":\"timeout\""), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  auto back = read_results(io);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].seed, "a.bpl");
  EXPECT_EQ(back[0].verdict->kind, VerdictKind::Verified);
  EXPECT_EQ(back[0].verdict->raw_exit, 0);
  EXPECT_DOUBLE_EQ(back[0].verdict->wall_time_seconds, 1.25);
  EXPECT_EQ(back[1].lineage, "S1(0,1),L4(p,0,1)");
  EXPECT_EQ(back[1].batch, "M_all");
  EXPECT_EQ(back[1].verdict->kind, VerdictKind::Timeout);
  EXPECT_FALSE(back[1].verdict->raw_exit);
}

TEST(Results, BlankLinesAndMissingBatch) {
  std::stringstream in(
      "\n{\"seed\":\"s\",\"mutant_id\":\"SEED\",\"lineage\":\"\",\"tool\":\"t\","
      "\"kind\":\"Verified\",\"wall_time_seconds\":1,\"raw_exit\":0}\n\n");
  auto rows = read_results(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].batch, kDefaultBatch);
}

TEST(Results, Malformed) {
  for (const char *bad :
       {"not json", "[1,2]", "{\"seed\":\"s\"}",
        "{\"seed\":\"s\",\"mutant_id\":\"SEED\",\"lineage\":\"\",\"tool\":\"t\",\"kind\":\"Maybe\","
        "\"wall_time_seconds\":1,\"raw_exit\":0}",
        "{\"seed\":\"s\",\"mutant_id\":\"SEED\",\"lineage\":\"\",\"tool\":\"t\",\"kind\":\"Verified\","
        "\"wall_time_seconds\":1,\"raw_exit\":\"x\"}",
        "{\"seed\":\"s\",\"mutant_id\":\"SEED\",\"lineage\":\"\",\"tool\":\"t\",\"kind\":\"Verified\","
        "\"raw_exit\":0}"}) {
    std::stringstream in(bad);
    EXPECT_THROW(read_results(in), MalformedResults) << bad;
  }
}
