// Copyright 2026 The ccdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccdp/mechanism.h"

#include <gtest/gtest.h>

#include "ccdp/adversary.h"
#include "ccdp/errors.h"

namespace ccdp {
namespace {

TwoRoundParams half_params() {
  TwoRoundParams p;
  const Prob half(Rat(1, 2));
  p.p0 = p.p00 = p.p01 = p.p10 = p.p11 = half;
  p.p0p = p.p00p = p.p01p = p.p10p = p.p11p = half;
  return p;
}

TEST(RrPureTest, UniformAtScaleOne) {
  auto m = rr_pure(Rat(1));
  const FiniteDist d0 = m->answers(0, {}, "q");
  const FiniteDist d1 = m->answers(1, {}, "q");
  EXPECT_EQ(d0, d1);
  EXPECT_EQ(d0.mass_of("0"), Rat(1, 2));
}

TEST(RrPureTest, BiasMatchesScale) {
  EXPECT_EQ(rr_pure(Rat(2))->answers(0, {}, "q").mass_of("0"), Rat(2, 3));
  EXPECT_EQ(rr_pure(Rat(3))->answers(1, {}, "q").mass_of("1"), Rat(3, 4));
}

TEST(RrPureTest, RejectsScaleBelowOne) {
  EXPECT_THROW(rr_pure(Rat(1, 2)), ParameterError);
}

TEST(RrApproxTest, TableEntries) {
  auto m = rr_approx(Rat(2), Prob(Rat(1, 10)));
  const FiniteDist d0 = m->answers(0, {}, "q");
  const FiniteDist d1 = m->answers(1, {}, "q");
  EXPECT_EQ(d0.mass_of("0"), Rat(3, 5));  // (1 - 1/10) * 2/3
  EXPECT_EQ(d0.mass_of("Iam0"), Rat(1, 10));
  EXPECT_EQ(d0.mass_of("Iam1"), Rat(0));
  EXPECT_EQ(d1.mass_of("Iam0"), Rat(0));
  EXPECT_EQ(d1.mass_of("Iam1"), Rat(1, 10));
}

TEST(RrApproxTest, ZeroDeltaMatchesPureWithGhostSymbols) {
  auto approx = rr_approx(Rat(2), Prob(Rat(0)));
  auto pure = rr_pure(Rat(2));
  for (int b = 0; b < 2; ++b) {
    const FiniteDist da = approx->answers(b, {}, "q");
    const FiniteDist dp = pure->answers(b, {}, "q");
    EXPECT_EQ(da.mass_of("0"), dp.mass_of("0"));
    EXPECT_EQ(da.mass_of("1"), dp.mass_of("1"));
    EXPECT_EQ(da.mass_of("Iam0"), Rat(0));
    EXPECT_EQ(da.mass_of("Iam1"), Rat(0));
  }
}

TEST(TwoRoundTest, AllHalvesIsInputIndependent) {
  EXPECT_TRUE(input_independent(*two_round(half_params())));
}

TEST(TwoRoundTest, DeterministicOppositeFirstRound) {
  TwoRoundParams p = half_params();
  p.p0 = Prob(Rat(1));
  p.p0p = Prob(Rat(0));
  auto m = two_round(p);
  EXPECT_EQ(m->answers(0, {}, "q").mass_of("0"), Rat(1));
  EXPECT_EQ(m->answers(1, {}, "q").mass_of("0"), Rat(0));
}

TEST(TwoRoundTest, FirstRoundIgnoresFutureQuery) {
  // Structural: the first-round distribution is stored once, before any
  // second-round query exists.
  TwoRoundParams p = half_params();
  p.p0 = Prob(Rat(2, 3));
  p.p0p = Prob(Rat(1, 3));
  p.p01 = Prob(Rat(1, 4));
  auto m = two_round(p);
  const History h0 = {{"q", "0"}};
  EXPECT_EQ(m->answers(0, h0, "0").mass_of("0"), Rat(1, 2));
  EXPECT_EQ(m->answers(0, h0, "1").mass_of("0"), Rat(1, 4));
  EXPECT_EQ(m->answers(0, {}, "q").mass_of("0"), Rat(2, 3));
}

TEST(NullExtensionTest, NonNullQueriesBehaveAsBase) {
  auto base = rr_pure(Rat(2));
  auto extended = null_extension(base, 1);
  EXPECT_EQ(extended->answers(0, {}, "q"), base->answers(0, {}, "q"));
}

TEST(NullExtensionTest, AllNullTranscriptIsInputIndependent) {
  auto extended = null_extension(rr_pure(Rat(2)), 3);
  const QueryFn all_null = [](const std::vector<std::string>&) {
    return std::string(kNullQuery);
  };
  const auto leaves = collect_leaves(*extended, all_null, 3);
  ASSERT_EQ(leaves.size(), 1u);
  EXPECT_EQ(leaves[0].label, "bot,bot,bot");
  EXPECT_EQ(leaves[0].p0, Rat(1));
  EXPECT_EQ(leaves[0].p1, Rat(1));
}

TEST(NullExtensionTest, InterleavedNullsDoNotAdvanceInnerHistory) {
  TwoRoundParams p = half_params();
  p.p0 = Prob(Rat(2, 3));
  p.p00 = Prob(Rat(1, 4));
  auto base = two_round(p);
  auto extended = null_extension(base, 4);
  // Slots: null, q, null, 0.
  const QueryFn policy = [](const std::vector<std::string>& answers) {
    switch (answers.size()) {
      case 0:
      case 2:
        return std::string(kNullQuery);
      case 1:
        return std::string("q");
      default:
        return std::string("0");
    }
  };
  const auto leaves = collect_leaves(*extended, policy, 4);
  // bot, a0, bot, a1 with the base mechanism's joint law.
  Rat mass_00 = 0;
  for (const auto& leaf : leaves) {
    if (leaf.label == "bot,0,bot,0") mass_00 = leaf.p0;
  }
  EXPECT_EQ(mass_00, Rat(2, 3) * Rat(1, 4));
}

TEST(SerializationTest, SaveLoadIdentity) {
  auto m = rr_pure(Rat(2));
  const std::string text = serialize_mechanism(*m);
  auto reloaded = parse_mechanism(text);
  EXPECT_EQ(serialize_mechanism(*reloaded), text);
  EXPECT_EQ(reloaded->branch(0), m->branch(0));
  EXPECT_EQ(reloaded->branch(1), m->branch(1));
  EXPECT_EQ(reloaded->rounds(), 1);
}

TEST(SerializationTest, TwoRoundRoundTrip) {
  TwoRoundParams p = half_params();
  p.p0 = Prob(Rat(13, 64));
  p.p11p = Prob(Rat(65535, 65536));
  auto m = two_round(p);
  auto reloaded = parse_mechanism(serialize_mechanism(*m));
  EXPECT_EQ(reloaded->branch(0), m->branch(0));
  EXPECT_EQ(reloaded->branch(1), m->branch(1));
}

TEST(SerializationTest, MalformedProbabilityRejected) {
  auto m = rr_pure(Rat(2));
  std::string text = serialize_mechanism(*m);
  const std::string needle = "\"2/3\"";
  text.replace(text.find(needle), needle.size(), "\"3/2\"");
  EXPECT_THROW(parse_mechanism(text), InvariantViolation);
}

TEST(SerializationTest, NonNormalizedBranchNamesHistory) {
  auto m = rr_pure(Rat(100));
  std::string text = serialize_mechanism(*m);
  const std::string needle = "\"100/101\"";
  text.replace(text.find(needle), needle.size(), "\"99/101\"");
  try {
    parse_mechanism(text);
    FAIL() << "expected InvariantViolation";
  } catch (const InvariantViolation& e) {
    EXPECT_NE(std::string(e.what()).find("|q"), std::string::npos);
  }
}

TEST(SerializationTest, RaggedMechanismRejected) {
  auto m = rr_pure(Rat(2));
  std::string text = serialize_mechanism(*m);
  // Remove input x1's branch row.
  const size_t x1 = text.find("\"x1\"");
  ASSERT_NE(x1, std::string::npos);
  const size_t open = text.find('{', x1);
  const size_t close = text.find('}', open);
  std::string broken = text.substr(0, open + 1) + text.substr(close);
  EXPECT_THROW(parse_mechanism(broken), InvariantViolation);
}

TEST(TableMechanismTest, MissingReachableBranchRejected) {
  // A 2-round table whose second round is undefined after a0 = 1.
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  branches[0].emplace("|q", FiniteDist({"0", "1"}, {Rat(1, 2), Rat(1, 2)}));
  branches[1].emplace("|q", FiniteDist({"0", "1"}, {Rat(1, 2), Rat(1, 2)}));
  branches[0].emplace("q,0|0", FiniteDist({"0", "1"}, {Rat(1), Rat(0)}));
  branches[1].emplace("q,0|0", FiniteDist({"0", "1"}, {Rat(1), Rat(0)}));
  EXPECT_THROW(
      TableMechanism(2, {{"q"}, {"0"}}, {{"0", "1"}, {"0", "1"}}, branches),
      InvariantViolation);
}

TEST(MaterializeTest, ReproducesTable) {
  auto m = two_round(half_params());
  auto copy = materialize(*m);
  EXPECT_EQ(copy->branch(0), m->branch(0));
  EXPECT_EQ(copy->branch(1), m->branch(1));
}

TEST(LimitsTest, MaterializeEnforcesHistoryBudget) {
  Limits limits;
  limits.max_histories = 3;
  EXPECT_THROW(materialize(*two_round(half_params()), limits), LimitExceeded);
}

}  // namespace
}  // namespace ccdp
