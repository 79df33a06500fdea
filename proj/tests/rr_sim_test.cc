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

#include "ccdp/rr_sim.h"

#include <gtest/gtest.h>

#include "ccdp/composition.h"
#include "ccdp/errors.h"
#include "ccdp/experiments.h"

namespace ccdp {
namespace {

TwoRoundParams half_params() {
  TwoRoundParams p;
  const Prob half(Rat(1, 2));
  p.p0 = p.p00 = p.p01 = p.p10 = p.p11 = half;
  p.p0p = p.p00p = p.p01p = p.p10p = p.p11p = half;
  return p;
}

// Pure-DP two-round sample with finite privacy loss.
std::shared_ptr<const TableMechanism> finite_two_round(SplitMix64& rng) {
  while (true) {
    const TwoRoundParams p = sample_mechanism(rng);
    auto m = two_round(p);
    try {
      priv_loss(*m, Prob(Rat(0)));
      return m;
    } catch (const UnboundedEpsilon&) {
    }
  }
}

TEST(BuildSimulatorTest, RandomizedResponseCollapsesToPointMasses) {
  for (const Rat& u : {Rat(2), Rat(3, 2), Rat(10)}) {
    auto sim = build_simulator(*rr_pure(u), u);
    EXPECT_EQ(sim->answers(0, {}, "q").mass_of("0"), Rat(1));
    EXPECT_EQ(sim->answers(1, {}, "q").mass_of("1"), Rat(1));
    EXPECT_EQ(sim->input_labels()[0], "rr0");
  }
}

TEST(BuildSimulatorTest, InputIndependentSpecialCase) {
  auto m = two_round(half_params());
  auto sim = build_simulator(*m, Rat(1));
  EXPECT_EQ(sim->branch(0), sim->branch(1));
  EXPECT_EQ(sim->answers(0, {}, "q").mass_of("0"), Rat(1, 2));
}

TEST(BuildSimulatorTest, ScaleOneRequiresInputIndependence) {
  EXPECT_THROW(build_simulator(*rr_pure(Rat(2)), Rat(1)), NotDpAtScale);
}

TEST(BuildSimulatorTest, BelowPrivLossScaleIsRejectedWithTranscript) {
  SplitMix64 rng{53};
  auto m = finite_two_round(rng);
  const Rat u = priv_loss(*m, Prob(Rat(0))).scale;
  ASSERT_GT(u, 1);
  const Rat below = (1 + u) / 2;
  try {
    build_simulator(*m, below);
    FAIL() << "expected NotDpAtScale";
  } catch (const NotDpAtScale& e) {
    EXPECT_NE(std::string(e.what()).find("transcript"), std::string::npos);
  }
}

TEST(BuildSimulatorTest, RowsNormalizeAtExactPrivLoss) {
  SplitMix64 rng{59};
  for (int round = 0; round < 10; ++round) {
    auto m = finite_two_round(rng);
    const Rat u = priv_loss(*m, Prob(Rat(0))).scale;
    auto sim = build_simulator(*m, u);
    // TableMechanism construction already enforces normalization and range;
    // spot-check a conditional anyway.
    for (int b = 0; b < 2; ++b) {
      const FiniteDist first = sim->answers(b, {}, "q");
      Rat total = 0;
      for (const auto& mass : first.masses()) {
        EXPECT_GE(mass, 0);
        EXPECT_LE(mass, 1);
        total += mass;
      }
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(VerifySimulationTest, RandomizedResponsePasses) {
  auto m = rr_pure(Rat(2));
  auto sim = build_simulator(*m, Rat(2));
  const auto report = verify_simulation(*m, *sim, Rat(2));
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.adversaries_checked, 1u);
  EXPECT_NE(report.to_json().find("\"status\":\"pass\""), std::string::npos);
}

TEST(VerifySimulationTest, TwoRoundSamplePassesAllFourAdversaries) {
  SplitMix64 rng{61};
  auto m = finite_two_round(rng);
  const Rat u = priv_loss(*m, Prob(Rat(0))).scale;
  auto sim = build_simulator(*m, u);
  const auto report = verify_simulation(*m, *sim, u);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.adversaries_checked, 4u);
}

TEST(VerifySimulationTest, SimulatorAboveExactScaleStillWorks) {
  // Any scale above the privacy loss yields a valid simulator.
  SplitMix64 rng{67};
  auto m = finite_two_round(rng);
  const Rat u = priv_loss(*m, Prob(Rat(0))).scale;
  auto sim = build_simulator(*m, Rat(u * 2));
  EXPECT_TRUE(verify_simulation(*m, *sim, Rat(u * 2)).pass);
}

TEST(VerifySimulationTest, CorruptedEntryIsNamed) {
  auto m = rr_pure(Rat(2));
  auto sim = build_simulator(*m, Rat(2));
  // Swap T(rr0)'s point mass from answer 0 to answer 1.
  std::array<std::map<std::string, FiniteDist>, 2> branches = {
      sim->branch(0), sim->branch(1)};
  branches[0].at("|q") = FiniteDist({"0", "1"}, {Rat(0), Rat(1)});
  TableMechanism corrupted(1, sim->query_alphabet(), sim->answer_alphabet(),
                           branches, sim->input_labels());
  const auto report = verify_simulation(*m, corrupted, Rat(2));
  EXPECT_FALSE(report.pass);
  ASSERT_FALSE(report.violations.empty());
  EXPECT_EQ(report.violations[0].transcript, "0");
  EXPECT_NE(report.to_json().find("\"expected\""), std::string::npos);
}

TEST(VerifySimulationTest, InducedMechanismRebuildIsIdempotent) {
  // The mechanism induced by feeding the simulator one randomized-response
  // bit has cumulative law w_match * T0 + w_cross * T1; its conditionals
  // are ratios of mixed cumulatives and must reproduce the original branch
  // tables exactly. Rebuilding a simulator from the induced mechanism then
  // verifies against it (idempotence up to view equality).
  SplitMix64 rng{71};
  auto m = finite_two_round(rng);
  const Rat u = priv_loss(*m, Prob(Rat(0))).scale;
  auto sim = build_simulator(*m, u);
  const Rat w_match = u / (1 + u);
  const Rat w_cross = 1 / (1 + u);
  std::array<std::map<std::string, FiniteDist>, 2> induced;
  // BFS with the simulator trees' cumulative masses per history.
  struct Node {
    History h;
    Rat t0, t1;
  };
  std::vector<Node> frontier = {{{}, Rat(1), Rat(1)}};
  while (!frontier.empty()) {
    Node node = frontier.back();
    frontier.pop_back();
    if (static_cast<int>(node.h.size()) == sim->rounds()) continue;
    for (const auto& q : sim->queries_at(node.h)) {
      const FiniteDist d0 = sim->answers(0, node.h, q);
      const FiniteDist d1 = sim->answers(1, node.h, q);
      const Rat den0 = w_match * node.t0 + w_cross * node.t1;
      const Rat den1 = w_cross * node.t0 + w_match * node.t1;
      std::vector<Rat> mix0(d0.size()), mix1(d0.size());
      for (size_t i = 0; i < d0.size(); ++i) {
        const Rat c0 = node.t0 * d0.mass(i);
        const Rat c1 = node.t1 * d1.mass(i);
        mix0[i] = (w_match * c0 + w_cross * c1) / den0;
        mix1[i] = (w_cross * c0 + w_match * c1) / den1;
        if (c0 != 0 || c1 != 0) {
          History child = node.h;
          child.push_back({q, d0.outcomes()[i]});
          frontier.push_back({std::move(child), c0, c1});
        }
      }
      const std::string key = branch_key(node.h, q);
      induced[0].emplace(key, FiniteDist(d0.outcomes(), std::move(mix0)));
      induced[1].emplace(key, FiniteDist(d0.outcomes(), std::move(mix1)));
      // Theorem identity at the branch level: the induced conditional is
      // the original mechanism's branch wherever the history is reachable.
      EXPECT_EQ(induced[0].at(key), m->branch(0).at(key));
      EXPECT_EQ(induced[1].at(key), m->branch(1).at(key));
    }
  }
  TableMechanism induced_mech(sim->rounds(), sim->query_alphabet(),
                              sim->answer_alphabet(), induced);
  EXPECT_EQ(priv_loss(induced_mech, Prob(Rat(0))).scale, u);
  auto sim2 = build_simulator(induced_mech, u);
  EXPECT_TRUE(verify_simulation(induced_mech, *sim2, u).pass);
  EXPECT_TRUE(verify_simulation(*m, *sim2, u).pass);
}

TEST(EquivalenceTest, RandomizedResponsePairIsTight) {
  const auto report = priv_loss_equivalence_check(
      {rr_pure(Rat(2)), rr_pure(Rat(3))}, Prob(Rat(0)));
  EXPECT_EQ(report.left_scale, 6);
  EXPECT_EQ(report.right_scale, 6);
  EXPECT_TRUE(report.equal);
}

TEST(EquivalenceTest, InputIndependentMechanismIsZero) {
  const auto report =
      priv_loss_equivalence_check({two_round(half_params())}, Prob(Rat(0)));
  EXPECT_EQ(report.left_scale, 1);
  EXPECT_EQ(report.right_scale, 1);
  EXPECT_TRUE(report.equal);
}

TEST(EquivalenceTest, CompositionNeverExceedsRrProduct) {
  SplitMix64 rng{73};
  auto m0 = finite_two_round(rng);
  auto m1 = finite_two_round(rng);
  const auto report =
      priv_loss_equivalence_check({m0, m1}, Prob(Rat(1, 1000)));
  EXPECT_TRUE(report.left_le_right);
}

}  // namespace
}  // namespace ccdp
