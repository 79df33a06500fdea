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

#include "ccdp/lp.h"

#include <gtest/gtest.h>

#include "ccdp/adversary.h"
#include "ccdp/errors.h"
#include "ccdp/experiments.h"

namespace ccdp {
namespace {

size_t var_index(int c, int q, int a0, int a1) {
  return static_cast<size_t>(((c * 2 + q) * 2 + a0) * 2 + a1);
}

std::shared_ptr<const TableMechanism> finite_two_round(SplitMix64& rng,
                                                       const Prob& delta,
                                                       Rat* scale) {
  while (true) {
    auto m = two_round(sample_mechanism(rng));
    try {
      *scale = priv_loss(*m, delta).scale;
      return m;
    } catch (const UnboundedEpsilon&) {
    }
  }
}

TEST(BuildSystemTest, RowCountAudit) {
  SplitMix64 rng{79};
  auto m = two_round(sample_mechanism(rng));
  const LpSystem sys = build_system(*m, Rat(2), Prob(Rat(1, 20)));
  EXPECT_EQ(sys.num_vars(), 32u);
  // 16 mixture + 16 normalization + 8 consistency rows.
  EXPECT_EQ(sys.num_rows(), 40u);
  EXPECT_NE(dump_text(sys).find("all variables >= 0"), std::string::npos);
}

TEST(BuildSystemTest, ZeroDeltaDropsIdentitySymbolsFromMixtures) {
  SplitMix64 rng{83};
  auto m = two_round(sample_mechanism(rng));
  const LpSystem sys = build_system(*m, Rat(2), Prob(Rat(0)));
  for (size_t r = 0; r < 16; ++r) {  // the mixture block comes first
    for (int q = 0; q < 2; ++q) {
      for (int a0 = 0; a0 < 2; ++a0) {
        for (int a1 = 0; a1 < 2; ++a1) {
          EXPECT_EQ(sys.coeffs[r][var_index(2, q, a0, a1)], 0);
          EXPECT_EQ(sys.coeffs[r][var_index(3, q, a0, a1)], 0);
        }
      }
    }
  }
}

TEST(BuildSystemTest, RejectsWrongShape) {
  EXPECT_THROW(build_system(*rr_pure(Rat(2)), Rat(2), Prob(Rat(0))),
               ParameterError);
}

TEST(SolveTest, PlantedPassThroughWitness) {
  // The mechanism whose first answer is approximate randomized response
  // with the identity symbols relabeled to bits, second answer constant 0.
  const Rat u(2);
  const Prob delta(Rat(1, 10));
  const Rat keep = 1 - delta.rat();
  TwoRoundParams p;
  p.p0 = Prob(delta.rat() + keep * u / (1 + u));
  p.p0p = Prob(keep / (1 + u));
  p.p00 = p.p01 = p.p10 = p.p11 = Prob(Rat(1));
  p.p00p = p.p01p = p.p10p = p.p11p = Prob(Rat(1));
  auto m = two_round(p);
  const LpSystem sys = build_system(*m, u, delta);

  // T(0)/T(1) pass their bit through with the constant second answer;
  // T(Iam0)/T(Iam1) emit (0,0)/(1,0).
  std::vector<Rat> witness(32, Rat(0));
  for (int q = 0; q < 2; ++q) {
    witness[var_index(0, q, 0, 0)] = 1;
    witness[var_index(1, q, 1, 0)] = 1;
    witness[var_index(2, q, 0, 0)] = 1;
    witness[var_index(3, q, 1, 0)] = 1;
  }
  EXPECT_TRUE(check_witness(sys, witness));

  const Feasibility feas = solve_feasibility(sys);
  ASSERT_EQ(feas.status, Feasibility::Status::kFeasible);
  EXPECT_TRUE(check_witness(sys, feas.witness));
  EXPECT_GT(feas.rank, 0u);
  EXPECT_GT(feas.rows_dropped, 0u);  // the families overlap
}

TEST(SolveTest, FeasibleAtExactPrivLoss) {
  SplitMix64 rng{89};
  for (int round = 0; round < 10; ++round) {
    const Prob delta(Rat(1, 20));
    Rat scale;
    auto m = finite_two_round(rng, delta, &scale);
    const LpSystem sys = build_system(*m, scale, delta);
    const Feasibility feas = solve_feasibility(sys);
    ASSERT_EQ(feas.status, Feasibility::Status::kFeasible);
    EXPECT_TRUE(check_witness(sys, feas.witness));
  }
}

TEST(SolveTest, InfeasibleBelowPrivLossWithValidCertificate) {
  SplitMix64 rng{97};
  int tested = 0;
  while (tested < 8) {
    const Prob delta(Rat(1, 20));
    Rat scale;
    auto m = finite_two_round(rng, delta, &scale);
    if (scale == 1) continue;
    ++tested;
    const Rat below = (1 + scale) / 2;
    const LpSystem sys = build_system(*m, below, delta);
    const Feasibility feas = solve_feasibility(sys);
    ASSERT_EQ(feas.status, Feasibility::Status::kInfeasible);
    EXPECT_TRUE(check_certificate(sys, feas.certificate));
    EXPECT_NE(feas.to_json().find("\"certificate\""), std::string::npos);
  }
}

TEST(SolveTest, FeasibilityIsMonotoneInScale) {
  SplitMix64 rng{101};
  for (int round = 0; round < 5; ++round) {
    const Prob delta(Rat(1, 20));
    Rat scale;
    auto m = finite_two_round(rng, delta, &scale);
    for (int bump = 0; bump <= 2; ++bump) {
      const Rat larger = scale + Rat(bump, 2);
      const Feasibility feas =
          solve_feasibility(build_system(*m, larger, delta));
      EXPECT_EQ(feas.status, Feasibility::Status::kFeasible)
          << "scale bump " << bump;
    }
  }
}

TEST(SolveTest, InconsistentDependentRowYieldsCertificate) {
  // x = 1 and 2x = 3 cannot both hold.
  LpSystem sys;
  sys.var_names = {"x"};
  sys.row_names = {"r0", "r1"};
  sys.coeffs = {{Rat(1)}, {Rat(2)}};
  sys.rhs = {Rat(1), Rat(3)};
  const Feasibility feas = solve_feasibility(sys);
  ASSERT_EQ(feas.status, Feasibility::Status::kInfeasible);
  EXPECT_TRUE(check_certificate(sys, feas.certificate));
}

TEST(SolveTest, NegativeRhsRowsAreOriented) {
  // -x = -2 with x >= 0 is feasible at x = 2.
  LpSystem sys;
  sys.var_names = {"x"};
  sys.row_names = {"r0"};
  sys.coeffs = {{Rat(-1)}};
  sys.rhs = {Rat(-2)};
  const Feasibility feas = solve_feasibility(sys);
  ASSERT_EQ(feas.status, Feasibility::Status::kFeasible);
  EXPECT_EQ(feas.witness[0], 2);
}

TEST(SolveTest, DegenerateSystemTerminates) {
  // Highly degenerate: several identical rows plus zero right sides.
  LpSystem sys;
  sys.var_names = {"x", "y", "z"};
  for (int i = 0; i < 4; ++i) {
    sys.row_names.push_back("dup" + std::to_string(i));
    sys.coeffs.push_back({Rat(1), Rat(-1), Rat(0)});
    sys.rhs.push_back(Rat(0));
  }
  sys.row_names.push_back("last");
  sys.coeffs.push_back({Rat(1), Rat(1), Rat(1)});
  sys.rhs.push_back(Rat(1));
  const Feasibility feas = solve_feasibility(sys);
  ASSERT_EQ(feas.status, Feasibility::Status::kFeasible);
  EXPECT_TRUE(check_witness(sys, feas.witness));
  EXPECT_EQ(feas.rows_dropped, 3u);
}

}  // namespace
}  // namespace ccdp
