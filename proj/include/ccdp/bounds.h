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

#ifndef CCDP_BOUNDS_H_
#define CCDP_BOUNDS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccdp/prob.h"
#include "ccdp/rational.h"

namespace ccdp {

enum class BoundTheorem {
  kBasicPure,
  kHybrid,
  kOptimalPure,
  kOptimalApproxNoninteractive,
};

const char* bound_theorem_name(BoundTheorem t);

struct BoundResult {
  BoundTheorem theorem;
  double eps_g = 0;
  Rat delta_g = 0;
  // Exact-path fields: the scale u_g = e^{eps_g} when the solve was exact.
  std::optional<Rat> scale_g;
  // Hybrid: the delta-minimizing mechanism ordering and the loose
  // k * e^{sum eps} * max delta convenience bound.
  std::optional<std::vector<int>> permutation;
  std::optional<Rat> convenience_delta;
  // The approximate optimal bound is proven for noninteractive mechanisms
  // only; interactive validity with delta_i > 0 is open.
  bool noninteractive_only = false;
};

// eps_g = sum of eps_i, delta_g = 0.
BoundResult basic_pure(const std::vector<double>& eps);

// eps_g = sum eps_i; delta_g minimized exactly over mechanism orderings by
// sorting on the cross-multiplied exchange comparator
// delta_i * (u_j - 1) >= delta_j * (u_i - 1), larger ratio first.
BoundResult hybrid_delta(const std::vector<PrivacyParams>& params);
// The minimum evaluated for one explicit ordering (test oracle hook).
Rat hybrid_delta_for_order(const std::vector<PrivacyParams>& params,
                           const std::vector<int>& order);

// The product law of independent randomized-response bits at the given
// scales: pair (P0(y), P1(y)) for each of the 2^k outcomes.
std::vector<std::pair<Rat, Rat>> rr_product_pairs(
    const std::vector<Rat>& scales);

// Least u_g >= 1 with
//   (1/prod(1+u_i)) * sum_S max(prod_{i in S} u_i - u_g prod_{i not in S}
//   u_i, 0) <= delta_target,
// solved exactly on the piecewise-linear left side. The subset enumeration
// is capped at k = 20.
Rat optimal_scale(const std::vector<Rat>& scales, const Rat& delta_target);
// Homogeneous binomial special case (k can be large).
Rat optimal_scale_homogeneous(const Rat& scale, int k,
                              const Rat& delta_target);

// Optimal composition of pure mechanisms at target delta_g.
BoundResult optimal_pure(const std::vector<Rat>& scales, const Prob& delta_g);
// Approximate variant: same left side against the target
//   1 - (1 - delta_g) / prod(1 - delta_i).
// Throws NoSolution when that target is negative.
BoundResult optimal_approx_noninteractive(
    const std::vector<PrivacyParams>& params, const Prob& delta_g);

// Floating homogeneous solver (binary search, 1e-9 on eps_g) for large k.
double optimal_eps_homogeneous(double eps, int k, double delta_g);
// Its left side at a fixed eps_g (exposed for oracle tests).
double optimal_lhs_homogeneous(double eps, int k, double eps_g);

struct CurveRow {
  int k;
  double eps_basic;
  double delta_hybrid;
  double eps_optimal;
  double delta_g;
};

// Per-k comparison of the summed bound against the optimal bound for k
// copies of an (eps, 0) mechanism at target delta_g.
std::vector<CurveRow> compare_curves(double eps, int k_max, double delta_g);
std::string curves_to_csv(const std::vector<CurveRow>& rows);

}  // namespace ccdp

#endif  // CCDP_BOUNDS_H_
