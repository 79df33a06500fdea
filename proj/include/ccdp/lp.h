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

#ifndef CCDP_LP_H_
#define CCDP_LP_H_

#include <string>
#include <vector>

#include "ccdp/mechanism.h"
#include "ccdp/prob.h"

namespace ccdp {

// Equality system A x = b over nonnegative variables, with exact rational
// coefficients. For the randomized-response simulation question the 32
// variables are the cumulative transcript probabilities
// Pr[T(c, q) = (a0, a1)], c in {0, 1, Iam0, Iam1}, q, a0, a1 in {0, 1}.
struct LpSystem {
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;
  std::vector<std::vector<Rat>> coeffs;  // rows x vars
  std::vector<Rat> rhs;

  size_t num_vars() const { return var_names.size(); }
  size_t num_rows() const { return rhs.size(); }
};

// The three constraint families for a 2-round binary mechanism at (u, delta):
//  - 16 mixture equalities tying the mechanism's joint transcript law to the
//    randomized-response mixture of the T-trees,
//  - 16 normalization equalities (4 symbols x 4 deterministic adversaries),
//  - 8 first-round consistency equalities (the first answer's marginal may
//    not depend on the future query).
// Nonnegativity of all variables is implicit.
LpSystem build_system(const Mechanism& m, const Rat& scale,
                      const Prob& delta);

struct Feasibility {
  enum class Status { kFeasible, kInfeasible };
  Status status = Status::kInfeasible;
  // Exact solution over all variables when feasible.
  std::vector<Rat> witness;
  // Farkas certificate over the original rows when infeasible:
  // y^T A <= 0 componentwise and y^T b > 0.
  std::vector<Rat> certificate;
  size_t rank = 0;
  size_t rows_dropped = 0;
  unsigned long long pivots = 0;

  std::string to_json() const;
};

// Phase-1 simplex with exact rational pivots and Bland's anti-cycling rule.
// Redundant rows are removed by exact Gaussian elimination first; an
// inconsistent dependent row yields an immediate certificate.
Feasibility solve_feasibility(const LpSystem& sys);

// Exact re-validation of solver outputs against the original system.
bool check_witness(const LpSystem& sys, const std::vector<Rat>& witness);
bool check_certificate(const LpSystem& sys, const std::vector<Rat>& y);

// Plain-text rows "c1*v1 + c2*v2 + ... = rhs" for external cross-checking.
std::string dump_text(const LpSystem& sys);

}  // namespace ccdp

#endif  // CCDP_LP_H_
