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

#ifndef CCDP_EXPERIMENTS_H_
#define CCDP_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccdp/bounds.h"
#include "ccdp/mechanism.h"

namespace ccdp {

// Deterministic generator independent of the standard library's
// distribution implementations, so seeded outputs are stable across
// platforms and toolchains.
struct SplitMix64 {
  uint64_t state;
  uint64_t next();
  // Uniform over {0, ..., bound} inclusive, by rejection.
  uint64_t next_below(uint64_t bound);
};

// Stream seed for (global seed, trial index).
uint64_t trial_seed(uint64_t seed, uint64_t index);

// Ten parameters drawn independently and uniformly over the dyadic grid
// j / 2^16, j in {0, ..., 2^16}, in field order (p0, p00, p01, p10, p11,
// then the primed block).
TwoRoundParams sample_mechanism(SplitMix64& rng);

struct TrialRecord {
  uint64_t index = 0;
  TwoRoundParams params;
  Prob delta;
  enum class Status { kFeasible, kInfeasible, kUnboundedEps } status =
      Status::kUnboundedEps;
  Rat scale;       // PrivLoss as a scale (the shrunk scale in shrink mode)
  double eps = 0;  // ln(scale)
  long runtime_ms = 0;
};

struct RrFeasibilityOptions {
  uint64_t trials = 2000;
  Prob delta;
  uint64_t seed = 1;
  // Rebuild each system at (1 + u)/2 instead of the exact PrivLoss scale u;
  // trials with u > 1 must then come out infeasible.
  bool shrink_scale = false;
};

struct RrFeasibilitySummary {
  uint64_t trials = 0;
  uint64_t feasible = 0;
  uint64_t infeasible = 0;
  uint64_t unbounded_eps = 0;
  Prob delta;
  uint64_t seed = 0;
};

struct RrFeasibilityResult {
  std::vector<TrialRecord> records;
  RrFeasibilitySummary summary;
};

// The feasibility study: per trial, sample a 2-round mechanism, compute its
// exact PrivLoss at `delta` (unbounded trials recorded and skipped), build
// the feasibility system, solve, and re-validate the witness or certificate
// exactly. Fully deterministic in (seed, trials, delta); trial order does
// not affect any record.
RrFeasibilityResult run_rr_feasibility(const RrFeasibilityOptions& options);

// CSV columns: index, p0..p11' (rational strings), delta, u, eps,
// lp_status, runtime_ms.
std::string trials_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_json(const RrFeasibilitySummary& summary);

// Bound-comparison curves with the dominance check (the optimal bound never
// exceeds the summed bound).
struct BoundComparison {
  std::vector<CurveRow> rows;
  std::string csv;
};
BoundComparison run_bound_comparison(double eps, int k_max, double delta_g);

}  // namespace ccdp

#endif  // CCDP_EXPERIMENTS_H_
