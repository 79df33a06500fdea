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

#include "ccdp/experiments.h"

#include <chrono>
#include <cstdio>

#include "ccdp/adversary.h"
#include "ccdp/errors.h"
#include "ccdp/lp.h"
#include "json.hpp"

namespace ccdp {

uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t SplitMix64::next_below(uint64_t bound) {
  // Smallest power-of-two mask covering `bound`, then rejection.
  uint64_t mask = bound;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  uint64_t value;
  do {
    value = next() & mask;
  } while (value > bound);
  return value;
}

uint64_t trial_seed(uint64_t seed, uint64_t index) {
  SplitMix64 mixer{seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL)};
  return mixer.next();
}

namespace {

constexpr uint64_t kDyadicDenominator = 1u << 16;

Prob dyadic_draw(SplitMix64& rng) {
  return Prob(Rat(Int(rng.next_below(kDyadicDenominator)),
                  Int(kDyadicDenominator)));
}

}  // namespace

TwoRoundParams sample_mechanism(SplitMix64& rng) {
  TwoRoundParams p;
  p.p0 = dyadic_draw(rng);
  p.p00 = dyadic_draw(rng);
  p.p01 = dyadic_draw(rng);
  p.p10 = dyadic_draw(rng);
  p.p11 = dyadic_draw(rng);
  p.p0p = dyadic_draw(rng);
  p.p00p = dyadic_draw(rng);
  p.p01p = dyadic_draw(rng);
  p.p10p = dyadic_draw(rng);
  p.p11p = dyadic_draw(rng);
  return p;
}

RrFeasibilityResult run_rr_feasibility(const RrFeasibilityOptions& options) {
  RrFeasibilityResult result;
  result.summary.delta = options.delta;
  result.summary.seed = options.seed;
  result.summary.trials = options.trials;
  result.records.reserve(options.trials);
  for (uint64_t index = 0; index < options.trials; ++index) {
    const auto start = std::chrono::steady_clock::now();
    SplitMix64 rng{trial_seed(options.seed, index)};
    TrialRecord record;
    record.index = index;
    record.params = sample_mechanism(rng);
    record.delta = options.delta;
    const auto mechanism = two_round(record.params);
    try {
      Rat scale = priv_loss(*mechanism, options.delta).scale;
      if (options.shrink_scale) scale = (1 + scale) / 2;
      record.scale = scale;
      record.eps = log_rat(scale);
      LpSystem sys = build_system(*mechanism, scale, options.delta);
      Feasibility feas = solve_feasibility(sys);
      if (feas.status == Feasibility::Status::kFeasible) {
        if (!check_witness(sys, feas.witness)) {
          throw InvariantViolation("trial " + std::to_string(index) +
                                   ": witness failed exact re-validation");
        }
        record.status = TrialRecord::Status::kFeasible;
        ++result.summary.feasible;
      } else {
        if (!check_certificate(sys, feas.certificate)) {
          throw InvariantViolation("trial " + std::to_string(index) +
                                   ": certificate failed exact re-validation");
        }
        record.status = TrialRecord::Status::kInfeasible;
        ++result.summary.infeasible;
      }
    } catch (const UnboundedEpsilon&) {
      record.status = TrialRecord::Status::kUnboundedEps;
      record.scale = 0;
      record.eps = 0;
      ++result.summary.unbounded_eps;
    }
    record.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count();
    result.records.push_back(std::move(record));
  }
  return result;
}

namespace {

const char* status_name(TrialRecord::Status s) {
  switch (s) {
    case TrialRecord::Status::kFeasible:
      return "feasible";
    case TrialRecord::Status::kInfeasible:
      return "infeasible";
    case TrialRecord::Status::kUnboundedEps:
      return "unbounded_eps";
  }
  return "unknown";
}

}  // namespace

std::string trials_to_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "index,p0,p00,p01,p10,p11,p0p,p00p,p01p,p10p,p11p,delta,u,eps,"
      "lp_status,runtime_ms\n";
  char buf[64];
  for (const auto& r : records) {
    out += std::to_string(r.index);
    for (const Prob* p :
         {&r.params.p0, &r.params.p00, &r.params.p01, &r.params.p10,
          &r.params.p11, &r.params.p0p, &r.params.p00p, &r.params.p01p,
          &r.params.p10p, &r.params.p11p}) {
      out += ',';
      out += p->str();
    }
    out += ',';
    out += r.delta.str();
    out += ',';
    if (r.status == TrialRecord::Status::kUnboundedEps) {
      out += "inf,inf";
    } else {
      out += format_rat(r.scale);
      std::snprintf(buf, sizeof(buf), ",%.12g", r.eps);
      out += buf;
    }
    out += ',';
    out += status_name(r.status);
    out += ',';
    out += std::to_string(r.runtime_ms);
    out += '\n';
  }
  return out;
}

std::string summary_to_json(const RrFeasibilitySummary& summary) {
  nlohmann::json j;
  j["trials"] = summary.trials;
  j["feasible"] = summary.feasible;
  j["infeasible"] = summary.infeasible;
  j["unbounded_eps"] = summary.unbounded_eps;
  j["delta"] = summary.delta.str();
  j["seed"] = summary.seed;
  return j.dump();
}

BoundComparison run_bound_comparison(double eps, int k_max, double delta_g) {
  BoundComparison out;
  out.rows = compare_curves(eps, k_max, delta_g);
  for (const auto& row : out.rows) {
    if (row.eps_optimal > row.eps_basic + 1e-12) {
      throw InvariantViolation(
          "dominance violated at k = " + std::to_string(row.k) +
          ": optimal bound exceeds the summed bound");
    }
  }
  out.csv = curves_to_csv(out.rows);
  return out;
}

}  // namespace ccdp
