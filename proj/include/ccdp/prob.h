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

#ifndef CCDP_PROB_H_
#define CCDP_PROB_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccdp/rational.h"

namespace ccdp {

// A normalized distribution over labeled outcomes. Outcomes are ordered and
// unique; zero-mass outcomes are permitted and kept, so that distributions
// produced from the same mechanism share supports structurally.
class FiniteDist {
 public:
  FiniteDist(std::vector<std::string> outcomes, std::vector<Rat> masses);
  static FiniteDist point_mass(std::string outcome);
  static FiniteDist from_map(const std::map<std::string, Rat>& mass);

  size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<Rat>& masses() const { return masses_; }
  const Rat& mass(size_t i) const { return masses_[i]; }
  // Mass of a label, 0 if absent.
  Rat mass_of(const std::string& outcome) const;

  bool same_support(const FiniteDist& other) const {
    return outcomes_ == other.outcomes_;
  }
  friend bool operator==(const FiniteDist& a, const FiniteDist& b) {
    return a.outcomes_ == b.outcomes_ && a.masses_ == b.masses_;
  }

 private:
  std::vector<std::string> outcomes_;
  std::vector<Rat> masses_;
};

// (scale, delta) privacy parameters with the multiplicative part carried as
// the exact scale u = e^eps. eps = ln u is derived for display only.
struct PrivacyParams {
  Rat scale;  // >= 1
  Prob delta;
};

// Hockey-stick divergence sum_y max(p(y) - u * q(y), 0): the least delta
// such that p(T) <= u * q(T) + delta for every event T. Requires matching
// supports and scale >= 1.
Rat hockey_stick(const FiniteDist& p, const FiniteDist& q, const Rat& scale);

// Symmetric (eps, delta)-closeness: both directed hockey-sticks <= delta.
bool indistinguishable(const FiniteDist& p, const FiniteDist& q,
                       const PrivacyParams& params);

// Least scale u >= 1 with both directed hockey-sticks <= delta, solved
// exactly on the piecewise-linear divergence (breakpoints at likelihood
// ratios). Requires delta < 1. Throws UnboundedEpsilon when one side keeps
// more than delta of mass where the other side is zero.
Rat min_scale_for_delta(const FiniteDist& p, const FiniteDist& q,
                        const Prob& delta);

// Core solvers on raw mass pairs (p_y, q_y); shared with the adversary
// evaluation loop, which works on transcript leaves directly.
Rat hockey_stick_pairs(const std::vector<std::pair<Rat, Rat>>& pq,
                       const Rat& scale);
// One direction: least u >= 1 with sum max(p - u q, 0) <= delta.
Rat min_scale_one_direction(const std::vector<std::pair<Rat, Rat>>& pq,
                            const Rat& delta);
// Both directions (swaps each pair for the reverse).
Rat min_scale_pairs(const std::vector<std::pair<Rat, Rat>>& pq,
                    const Rat& delta);

}  // namespace ccdp

#endif  // CCDP_PROB_H_
