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

#include "ccdp/prob.h"

#include <algorithm>
#include <unordered_set>

#include "ccdp/errors.h"

namespace ccdp {

FiniteDist::FiniteDist(std::vector<std::string> outcomes,
                       std::vector<Rat> masses)
    : outcomes_(std::move(outcomes)), masses_(std::move(masses)) {
  if (outcomes_.size() != masses_.size()) {
    throw InvariantViolation("distribution outcome/mass length mismatch");
  }
  if (outcomes_.empty()) {
    throw InvariantViolation("empty distribution support");
  }
  std::unordered_set<std::string> seen;
  Rat total = 0;
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (!seen.insert(outcomes_[i]).second) {
      throw InvariantViolation("duplicate outcome '" + outcomes_[i] + "'");
    }
    if (masses_[i] < 0 || masses_[i] > 1) {
      throw InvariantViolation("mass of '" + outcomes_[i] +
                               "' out of [0,1]: " + format_rat(masses_[i]));
    }
    total += masses_[i];
  }
  if (total != 1) {
    throw InvariantViolation("distribution sums to " + format_rat(total) +
                             ", not 1");
  }
}

FiniteDist FiniteDist::point_mass(std::string outcome) {
  return FiniteDist({std::move(outcome)}, {Rat(1)});
}

FiniteDist FiniteDist::from_map(const std::map<std::string, Rat>& mass) {
  std::vector<std::string> outcomes;
  std::vector<Rat> masses;
  outcomes.reserve(mass.size());
  masses.reserve(mass.size());
  for (const auto& [k, v] : mass) {
    outcomes.push_back(k);
    masses.push_back(v);
  }
  return FiniteDist(std::move(outcomes), std::move(masses));
}

Rat FiniteDist::mass_of(const std::string& outcome) const {
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == outcome) return masses_[i];
  }
  return Rat(0);
}

namespace {

void require_same_support(const FiniteDist& p, const FiniteDist& q) {
  if (!p.same_support(q)) {
    throw SupportMismatch("distributions have different supports");
  }
}

void require_scale(const Rat& scale) {
  if (scale < 1) {
    throw ParameterError("scale must be >= 1, got " + format_rat(scale));
  }
}

}  // namespace

Rat hockey_stick_pairs(const std::vector<std::pair<Rat, Rat>>& pq,
                       const Rat& scale) {
  Rat total = 0;
  for (const auto& [p, q] : pq) {
    Rat gap = p - scale * q;
    if (gap > 0) total += gap;
  }
  return total;
}

Rat hockey_stick(const FiniteDist& p, const FiniteDist& q, const Rat& scale) {
  require_same_support(p, q);
  require_scale(scale);
  Rat total = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    Rat gap = p.mass(i) - scale * q.mass(i);
    if (gap > 0) total += gap;
  }
  return total;
}

bool indistinguishable(const FiniteDist& p, const FiniteDist& q,
                       const PrivacyParams& params) {
  return hockey_stick(p, q, params.scale) <= params.delta.rat() &&
         hockey_stick(q, p, params.scale) <= params.delta.rat();
}

Rat min_scale_one_direction(const std::vector<std::pair<Rat, Rat>>& pq,
                            const Rat& delta) {
  if (delta < 0 || delta >= 1) {
    throw ParameterError("delta must be in [0,1), got " + format_rat(delta));
  }
  // residual: p-mass on outcomes where q = 0, present at every scale.
  Rat residual = 0;
  // For q > 0 the term max(p - u q, 0) vanishes once u >= p/q; collect the
  // ratio breakpoints with their class masses.
  struct Piece {
    Rat ratio;
    Rat p;
    Rat q;
  };
  std::vector<Piece> pieces;
  for (const auto& [p, q] : pq) {
    if (p == 0) continue;
    if (q == 0) {
      residual += p;
    } else {
      pieces.push_back({Rat(p / q), p, q});
    }
  }
  if (residual > delta) {
    throw UnboundedEpsilon("mass " + format_rat(residual) +
                           " sits where the other distribution is zero, "
                           "exceeding delta " +
                           format_rat(delta));
  }
  // Divergence at u = 1.
  Rat at_one = residual;
  for (const auto& piece : pieces) {
    Rat gap = piece.p - piece.q;
    if (gap > 0) at_one += gap;
  }
  if (at_one <= delta) return Rat(1);

  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.ratio > b.ratio; });

  // Walk pieces in decreasing u. On [lo_j, r_j] the divergence is
  // residual + P_j - u Q_j with P_j, Q_j the sums over ratios >= r_j; it is
  // continuous, nonincreasing, and equals residual at u = r_1.
  Rat prefix_p = 0, prefix_q = 0;
  for (size_t j = 0; j < pieces.size(); ++j) {
    // Merge equal-ratio classes.
    prefix_p += pieces[j].p;
    prefix_q += pieces[j].q;
    while (j + 1 < pieces.size() && pieces[j + 1].ratio == pieces[j].ratio) {
      ++j;
      prefix_p += pieces[j].p;
      prefix_q += pieces[j].q;
    }
    Rat lo = (j + 1 < pieces.size()) ? pieces[j + 1].ratio : Rat(1);
    if (lo < 1) lo = 1;
    Rat div_at_lo = residual + prefix_p - lo * prefix_q;
    if (div_at_lo > delta) {
      // The threshold sits inside this piece.
      return Rat((residual + prefix_p - delta) / prefix_q);
    }
    if (lo == 1) break;
  }
  // Unreachable when div(1) > delta, by continuity.
  return Rat(1);
}

Rat min_scale_pairs(const std::vector<std::pair<Rat, Rat>>& pq,
                    const Rat& delta) {
  Rat forward = min_scale_one_direction(pq, delta);
  std::vector<std::pair<Rat, Rat>> qp;
  qp.reserve(pq.size());
  for (const auto& [p, q] : pq) qp.emplace_back(q, p);
  Rat backward = min_scale_one_direction(qp, delta);
  return std::max(forward, backward);
}

Rat min_scale_for_delta(const FiniteDist& p, const FiniteDist& q,
                        const Prob& delta) {
  require_same_support(p, q);
  if (delta.is_one()) {
    throw ParameterError("delta must be < 1");
  }
  std::vector<std::pair<Rat, Rat>> pq;
  pq.reserve(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    pq.emplace_back(p.mass(i), q.mass(i));
  }
  return min_scale_pairs(pq, delta.rat());
}

}  // namespace ccdp
