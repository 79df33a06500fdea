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

#ifndef CCDP_ADVERSARY_H_
#define CCDP_ADVERSARY_H_

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccdp/mechanism.h"
#include "ccdp/prob.h"

namespace ccdp {

// A deterministic query policy: answer-history key ("a0,a1,...", "" at the
// root) to the next query. Total over reachable answer histories up to
// `depth`.
struct AdversaryStrategy {
  int depth = 0;
  std::map<std::string, std::string> policy;

  const std::string& query_for(const std::string& answer_key) const;
  // Audit form: {"<answer-history>": "<query>"}.
  std::string to_json() const;
};

// A query policy as a function of the answers received so far. Returning
// kHalt ends the interaction early (remaining rounds unasked).
inline constexpr const char* kHalt = "";
using QueryFn =
    std::function<std::string(const std::vector<std::string>& answers)>;

// One full transcript with its probability under each input.
struct ViewLeaf {
  std::string label;  // answers joined by ','
  Rat p0;
  Rat p1;
};

// Views of both inputs over a shared transcript support (transcripts with
// positive mass under at least one input, in tree order).
struct ViewPair {
  FiniteDist v0;
  FiniteDist v1;
};

std::vector<ViewLeaf> collect_leaves(const Mechanism& m, const QueryFn& policy,
                                     int depth);
ViewPair view_pair(const Mechanism& m, const AdversaryStrategy& a);
ViewPair view_pair(const Mechanism& m, const QueryFn& policy, int depth);
FiniteDist view_dist(const Mechanism& m, const AdversaryStrategy& a,
                     int input);

// Number of deterministic full-depth strategies against m (product over the
// reachable answer-history tree of the per-node query counts).
Int count_adversaries(const Mechanism& m);

// Streams every deterministic full-depth strategy, with the transcript
// leaves it induces, in a fixed DFS order. The callback returns false to
// stop. Throws LimitExceeded past limits.max_adversaries.
void for_each_adversary(
    const Mechanism& m,
    const std::function<bool(const AdversaryStrategy&,
                             const std::vector<ViewLeaf>&)>& fn,
    const Limits& limits = {});

// Materialized complete, duplicate-free enumeration.
std::vector<AdversaryStrategy> enumerate_adversaries(const Mechanism& m,
                                                     const Limits& limits = {});

struct PrivLossResult {
  Rat scale;          // exact least u = e^eps
  double eps;         // ln(scale), display only
  unsigned long long adversaries = 0;
};

// True privacy loss: the least scale u such that every deterministic
// adversary's view pair is (ln u, delta)-indistinguishable, i.e. the exact
// maximum over adversaries and both ordered input pairs of the piecewise
// inversion. Throws UnboundedEpsilon when some adversary separates supports
// beyond delta.
PrivLossResult priv_loss(const Mechanism& m, const Prob& delta,
                         const Limits& limits = {});

}  // namespace ccdp

#endif  // CCDP_ADVERSARY_H_
