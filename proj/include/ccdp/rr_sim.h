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

#ifndef CCDP_RR_SIM_H_
#define CCDP_RR_SIM_H_

#include <string>
#include <vector>

#include "ccdp/adversary.h"
#include "ccdp/mechanism.h"

namespace ccdp {

// Interactive post-processing simulator of a pure-DP mechanism from one
// randomized-response bit. The two "inputs" of the returned table are the
// conditional trees T(rr=0) and T(rr=1); its cumulative transcript laws are
//   Pr[T(0) = t] = (u P0(t) - P1(t)) / (u - 1)
// and symmetrically, where P_b are the base mechanism's transcript laws.
// Requires scale > 1 and the mechanism pure-DP at that scale on the fixed
// input pair (checked entrywise; NotDpAtScale cites the violating
// transcript). scale == 1 is the input-independent special case, where both
// trees equal the mechanism's law.
std::shared_ptr<const TableMechanism> build_simulator(const Mechanism& m,
                                                      const Rat& scale,
                                                      const Limits& limits =
                                                          {});

struct SimViolation {
  std::string adversary;   // audit form of the strategy
  std::string transcript;  // answers joined by ','
  int input;               // which input's view failed
  Rat expected;
  Rat actual;
};

struct SimulationReport {
  bool pass = false;
  unsigned long long adversaries_checked = 0;
  std::vector<SimViolation> violations;

  std::string to_json() const;
};

// Checks the defining mixture identity exactly, for every deterministic
// adversary and both inputs:
//   u/(1+u) * view(T(b)) + 1/(1+u) * view(T(1-b)) == view(M(x_b)).
SimulationReport verify_simulation(const Mechanism& m,
                                   const Mechanism& simulator,
                                   const Rat& scale,
                                   const Limits& limits = {});

struct EquivalenceReport {
  Rat left_scale;                    // PrivLoss of the concurrent composition
  Rat right_scale;                   // PrivLoss of the composed RR bits
  std::vector<Rat> component_scales;  // per-mechanism pure PrivLoss
  bool left_le_right = false;
  bool equal = false;
};

// Compares the privacy loss of the concurrent composition of pure
// mechanisms against the privacy loss of the product of randomized-response
// laws at the mechanisms' exact pure privacy losses. The left side never
// exceeds the right; equality holds when each component attains its scale.
EquivalenceReport priv_loss_equivalence_check(
    const std::vector<MechanismPtr>& ms, const Prob& delta_g,
    const Limits& limits = {});

}  // namespace ccdp

#endif  // CCDP_RR_SIM_H_
