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

#ifndef CCDP_COMPOSITION_H_
#define CCDP_COMPOSITION_H_

#include <string>
#include <vector>

#include "ccdp/mechanism.h"

namespace ccdp {

// Queries into a concurrent composition carry the target mechanism index,
// rendered "j:q".
std::string tagged_query(int index, const std::string& query);
// Splits "j:q"; throws ParseError when the prefix is not an index.
std::pair<int, std::string> parse_tagged_query(const std::string& label);

// Concurrent composition: the analyst routes each query to any component by
// tag; components use independent randomness, so transcript probabilities
// multiply across components. By default both composed inputs feed the same
// input bit to every component (composition over one dataset). `input_map`
// overrides this: input_map[j][b] is what component j sees when the composed
// input is b. Depth is the sum of component depths.
MechanismPtr concomp(std::vector<MechanismPtr> parts);
MechanismPtr concomp(std::vector<MechanismPtr> parts,
                     std::vector<std::array<int, 2>> input_map);

// Ordered concurrent composition: round i is routed to component i mod k,
// untagged. A component polled past its depth accepts only the null query
// and answers the dummy symbol (the dummy-message convention).
MechanismPtr ordered_concomp(std::vector<MechanismPtr> parts);
MechanismPtr ordered_concomp(std::vector<MechanismPtr> parts,
                             int total_rounds);

}  // namespace ccdp

#endif  // CCDP_COMPOSITION_H_
