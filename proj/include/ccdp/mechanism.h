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

#ifndef CCDP_MECHANISM_H_
#define CCDP_MECHANISM_H_

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccdp/prob.h"
#include "ccdp/rational.h"

namespace ccdp {

// One exchanged round: the analyst's query and the mechanism's answer.
struct QA {
  std::string query;
  std::string answer;
};
using History = std::vector<QA>;

// The null-query extension answers the distinguished query with the fixed
// dummy answer, without advancing the wrapped mechanism.
inline constexpr const char* kNullQuery = "null";
inline constexpr const char* kNullAnswer = "bot";

// "q0,a0,q1,a1" -- the canonical history key; labels may not contain the
// delimiters ',' '|'.
std::string history_key(const History& h);
// "q0,a0,q1,a1|q" -- the branch-table key for a history plus pending query.
std::string branch_key(const History& h, const std::string& query);
void check_label(const std::string& label);

// Hard configuration limits; adversary enumeration is doubly exponential, so
// exceeding these is an error, never silent truncation.
struct Limits {
  int max_rounds = 4;
  int max_alphabet = 4;
  // Upper bound on deterministic full-depth strategies walked per call.
  unsigned long long max_adversaries = 50'000'000ULL;
  // Upper bound on reachable histories when materializing a table.
  unsigned long long max_histories = 1'000'000ULL;
};

// A bounded-round interactive mechanism over the fixed adjacent input pair
// {0, 1}. Implementations are immutable after construction and freely
// shareable. Rectangularity (both inputs expose the same query structure and
// answer supports) is an invariant of every implementation.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  // Fixed interaction depth.
  virtual int rounds() const = 0;

  // Queries acceptable after `h`; depends on the history only through its
  // routing state, never on the input bit.
  virtual std::vector<std::string> queries_at(const History& h) const = 0;

  // Conditional answer distribution for the given input at (h, query). The
  // support is the same for both inputs (zero masses recorded).
  virtual FiniteDist answers(int input, const History& h,
                             const std::string& query) const = 0;
};

using MechanismPtr = std::shared_ptr<const Mechanism>;

// The concrete transcript-tree form: per-round alphabets plus one branch
// table per input, keyed by "history|query". This is the serializable
// FiniteMechanism of the file format.
class TableMechanism final : public Mechanism {
 public:
  TableMechanism(int rounds,
                 std::vector<std::vector<std::string>> query_alphabet,
                 std::vector<std::vector<std::string>> answer_alphabet,
                 std::array<std::map<std::string, FiniteDist>, 2> branches,
                 std::array<std::string, 2> input_labels = {"x0", "x1"});

  int rounds() const override { return rounds_; }
  std::vector<std::string> queries_at(const History& h) const override;
  FiniteDist answers(int input, const History& h,
                     const std::string& query) const override;

  const std::vector<std::vector<std::string>>& query_alphabet() const {
    return query_alphabet_;
  }
  const std::vector<std::vector<std::string>>& answer_alphabet() const {
    return answer_alphabet_;
  }
  const std::map<std::string, FiniteDist>& branch(int input) const {
    return branches_[input];
  }
  const std::array<std::string, 2>& input_labels() const {
    return input_labels_;
  }

 private:
  int rounds_;
  std::vector<std::vector<std::string>> query_alphabet_;
  std::vector<std::vector<std::string>> answer_alphabet_;
  std::array<std::map<std::string, FiniteDist>, 2> branches_;
  std::array<std::string, 2> input_labels_;
};

// First-round and conditional second-round answer biases of the 2-round
// binary mechanism: p0 = Pr[a0=0 | input 0], pij = Pr[a1=0 | input 0,
// a0=i, q=j]; primed entries for input 1.
struct TwoRoundParams {
  Prob p0, p00, p01, p10, p11;
  Prob p0p, p00p, p01p, p10p, p11p;
};

// Randomized response at scale u = e^eps (u >= 1): one dummy query; on
// input b answers b w.p. u/(1+u) and the flipped bit w.p. 1/(1+u).
std::shared_ptr<const TableMechanism> rr_pure(const Rat& scale);

// Approximate randomized response over {0,1,Iam0,Iam1}: input b reveals
// itself via Iam<b> w.p. delta and otherwise runs rr_pure scaled by (1-delta).
std::shared_ptr<const TableMechanism> rr_approx(const Rat& scale,
                                                const Prob& delta);

// The 2-round binary mechanism defined by ten parameters.
std::shared_ptr<const TableMechanism> two_round(const TwoRoundParams& p);

// Null-query extension: `slots` interaction rounds during which the analyst
// may interleave the distinguished null query (answered with the dummy
// symbol, not advancing the inner history) with real queries to `base`.
MechanismPtr null_extension(MechanismPtr base, int slots);
inline MechanismPtr null_extension(MechanismPtr base) {
  return null_extension(base, base->rounds());
}

// Tabulates a mechanism into its transcript-tree form (BFS over reachable
// histories; a history is reachable when it has positive mass under at
// least one input). Enforces `limits.max_histories`.
std::shared_ptr<const TableMechanism> materialize(const Mechanism& m,
                                                  const Limits& limits = {});

// Mechanism file format, UTF-8 JSON. Round-trips bit-exactly; invariant
// violations name the offending history.
std::shared_ptr<const TableMechanism> load_mechanism(const std::string& path);
std::shared_ptr<const TableMechanism> parse_mechanism(const std::string& text);
void save_mechanism(const TableMechanism& m, const std::string& path);
std::string serialize_mechanism(const TableMechanism& m);

// True when every branch distribution is identical across the two inputs.
bool input_independent(const Mechanism& m);

}  // namespace ccdp

#endif  // CCDP_MECHANISM_H_
