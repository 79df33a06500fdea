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

#include "ccdp/mechanism.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "ccdp/errors.h"
#include "json.hpp"

namespace ccdp {

void check_label(const std::string& label) {
  if (label.empty()) {
    throw InvariantViolation("empty label");
  }
  if (label.find(',') != std::string::npos ||
      label.find('|') != std::string::npos) {
    throw InvariantViolation("label '" + label +
                             "' contains a reserved delimiter");
  }
}

std::string history_key(const History& h) {
  std::string key;
  for (size_t i = 0; i < h.size(); ++i) {
    if (i > 0) key += ',';
    key += h[i].query;
    key += ',';
    key += h[i].answer;
  }
  return key;
}

std::string branch_key(const History& h, const std::string& query) {
  return history_key(h) + "|" + query;
}

namespace {

// Splits "q0,a0,q1,a1|q" back into a history and query.
std::pair<History, std::string> parse_branch_key(const std::string& key) {
  const size_t bar = key.rfind('|');
  if (bar == std::string::npos) {
    throw ParseError("branch key '" + key + "' lacks the '|' separator");
  }
  const std::string hist = key.substr(0, bar);
  const std::string query = key.substr(bar + 1);
  History h;
  if (!hist.empty()) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
      size_t comma = hist.find(',', start);
      if (comma == std::string::npos) {
        parts.push_back(hist.substr(start));
        break;
      }
      parts.push_back(hist.substr(start, comma - start));
      start = comma + 1;
    }
    if (parts.size() % 2 != 0) {
      throw ParseError("branch key '" + key +
                       "' has an odd number of history labels");
    }
    for (size_t i = 0; i < parts.size(); i += 2) {
      h.push_back({parts[i], parts[i + 1]});
    }
  }
  return {std::move(h), query};
}

}  // namespace

TableMechanism::TableMechanism(
    int rounds, std::vector<std::vector<std::string>> query_alphabet,
    std::vector<std::vector<std::string>> answer_alphabet,
    std::array<std::map<std::string, FiniteDist>, 2> branches,
    std::array<std::string, 2> input_labels)
    : rounds_(rounds),
      query_alphabet_(std::move(query_alphabet)),
      answer_alphabet_(std::move(answer_alphabet)),
      branches_(std::move(branches)),
      input_labels_(std::move(input_labels)) {
  if (rounds_ <= 0) {
    throw InvariantViolation("mechanism must have at least one round");
  }
  if (query_alphabet_.size() != static_cast<size_t>(rounds_) ||
      answer_alphabet_.size() != static_cast<size_t>(rounds_)) {
    throw InvariantViolation("alphabet list length does not match rounds");
  }
  for (int r = 0; r < rounds_; ++r) {
    if (query_alphabet_[r].empty() || answer_alphabet_[r].empty()) {
      throw InvariantViolation("empty alphabet at round " + std::to_string(r));
    }
    for (const auto& q : query_alphabet_[r]) check_label(q);
    for (const auto& a : answer_alphabet_[r]) check_label(a);
  }
  // Rectangularity: both inputs define exactly the same branch keys.
  if (branches_[0].size() != branches_[1].size()) {
    throw InvariantViolation("ragged mechanism: branch tables differ in size");
  }
  for (const auto& [key, dist0] : branches_[0]) {
    auto it = branches_[1].find(key);
    if (it == branches_[1].end()) {
      throw InvariantViolation("ragged mechanism: '" + key +
                               "' defined for one input only");
    }
    if (!dist0.same_support(it->second)) {
      throw InvariantViolation("ragged mechanism: supports differ at '" + key +
                               "'");
    }
    // Well-typedness of key and support against the per-round alphabets.
    auto [h, query] = parse_branch_key(key);
    if (h.size() >= static_cast<size_t>(rounds_)) {
      throw InvariantViolation("history '" + key + "' exceeds " +
                               std::to_string(rounds_) + " rounds");
    }
    for (size_t d = 0; d < h.size(); ++d) {
      const auto& qs = query_alphabet_[d];
      const auto& as = answer_alphabet_[d];
      if (std::find(qs.begin(), qs.end(), h[d].query) == qs.end()) {
        throw InvariantViolation("query '" + h[d].query + "' at depth " +
                                 std::to_string(d) + " not in alphabet ('" +
                                 key + "')");
      }
      if (std::find(as.begin(), as.end(), h[d].answer) == as.end()) {
        throw InvariantViolation("answer '" + h[d].answer + "' at depth " +
                                 std::to_string(d) + " not in alphabet ('" +
                                 key + "')");
      }
    }
    const auto& qs = query_alphabet_[h.size()];
    if (std::find(qs.begin(), qs.end(), query) == qs.end()) {
      throw InvariantViolation("query '" + query + "' at depth " +
                               std::to_string(h.size()) +
                               " not in alphabet ('" + key + "')");
    }
    const auto& as = answer_alphabet_[h.size()];
    for (const auto& a : dist0.outcomes()) {
      if (std::find(as.begin(), as.end(), a) == as.end()) {
        throw InvariantViolation("answer '" + a + "' at depth " +
                                 std::to_string(h.size()) +
                                 " not in alphabet ('" + key + "')");
      }
    }
  }
  if (branches_[0].empty()) {
    throw InvariantViolation("mechanism has no branches");
  }
  // Branch totality: every reachable history short of full depth offers at
  // least one query.
  std::deque<History> frontier;
  frontier.push_back({});
  unsigned long long visited = 0;
  while (!frontier.empty()) {
    History h = std::move(frontier.front());
    frontier.pop_front();
    if (++visited > 4'000'000ULL) {
      throw LimitExceeded("mechanism reachable tree too large to validate");
    }
    if (static_cast<int>(h.size()) == rounds_) continue;
    const auto queries = queries_at(h);
    if (queries.empty()) {
      throw InvariantViolation("no branch defined at reachable history '" +
                               history_key(h) + "'");
    }
    for (const auto& q : queries) {
      const FiniteDist& d0 = branches_[0].at(branch_key(h, q));
      const FiniteDist& d1 = branches_[1].at(branch_key(h, q));
      for (size_t i = 0; i < d0.size(); ++i) {
        if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
        History child = h;
        child.push_back({q, d0.outcomes()[i]});
        frontier.push_back(std::move(child));
      }
    }
  }
}

std::vector<std::string> TableMechanism::queries_at(const History& h) const {
  const std::string prefix = history_key(h) + "|";
  std::vector<std::string> queries;
  for (auto it = branches_[0].lower_bound(prefix);
       it != branches_[0].end() && it->first.compare(0, prefix.size(),
                                                     prefix) == 0;
       ++it) {
    // Keys of deeper histories share no prefix with "hist|": '|' occurs only
    // before the final query, so this range is exactly the queries at h.
    queries.push_back(it->first.substr(prefix.size()));
  }
  return queries;
}

FiniteDist TableMechanism::answers(int input, const History& h,
                                   const std::string& query) const {
  const std::string key = branch_key(h, query);
  auto it = branches_[input].find(key);
  if (it == branches_[input].end()) {
    throw ParameterError("no branch at '" + key + "'");
  }
  return it->second;
}

namespace {

FiniteDist bit_dist(const Prob& p_zero) {
  return FiniteDist({"0", "1"}, {p_zero.rat(), Rat(1) - p_zero.rat()});
}

}  // namespace

std::shared_ptr<const TableMechanism> rr_pure(const Rat& scale) {
  if (scale < 1) {
    throw ParameterError("randomized-response scale must be >= 1, got " +
                         format_rat(scale));
  }
  const Rat truthful = scale / (1 + scale);
  const Rat lying = 1 / (1 + scale);
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  branches[0].emplace("|q", FiniteDist({"0", "1"}, {truthful, lying}));
  branches[1].emplace("|q", FiniteDist({"0", "1"}, {lying, truthful}));
  return std::make_shared<TableMechanism>(
      1, std::vector<std::vector<std::string>>{{"q"}},
      std::vector<std::vector<std::string>>{{"0", "1"}}, std::move(branches));
}

std::shared_ptr<const TableMechanism> rr_approx(const Rat& scale,
                                                const Prob& delta) {
  if (scale < 1) {
    throw ParameterError("randomized-response scale must be >= 1, got " +
                         format_rat(scale));
  }
  if (delta.is_one()) {
    throw ParameterError("randomized-response delta must be < 1");
  }
  const Rat keep = 1 - delta.rat();
  const Rat truthful = keep * scale / (1 + scale);
  const Rat lying = keep / (1 + scale);
  const std::vector<std::string> outcomes = {"0", "1", "Iam0", "Iam1"};
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  branches[0].emplace(
      "|q", FiniteDist(outcomes, {truthful, lying, delta.rat(), Rat(0)}));
  branches[1].emplace(
      "|q", FiniteDist(outcomes, {lying, truthful, Rat(0), delta.rat()}));
  return std::make_shared<TableMechanism>(
      1, std::vector<std::vector<std::string>>{{"q"}},
      std::vector<std::vector<std::string>>{outcomes}, std::move(branches));
}

std::shared_ptr<const TableMechanism> two_round(const TwoRoundParams& p) {
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  branches[0].emplace("|q", bit_dist(p.p0));
  branches[1].emplace("|q", bit_dist(p.p0p));
  const std::array<std::array<Prob, 2>, 2> second = {{{p.p00, p.p01},
                                                      {p.p10, p.p11}}};
  const std::array<std::array<Prob, 2>, 2> second_p = {{{p.p00p, p.p01p},
                                                        {p.p10p, p.p11p}}};
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int q = 0; q < 2; ++q) {
      const std::string key =
          "q," + std::to_string(a0) + "|" + std::to_string(q);
      branches[0].emplace(key, bit_dist(second[a0][q]));
      branches[1].emplace(key, bit_dist(second_p[a0][q]));
    }
  }
  return std::make_shared<TableMechanism>(
      2, std::vector<std::vector<std::string>>{{"q"}, {"0", "1"}},
      std::vector<std::vector<std::string>>{{"0", "1"}, {"0", "1"}},
      std::move(branches));
}

namespace {

class NullExtension final : public Mechanism {
 public:
  NullExtension(MechanismPtr base, int slots)
      : base_(std::move(base)), slots_(slots) {
    if (slots_ <= 0) {
      throw ParameterError("null extension needs at least one slot");
    }
  }

  int rounds() const override { return slots_; }

  std::vector<std::string> queries_at(const History& h) const override {
    History inner = strip_nulls(h);
    std::vector<std::string> queries = {kNullQuery};
    if (static_cast<int>(inner.size()) < base_->rounds()) {
      for (auto& q : base_->queries_at(inner)) {
        queries.push_back(std::move(q));
      }
    }
    return queries;
  }

  FiniteDist answers(int input, const History& h,
                     const std::string& query) const override {
    if (query == kNullQuery) {
      return FiniteDist::point_mass(kNullAnswer);
    }
    return base_->answers(input, strip_nulls(h), query);
  }

 private:
  History strip_nulls(const History& h) const {
    History inner;
    for (const auto& qa : h) {
      if (qa.query != kNullQuery) inner.push_back(qa);
    }
    return inner;
  }

  MechanismPtr base_;
  int slots_;
};

}  // namespace

MechanismPtr null_extension(MechanismPtr base, int slots) {
  return std::make_shared<NullExtension>(std::move(base), slots);
}

std::shared_ptr<const TableMechanism> materialize(const Mechanism& m,
                                                  const Limits& limits) {
  const int rounds = m.rounds();
  std::vector<std::set<std::string>> query_sets(rounds), answer_sets(rounds);
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  std::deque<History> frontier;
  frontier.push_back({});
  unsigned long long visited = 0;
  while (!frontier.empty()) {
    History h = std::move(frontier.front());
    frontier.pop_front();
    if (++visited > limits.max_histories) {
      throw LimitExceeded("materialization exceeds " +
                          std::to_string(limits.max_histories) +
                          " reachable histories");
    }
    const int depth = static_cast<int>(h.size());
    if (depth == rounds) continue;
    for (const auto& q : m.queries_at(h)) {
      FiniteDist d0 = m.answers(0, h, q);
      FiniteDist d1 = m.answers(1, h, q);
      if (!d0.same_support(d1)) {
        throw InvariantViolation("ragged supports at '" + branch_key(h, q) +
                                 "'");
      }
      query_sets[depth].insert(q);
      for (const auto& a : d0.outcomes()) answer_sets[depth].insert(a);
      for (size_t i = 0; i < d0.size(); ++i) {
        if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
        History child = h;
        child.push_back({q, d0.outcomes()[i]});
        frontier.push_back(std::move(child));
      }
      const std::string key = branch_key(h, q);
      branches[0].emplace(key, std::move(d0));
      branches[1].emplace(key, std::move(d1));
    }
  }
  std::vector<std::vector<std::string>> query_alphabet, answer_alphabet;
  for (int r = 0; r < rounds; ++r) {
    if (static_cast<int>(query_sets[r].size()) > limits.max_alphabet ||
        static_cast<int>(answer_sets[r].size()) > limits.max_alphabet) {
      throw LimitExceeded("alphabet at round " + std::to_string(r) +
                          " exceeds limit " +
                          std::to_string(limits.max_alphabet));
    }
    query_alphabet.emplace_back(query_sets[r].begin(), query_sets[r].end());
    answer_alphabet.emplace_back(answer_sets[r].begin(), answer_sets[r].end());
  }
  return std::make_shared<TableMechanism>(rounds, std::move(query_alphabet),
                                          std::move(answer_alphabet),
                                          std::move(branches));
}

bool input_independent(const Mechanism& m) {
  std::deque<History> frontier;
  frontier.push_back({});
  while (!frontier.empty()) {
    History h = std::move(frontier.front());
    frontier.pop_front();
    if (static_cast<int>(h.size()) == m.rounds()) continue;
    for (const auto& q : m.queries_at(h)) {
      FiniteDist d0 = m.answers(0, h, q);
      FiniteDist d1 = m.answers(1, h, q);
      if (!(d0 == d1)) return false;
      for (size_t i = 0; i < d0.size(); ++i) {
        if (d0.mass(i) == 0) continue;
        History child = h;
        child.push_back({q, d0.outcomes()[i]});
        frontier.push_back(std::move(child));
      }
    }
  }
  return true;
}

namespace {

using nlohmann::json;

json alphabet_to_json(const std::vector<std::vector<std::string>>& alphabet) {
  json out = json::array();
  for (const auto& round : alphabet) out.push_back(round);
  return out;
}

std::vector<std::vector<std::string>> alphabet_from_json(const json& j,
                                                         const char* field) {
  if (!j.is_array()) {
    throw ParseError(std::string("'") + field + "' must be an array");
  }
  std::vector<std::vector<std::string>> alphabet;
  for (const auto& round : j) {
    if (!round.is_array()) {
      throw ParseError(std::string("'") + field +
                       "' entries must be arrays of labels");
    }
    std::vector<std::string> labels;
    for (const auto& label : round) {
      if (!label.is_string()) {
        throw ParseError(std::string("labels in '") + field +
                         "' must be strings");
      }
      labels.push_back(label.get<std::string>());
    }
    alphabet.push_back(std::move(labels));
  }
  return alphabet;
}

}  // namespace

std::string serialize_mechanism(const TableMechanism& m) {
  json j;
  j["version"] = 1;
  j["rounds"] = m.rounds();
  j["query_alphabet"] = alphabet_to_json(m.query_alphabet());
  j["answer_alphabet"] = alphabet_to_json(m.answer_alphabet());
  json branches = json::object();
  for (int b = 0; b < 2; ++b) {
    json table = json::object();
    for (const auto& [key, dist] : m.branch(b)) {
      json row = json::object();
      for (size_t i = 0; i < dist.size(); ++i) {
        row[dist.outcomes()[i]] = format_rat(dist.mass(i));
      }
      table[key] = std::move(row);
    }
    branches[m.input_labels()[b]] = std::move(table);
  }
  j["branches"] = std::move(branches);
  return j.dump(2) + "\n";
}

std::shared_ptr<const TableMechanism> parse_mechanism(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("mechanism file is not valid JSON: ") +
                     e.what());
  }
  if (!j.is_object()) throw ParseError("mechanism file must be a JSON object");
  if (!j.contains("version") || j["version"] != 1) {
    throw ParseError("unsupported mechanism file version");
  }
  if (!j.contains("rounds") || !j["rounds"].is_number_integer()) {
    throw ParseError("'rounds' must be an integer");
  }
  const int rounds = j["rounds"].get<int>();
  auto query_alphabet = alphabet_from_json(j.at("query_alphabet"),
                                           "query_alphabet");
  auto answer_alphabet = alphabet_from_json(j.at("answer_alphabet"),
                                            "answer_alphabet");
  if (!j.contains("branches") || !j["branches"].is_object()) {
    throw ParseError("'branches' must be an object");
  }
  const json& btab = j["branches"];
  std::array<std::string, 2> input_labels;
  if (btab.contains("x0") && btab.contains("x1")) {
    input_labels = {"x0", "x1"};
  } else if (btab.contains("rr0") && btab.contains("rr1")) {
    input_labels = {"rr0", "rr1"};
  } else {
    throw ParseError("'branches' must hold inputs x0/x1 (or rr0/rr1)");
  }
  std::array<std::map<std::string, FiniteDist>, 2> branches;
  for (int b = 0; b < 2; ++b) {
    const json& table = btab.at(input_labels[b]);
    if (!table.is_object()) {
      throw ParseError("branch table for " + input_labels[b] +
                       " must be an object");
    }
    for (const auto& [key, row] : table.items()) {
      if (!row.is_object()) {
        throw ParseError("branch '" + key + "' must map answers to rationals");
      }
      std::vector<std::string> outcomes;
      std::vector<Rat> masses;
      for (const auto& [answer, value] : row.items()) {
        if (!value.is_string()) {
          throw ParseError("probability at '" + key + "' / '" + answer +
                           "' must be a rational string");
        }
        Rat mass = parse_rat(value.get<std::string>(),
                             "branch '" + key + "', answer '" + answer + "'");
        if (mass < 0 || mass > 1) {
          throw InvariantViolation("probability " + value.get<std::string>() +
                                   " out of [0,1] at branch '" + key +
                                   "', answer '" + answer + "'");
        }
        outcomes.push_back(answer);
        masses.push_back(std::move(mass));
      }
      Rat total = 0;
      for (const Rat& mass : masses) total += mass;
      if (total != 1) {
        throw InvariantViolation("branch '" + key + "' of input " +
                                 input_labels[b] + " sums to " +
                                 format_rat(total) + ", not 1");
      }
      // Order the support as listed in the per-round answer alphabet.
      auto [h, query] = parse_branch_key(key);
      (void)query;
      if (h.size() >= static_cast<size_t>(rounds) ||
          h.size() >= answer_alphabet.size()) {
        throw InvariantViolation("history '" + key + "' exceeds " +
                                 std::to_string(rounds) + " rounds");
      }
      const auto& round_answers = answer_alphabet[h.size()];
      std::vector<std::string> ordered;
      std::vector<Rat> ordered_masses;
      for (const auto& a : round_answers) {
        for (size_t i = 0; i < outcomes.size(); ++i) {
          if (outcomes[i] == a) {
            ordered.push_back(a);
            ordered_masses.push_back(masses[i]);
          }
        }
      }
      if (ordered.size() != outcomes.size()) {
        throw InvariantViolation("branch '" + key +
                                 "' uses answers outside the round alphabet");
      }
      branches[b].emplace(key,
                          FiniteDist(std::move(ordered),
                                     std::move(ordered_masses)));
    }
  }
  return std::make_shared<TableMechanism>(rounds, std::move(query_alphabet),
                                          std::move(answer_alphabet),
                                          std::move(branches), input_labels);
}

std::shared_ptr<const TableMechanism> load_mechanism(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open mechanism file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mechanism(buf.str());
}

void save_mechanism(const TableMechanism& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write mechanism file '" + path + "'");
  out << serialize_mechanism(m);
}

}  // namespace ccdp
