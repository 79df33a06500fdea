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

#include "ccdp/rr_sim.h"

#include <deque>
#include <map>

#include "ccdp/bounds.h"
#include "ccdp/composition.h"
#include "ccdp/errors.h"
#include "json.hpp"

namespace ccdp {

std::shared_ptr<const TableMechanism> build_simulator(const Mechanism& m,
                                                      const Rat& scale,
                                                      const Limits& limits) {
  if (scale < 1) {
    throw ParameterError("simulator scale must be >= 1, got " +
                         format_rat(scale));
  }
  auto table = materialize(m, limits);
  if (scale == 1) {
    // Dividing by scale - 1 is impossible; a mechanism that is pure-DP at
    // scale 1 is input-independent, and the identity pair simulates it.
    if (!input_independent(*table)) {
      throw NotDpAtScale("scale 1 requires an input-independent mechanism");
    }
    std::array<std::map<std::string, FiniteDist>, 2> branches = {
        table->branch(0), table->branch(0)};
    return std::make_shared<TableMechanism>(
        table->rounds(), table->query_alphabet(), table->answer_alphabet(),
        std::move(branches), std::array<std::string, 2>{"rr0", "rr1"});
  }

  std::array<std::map<std::string, FiniteDist>, 2> sim;
  struct Node {
    History h;
    Rat p0, p1;  // cumulative transcript mass under each base input
  };
  std::deque<Node> frontier;
  frontier.push_back({History{}, Rat(1), Rat(1)});
  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    if (static_cast<int>(node.h.size()) == table->rounds()) continue;
    const Rat den0 = scale * node.p0 - node.p1;
    const Rat den1 = scale * node.p1 - node.p0;
    for (const auto& q : table->queries_at(node.h)) {
      const FiniteDist d0 = table->answers(0, node.h, q);
      const FiniteDist d1 = table->answers(1, node.h, q);
      const size_t n = d0.size();
      std::vector<Rat> cond0(n), cond1(n);
      for (size_t i = 0; i < n; ++i) {
        const Rat c0 = node.p0 * d0.mass(i);
        const Rat c1 = node.p1 * d1.mass(i);
        const Rat num0 = scale * c0 - c1;
        const Rat num1 = scale * c1 - c0;
        if (num0 < 0 || num1 < 0) {
          History t = node.h;
          t.push_back({q, d0.outcomes()[i]});
          throw NotDpAtScale(
              "not pure-DP at scale " + format_rat(scale) + ": transcript '" +
              history_key(t) + "' has masses " + format_rat(c0) + " / " +
              format_rat(c1));
        }
        // Unreachable prefixes (zero simulator mass) get uniform filler.
        cond0[i] = den0 > 0 ? Rat(num0 / den0) : Rat(1, n);
        cond1[i] = den1 > 0 ? Rat(num1 / den1) : Rat(1, n);
        if (c0 != 0 || c1 != 0) {
          History child = node.h;
          child.push_back({q, d0.outcomes()[i]});
          frontier.push_back({std::move(child), c0, c1});
        }
      }
      const std::string key = branch_key(node.h, q);
      sim[0].emplace(key, FiniteDist(d0.outcomes(), std::move(cond0)));
      sim[1].emplace(key, FiniteDist(d1.outcomes(), std::move(cond1)));
    }
  }
  return std::make_shared<TableMechanism>(
      table->rounds(), table->query_alphabet(), table->answer_alphabet(),
      std::move(sim), std::array<std::string, 2>{"rr0", "rr1"});
}

std::string SimulationReport::to_json() const {
  nlohmann::json j;
  j["status"] = pass ? "pass" : "fail";
  j["adversaries_checked"] = adversaries_checked;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : violations) {
    vs.push_back({{"adversary", nlohmann::json::parse(v.adversary)},
                  {"transcript", v.transcript},
                  {"input", v.input},
                  {"expected", format_rat(v.expected)},
                  {"actual", format_rat(v.actual)}});
  }
  j["violations"] = std::move(vs);
  return j.dump();
}

SimulationReport verify_simulation(const Mechanism& m,
                                   const Mechanism& simulator,
                                   const Rat& scale, const Limits& limits) {
  if (scale < 1) {
    throw ParameterError("simulator scale must be >= 1, got " +
                         format_rat(scale));
  }
  const Rat w_match = scale / (1 + scale);
  const Rat w_cross = 1 / (1 + scale);
  SimulationReport report;
  constexpr size_t kMaxViolations = 16;
  for_each_adversary(
      m,
      [&](const AdversaryStrategy& a, const std::vector<ViewLeaf>& m_leaves) {
        ++report.adversaries_checked;
        std::vector<ViewLeaf> t_leaves =
            collect_leaves(simulator,
                           [&a](const std::vector<std::string>& answers) {
                             std::string key;
                             for (size_t i = 0; i < answers.size(); ++i) {
                               if (i > 0) key += ',';
                               key += answers[i];
                             }
                             return a.query_for(key);
                           },
                           simulator.rounds());
        std::map<std::string, std::pair<Rat, Rat>> mixture;
        for (const auto& leaf : t_leaves) {
          auto& cell = mixture[leaf.label];
          cell.first += w_match * leaf.p0 + w_cross * leaf.p1;
          cell.second += w_cross * leaf.p0 + w_match * leaf.p1;
        }
        std::map<std::string, std::pair<Rat, Rat>> expected;
        for (const auto& leaf : m_leaves) {
          expected[leaf.label] = {leaf.p0, leaf.p1};
        }
        for (const auto& [label, want] : expected) {
          auto it = mixture.find(label);
          const Rat got0 = it == mixture.end() ? Rat(0) : it->second.first;
          const Rat got1 = it == mixture.end() ? Rat(0) : it->second.second;
          if (got0 != want.first &&
              report.violations.size() < kMaxViolations) {
            report.violations.push_back(
                {a.to_json(), label, 0, want.first, got0});
          }
          if (got1 != want.second &&
              report.violations.size() < kMaxViolations) {
            report.violations.push_back(
                {a.to_json(), label, 1, want.second, got1});
          }
          if (it != mixture.end()) mixture.erase(it);
        }
        // Mass the simulator mixture places on transcripts the mechanism
        // never produces.
        for (const auto& [label, got] : mixture) {
          if (got.first == 0 && got.second == 0) continue;
          if (report.violations.size() < kMaxViolations) {
            report.violations.push_back({a.to_json(), label,
                                         got.first != 0 ? 0 : 1, Rat(0),
                                         got.first != 0 ? got.first
                                                        : got.second});
          }
        }
        return true;
      },
      limits);
  report.pass = report.violations.empty();
  return report;
}

EquivalenceReport priv_loss_equivalence_check(
    const std::vector<MechanismPtr>& ms, const Prob& delta_g,
    const Limits& limits) {
  EquivalenceReport report;
  std::vector<Rat> scales;
  for (const auto& m : ms) {
    scales.push_back(priv_loss(*m, Prob(Rat(0)), limits).scale);
  }
  report.component_scales = scales;
  report.left_scale = priv_loss(*concomp(ms), delta_g, limits).scale;
  report.right_scale =
      min_scale_pairs(rr_product_pairs(scales), delta_g.rat());
  report.left_le_right = report.left_scale <= report.right_scale;
  report.equal = report.left_scale == report.right_scale;
  return report;
}

}  // namespace ccdp
