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

#include "ccdp/adversary.h"

#include <algorithm>
#include <limits>

#include "ccdp/errors.h"
#include "json.hpp"

namespace ccdp {

const std::string& AdversaryStrategy::query_for(
    const std::string& answer_key) const {
  auto it = policy.find(answer_key);
  if (it == policy.end()) {
    throw InvariantViolation("strategy has no query at answer history '" +
                             answer_key + "'");
  }
  return it->second;
}

std::string AdversaryStrategy::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, query] : policy) j[key] = query;
  return j.dump();
}

namespace {

std::string extend_key(const std::string& key, const std::string& answer) {
  return key.empty() ? answer : key + "," + answer;
}

void collect_rec(const Mechanism& m, const QueryFn& policy, int depth,
                 History& h, std::vector<std::string>& answers,
                 const Rat& p0, const Rat& p1, std::vector<ViewLeaf>& out) {
  if (static_cast<int>(h.size()) == depth) {
    std::string label;
    for (size_t i = 0; i < answers.size(); ++i) {
      if (i > 0) label += ',';
      label += answers[i];
    }
    out.push_back({std::move(label), p0, p1});
    return;
  }
  const std::string query = policy(answers);
  if (query == kHalt) {
    std::string label;
    for (size_t i = 0; i < answers.size(); ++i) {
      if (i > 0) label += ',';
      label += answers[i];
    }
    out.push_back({std::move(label), p0, p1});
    return;
  }
  const FiniteDist d0 = m.answers(0, h, query);
  const FiniteDist d1 = m.answers(1, h, query);
  if (!d0.same_support(d1)) {
    throw InvariantViolation("ragged supports at '" + branch_key(h, query) +
                             "'");
  }
  for (size_t i = 0; i < d0.size(); ++i) {
    if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
    h.push_back({query, d0.outcomes()[i]});
    answers.push_back(d0.outcomes()[i]);
    collect_rec(m, policy, depth, h, answers, Rat(p0 * d0.mass(i)),
                Rat(p1 * d1.mass(i)), out);
    answers.pop_back();
    h.pop_back();
  }
}

ViewPair leaves_to_views(const std::vector<ViewLeaf>& leaves) {
  std::vector<std::string> labels;
  std::vector<Rat> m0, m1;
  labels.reserve(leaves.size());
  m0.reserve(leaves.size());
  m1.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    labels.push_back(leaf.label);
    m0.push_back(leaf.p0);
    m1.push_back(leaf.p1);
  }
  return {FiniteDist(labels, std::move(m0)),
          FiniteDist(std::move(labels), std::move(m1))};
}

QueryFn strategy_fn(const AdversaryStrategy& a) {
  return [&a](const std::vector<std::string>& answers) -> std::string {
    if (static_cast<int>(answers.size()) >= a.depth) return kHalt;
    std::string key;
    for (size_t i = 0; i < answers.size(); ++i) {
      if (i > 0) key += ',';
      key += answers[i];
    }
    return a.query_for(key);
  };
}

}  // namespace

std::vector<ViewLeaf> collect_leaves(const Mechanism& m, const QueryFn& policy,
                                     int depth) {
  if (depth < 0 || depth > m.rounds()) {
    throw ParameterError("strategy depth " + std::to_string(depth) +
                         " incompatible with a " +
                         std::to_string(m.rounds()) + "-round mechanism");
  }
  std::vector<ViewLeaf> leaves;
  History h;
  std::vector<std::string> answers;
  collect_rec(m, policy, depth, h, answers, Rat(1), Rat(1), leaves);
  return leaves;
}

ViewPair view_pair(const Mechanism& m, const QueryFn& policy, int depth) {
  return leaves_to_views(collect_leaves(m, policy, depth));
}

ViewPair view_pair(const Mechanism& m, const AdversaryStrategy& a) {
  return view_pair(m, strategy_fn(a), std::min(a.depth, m.rounds()));
}

FiniteDist view_dist(const Mechanism& m, const AdversaryStrategy& a,
                     int input) {
  ViewPair views = view_pair(m, a);
  return input == 0 ? std::move(views.v0) : std::move(views.v1);
}

namespace {

Int count_rec(const Mechanism& m, History& h) {
  if (static_cast<int>(h.size()) == m.rounds()) return 1;
  Int total = 0;
  for (const auto& q : m.queries_at(h)) {
    const FiniteDist d0 = m.answers(0, h, q);
    const FiniteDist d1 = m.answers(1, h, q);
    Int product = 1;
    for (size_t i = 0; i < d0.size(); ++i) {
      if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
      h.push_back({q, d0.outcomes()[i]});
      product *= count_rec(m, h);
      h.pop_back();
    }
    total += product;
  }
  return total;
}

// DFS state for streaming enumeration. Nodes awaiting a query decision are
// kept on a stack; assigning the last pending node completes a strategy.
struct EnumState {
  const Mechanism& m;
  const std::function<bool(const AdversaryStrategy&,
                           const std::vector<ViewLeaf>&)>& fn;
  unsigned long long limit;
  unsigned long long count = 0;
  bool stopped = false;

  struct Node {
    History h;
    std::string answer_key;
    Rat p0, p1;
  };
  std::vector<Node> pending;
  std::vector<ViewLeaf> leaves;
  AdversaryStrategy strategy;

  void run() {
    if (pending.empty()) {
      if (++count > limit) {
        throw LimitExceeded("adversary enumeration exceeds " +
                            std::to_string(limit) + " strategies");
      }
      if (!fn(strategy, leaves)) stopped = true;
      return;
    }
    Node node = std::move(pending.back());
    pending.pop_back();
    const int child_depth = static_cast<int>(node.h.size()) + 1;
    for (const auto& q : m.queries_at(node.h)) {
      const FiniteDist d0 = m.answers(0, node.h, q);
      const FiniteDist d1 = m.answers(1, node.h, q);
      strategy.policy[node.answer_key] = q;
      size_t pushed = 0, leafed = 0;
      for (size_t i = 0; i < d0.size(); ++i) {
        if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
        const std::string& answer = d0.outcomes()[i];
        Rat c0 = node.p0 * d0.mass(i);
        Rat c1 = node.p1 * d1.mass(i);
        std::string child_key = extend_key(node.answer_key, answer);
        if (child_depth == m.rounds()) {
          leaves.push_back({std::move(child_key), std::move(c0),
                            std::move(c1)});
          ++leafed;
        } else {
          History child = node.h;
          child.push_back({q, answer});
          pending.push_back({std::move(child), std::move(child_key),
                             std::move(c0), std::move(c1)});
          ++pushed;
        }
      }
      run();
      leaves.resize(leaves.size() - leafed);
      pending.resize(pending.size() - pushed);
      if (stopped) break;
    }
    strategy.policy.erase(node.answer_key);
    pending.push_back(std::move(node));
  }
};

}  // namespace

Int count_adversaries(const Mechanism& m) {
  History h;
  return count_rec(m, h);
}

void for_each_adversary(
    const Mechanism& m,
    const std::function<bool(const AdversaryStrategy&,
                             const std::vector<ViewLeaf>&)>& fn,
    const Limits& limits) {
  EnumState state{m, fn, limits.max_adversaries};
  state.strategy.depth = m.rounds();
  state.pending.push_back({History{}, std::string(), Rat(1), Rat(1)});
  state.run();
}

std::vector<AdversaryStrategy> enumerate_adversaries(const Mechanism& m,
                                                     const Limits& limits) {
  std::vector<AdversaryStrategy> out;
  for_each_adversary(
      m,
      [&out](const AdversaryStrategy& a, const std::vector<ViewLeaf>&) {
        out.push_back(a);
        return true;
      },
      limits);
  return out;
}

namespace {

// Flattened reachable decision tree, built once so the exponential strategy
// walk touches no mechanism virtuals, string keys, or rational temporaries.
// Doubles ride along for a conservative pre-filter; the reported maximum is
// always produced by exact rational evaluation.
struct CompiledTree {
  struct Edge {
    std::string answer;
    Rat m0, m1;
    double m0d, m1d;
    // Numerators over the shared per-round grid when the tree is gridded.
    Int n0, n1;
    int child;  // node index, -1 at full depth
  };
  struct Choice {
    std::string query;
    std::vector<Edge> edges;
  };
  struct Node {
    std::vector<Choice> choices;
    int chosen = -1;  // strategy assignment owned by the running DFS
  };
  std::vector<Node> nodes;  // index 0 is the root
  int rounds = 0;
  // When every branch mass has a denominator dividing kGrid, leaf masses
  // are integers over kGrid^rounds, and exact per-strategy sums run in
  // plain integers with one shared denominator.
  static constexpr long kGrid = 1L << 16;
  bool gridded = true;
  Int grid_den = 1;  // kGrid^rounds

  explicit CompiledTree(const Mechanism& m) : rounds(m.rounds()) {
    History h;
    build(m, h);
    if (gridded) {
      for (int i = 0; i < rounds; ++i) grid_den *= kGrid;
    }
  }

 private:
  int build(const Mechanism& m, History& h) {
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::vector<Choice> choices;
    for (const auto& q : m.queries_at(h)) {
      Choice choice;
      choice.query = q;
      const FiniteDist d0 = m.answers(0, h, q);
      const FiniteDist d1 = m.answers(1, h, q);
      for (size_t i = 0; i < d0.size(); ++i) {
        if (d0.mass(i) == 0 && d1.mass(i) == 0) continue;
        Edge edge;
        edge.answer = d0.outcomes()[i];
        edge.m0 = d0.mass(i);
        edge.m1 = d1.mass(i);
        edge.m0d = rat_to_double(edge.m0);
        edge.m1d = rat_to_double(edge.m1);
        if (gridded) {
          const Int den0 = denominator(edge.m0);
          const Int den1 = denominator(edge.m1);
          if (Int(kGrid) % den0 == 0 && Int(kGrid) % den1 == 0) {
            edge.n0 = numerator(edge.m0) * (Int(kGrid) / den0);
            edge.n1 = numerator(edge.m1) * (Int(kGrid) / den1);
          } else {
            gridded = false;
          }
        }
        if (static_cast<int>(h.size()) + 1 < rounds) {
          h.push_back({q, edge.answer});
          edge.child = build(m, h);
          h.pop_back();
        } else {
          edge.child = -1;
        }
        choice.edges.push_back(std::move(edge));
      }
      choices.push_back(std::move(choice));
    }
    nodes[index].choices = std::move(choices);
    return index;
  }
};

// Any skipped strategy satisfies float-divergence <= delta - kFilterMargin
// in both directions; with leaf products of at most ~dozens of roundings the
// float error stays far below this, so skipping is sound.
constexpr double kFilterMargin = 1e-9;

class PrivLossWalker {
 public:
  PrivLossWalker(CompiledTree& tree, const Rat& delta,
                 unsigned long long limit)
      : tree_(tree),
        delta_(delta),
        deltad_(rat_to_double(delta)),
        limit_(limit),
        delta_num_(numerator(delta)),
        delta_den_(denominator(delta)),
        delta_threshold_(delta_num_ * tree.grid_den) {}

  void run() {
    pending_.push_back({0, 1.0, 1.0});
    walk();
  }

  const Rat& best() const { return best_; }
  unsigned long long count() const { return count_; }

 private:
  struct Pending {
    int node;
    double d0, d1;
  };

  void walk() {
    if (pending_.empty()) {
      evaluate();
      return;
    }
    Pending item = pending_.back();
    pending_.pop_back();
    CompiledTree::Node& node = tree_.nodes[item.node];
    const bool was_tiny = tiny_;
    for (size_t c = 0; c < node.choices.size(); ++c) {
      node.chosen = static_cast<int>(c);
      const auto& edges = node.choices[c].edges;
      size_t pushed = 0, leafed = 0;
      for (const auto& edge : edges) {
        const double d0 = item.d0 * edge.m0d;
        const double d1 = item.d1 * edge.m1d;
        if ((d0 != 0 && d0 < 1e-200) || (d1 != 0 && d1 < 1e-200)) {
          tiny_ = true;  // underflow risk; force exact evaluation below
        }
        if (edge.child < 0) {
          leavesd_.emplace_back(d0, d1);
          ++leafed;
        } else {
          pending_.push_back({edge.child, d0, d1});
          ++pushed;
        }
      }
      walk();
      leavesd_.resize(leavesd_.size() - leafed);
      pending_.resize(pending_.size() - pushed);
      tiny_ = was_tiny;
    }
    node.chosen = -1;
    pending_.push_back(item);
  }

  void evaluate() {
    if (++count_ > limit_) {
      throw LimitExceeded("adversary enumeration exceeds " +
                          std::to_string(limit_) + " strategies");
    }
    if (!tiny_ && count_ > 1) {
      // Two sound reasons to skip: every likelihood ratio sits strictly
      // inside the incumbent scale (so the strategy's least scale cannot
      // exceed it at any delta), or the summed divergence at the incumbent
      // clears delta with margin to spare.
      double forward = 0, backward = 0;
      bool ratios_inside = true;
      for (const auto& [d0, d1] : leavesd_) {
        const double f = d0 - bestd_ * d1;
        const double b = d1 - bestd_ * d0;
        if (f > 0) forward += f;
        if (b > 0) backward += b;
        const double leaf_margin = 1e-12 * (d0 + d1) * (bestd_ + 1) + 1e-250;
        if (f > -leaf_margin || b > -leaf_margin) ratios_inside = false;
      }
      if (ratios_inside) return;
      if (forward <= deltad_ - kFilterMargin &&
          backward <= deltad_ - kFilterMargin) {
        return;
      }
    }
    // Exact evaluation of this strategy: first the cheap incumbent test
    // (no sorts or divisions; ties at the maximum land here), then the full
    // piecewise solve only for genuine improvers. On gridded trees the
    // incumbent test runs in integers over the shared denominator.
    exact_leaves_.clear();
    if (tree_.gridded) {
      exact_int_leaves_.clear();
      collect_exact_int(0, Int(1), Int(1));
      if (count_ > 1) {
        Int forward = 0, backward = 0;
        for (const auto& [n0, n1] : exact_int_leaves_) {
          Int f = n0 * best_den_ - best_num_ * n1;
          if (f > 0) forward += std::move(f);
          Int b = n1 * best_den_ - best_num_ * n0;
          if (b > 0) backward += std::move(b);
        }
        // fwd/(grid_den * u_den) <= delta_num/delta_den, cross-multiplied.
        if (forward * delta_den_ <= delta_threshold_ &&
            backward * delta_den_ <= delta_threshold_) {
          return;
        }
      }
      for (const auto& [n0, n1] : exact_int_leaves_) {
        exact_leaves_.emplace_back(Rat(n0, tree_.grid_den),
                                   Rat(n1, tree_.grid_den));
      }
    } else {
      collect_exact(0, Rat(1), Rat(1));
      if (count_ > 1) {
        Rat forward = 0, backward = 0;
        for (const auto& [p0, p1] : exact_leaves_) {
          Rat f = p0 - best_ * p1;
          if (f > 0) forward += std::move(f);
          Rat b = p1 - best_ * p0;
          if (b > 0) backward += std::move(b);
        }
        if (forward <= delta_ && backward <= delta_) return;
      }
    }
    try {
      Rat candidate = min_scale_pairs(exact_leaves_, delta_);
      if (candidate > best_) {
        set_best(std::move(candidate));
      }
    } catch (const UnboundedEpsilon& e) {
      throw UnboundedEpsilon(std::string(e.what()) + "; adversary " +
                             current_strategy().to_json());
    }
  }

  void set_best(Rat value) {
    best_ = std::move(value);
    bestd_ = rat_to_double(best_);
    best_num_ = numerator(best_);
    best_den_ = denominator(best_);
    delta_threshold_ = delta_num_ * tree_.grid_den * best_den_;
  }

  void collect_exact(int node_index, const Rat& p0, const Rat& p1) {
    const CompiledTree::Node& node = tree_.nodes[node_index];
    const auto& edges = node.choices[node.chosen].edges;
    for (const auto& edge : edges) {
      Rat c0 = p0 * edge.m0;
      Rat c1 = p1 * edge.m1;
      if (edge.child < 0) {
        exact_leaves_.emplace_back(std::move(c0), std::move(c1));
      } else {
        collect_exact(edge.child, c0, c1);
      }
    }
  }

  void collect_exact_int(int node_index, const Int& n0, const Int& n1) {
    const CompiledTree::Node& node = tree_.nodes[node_index];
    const auto& edges = node.choices[node.chosen].edges;
    for (const auto& edge : edges) {
      Int c0 = n0 * edge.n0;
      Int c1 = n1 * edge.n1;
      if (edge.child < 0) {
        exact_int_leaves_.emplace_back(std::move(c0), std::move(c1));
      } else {
        collect_exact_int(edge.child, c0, c1);
      }
    }
  }

  AdversaryStrategy current_strategy() const {
    AdversaryStrategy a;
    a.depth = tree_.rounds;
    rebuild_policy(0, "", &a);
    return a;
  }

  void rebuild_policy(int node_index, const std::string& key,
                      AdversaryStrategy* a) const {
    const CompiledTree::Node& node = tree_.nodes[node_index];
    if (node.chosen < 0) return;
    const auto& choice = node.choices[node.chosen];
    a->policy[key] = choice.query;
    for (const auto& edge : choice.edges) {
      if (edge.child >= 0) {
        rebuild_policy(edge.child,
                       key.empty() ? edge.answer : key + "," + edge.answer,
                       a);
      }
    }
  }

  CompiledTree& tree_;
  Rat delta_;
  double deltad_;
  unsigned long long limit_;
  std::vector<Pending> pending_;
  std::vector<std::pair<double, double>> leavesd_;
  std::vector<std::pair<Rat, Rat>> exact_leaves_;
  std::vector<std::pair<Int, Int>> exact_int_leaves_;
  Rat best_ = 1;
  double bestd_ = 1.0;
  Int best_num_ = 1;
  Int best_den_ = 1;
  Int delta_num_;
  Int delta_den_;
  Int delta_threshold_;
  bool tiny_ = false;
  unsigned long long count_ = 0;
};

// At delta = 0 the divergence vanishes iff every transcript satisfies the
// pointwise ratio bound in both directions, for every adversary; since each
// reachable full-depth path is a view leaf of some strategy, the least
// scale is the maximum likelihood ratio over all paths of the tree. One
// exact DFS with unreduced cross-products replaces the strategy walk.
class MaxRatioWalker {
 public:
  explicit MaxRatioWalker(const CompiledTree& tree) : tree_(tree) {}

  Rat run() {
    walk(0, Int(1), Int(1));
    return best_;
  }

 private:
  void walk(int node_index, const Int& a, const Int& b) {
    // a/b carries the running likelihood ratio prod m0 / prod m1 as a pair
    // of unreduced integers.
    if (node_index < 0) {
      if (b == 0 || a == 0) {
        throw UnboundedEpsilon(
            "a transcript separates the inputs exactly (one-sided support); "
            "no finite scale works at delta 0");
      }
      if (a * denominator(best_) > numerator(best_) * b) {
        best_ = Rat(a, b);
      }
      if (b * denominator(best_) > numerator(best_) * a) {
        best_ = Rat(b, a);
      }
      return;
    }
    for (const auto& choice : tree_.nodes[node_index].choices) {
      for (const auto& edge : choice.edges) {
        walk(edge.child, Int(a * numerator(edge.m0) * denominator(edge.m1)),
             Int(b * denominator(edge.m0) * numerator(edge.m1)));
      }
    }
  }

  const CompiledTree& tree_;
  Rat best_ = 1;
};

}  // namespace

PrivLossResult priv_loss(const Mechanism& m, const Prob& delta,
                         const Limits& limits) {
  if (m.rounds() > limits.max_rounds) {
    throw LimitExceeded("mechanism depth " + std::to_string(m.rounds()) +
                        " exceeds limit " + std::to_string(limits.max_rounds));
  }
  const Rat& d = delta.rat();
  if (d >= 1) throw ParameterError("delta must be < 1");
  CompiledTree tree(m);
  if (d == 0) {
    MaxRatioWalker walker(tree);
    const Rat best = walker.run();
    const Int count = count_adversaries(m);
    const unsigned long long reported =
        count > Int(std::numeric_limits<unsigned long long>::max())
            ? std::numeric_limits<unsigned long long>::max()
            : static_cast<unsigned long long>(count);
    return {best, log_rat(best), reported};
  }
  PrivLossWalker walker(tree, d, limits.max_adversaries);
  walker.run();
  return {walker.best(), log_rat(walker.best()), walker.count()};
}

}  // namespace ccdp
