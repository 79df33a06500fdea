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

#include "ccdp/composition.h"

#include <algorithm>

#include "ccdp/errors.h"

namespace ccdp {

std::string tagged_query(int index, const std::string& query) {
  return std::to_string(index) + ":" + query;
}

std::pair<int, std::string> parse_tagged_query(const std::string& label) {
  const size_t colon = label.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw ParseError("query '" + label + "' lacks a mechanism-index tag");
  }
  int index = 0;
  for (size_t i = 0; i < colon; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) {
      throw ParseError("query '" + label + "' has a non-numeric index tag");
    }
    index = index * 10 + (label[i] - '0');
    if (index > 1'000'000) {
      throw ParseError("query '" + label + "' index tag out of range");
    }
  }
  return {index, label.substr(colon + 1)};
}

namespace {

class ConcurrentComposition final : public Mechanism {
 public:
  ConcurrentComposition(std::vector<MechanismPtr> parts,
                        std::vector<std::array<int, 2>> input_map)
      : parts_(std::move(parts)), input_map_(std::move(input_map)) {
    if (parts_.empty()) {
      throw ParameterError("composition of zero mechanisms");
    }
    if (input_map_.size() != parts_.size()) {
      throw ParameterError("input map size does not match component count");
    }
    rounds_ = 0;
    for (const auto& part : parts_) rounds_ += part->rounds();
  }

  int rounds() const override { return rounds_; }

  std::vector<std::string> queries_at(const History& h) const override {
    const auto inner = split_history(h);
    std::vector<std::string> queries;
    for (size_t j = 0; j < parts_.size(); ++j) {
      if (static_cast<int>(inner[j].size()) >= parts_[j]->rounds()) continue;
      for (const auto& q : parts_[j]->queries_at(inner[j])) {
        queries.push_back(tagged_query(static_cast<int>(j), q));
      }
    }
    return queries;
  }

  FiniteDist answers(int input, const History& h,
                     const std::string& query) const override {
    auto [index, inner_query] = parse_tagged_query(query);
    if (index < 0 || index >= static_cast<int>(parts_.size())) {
      throw ParameterError("query '" + query + "' targets component " +
                           std::to_string(index) + " of " +
                           std::to_string(parts_.size()));
    }
    const auto inner = split_history(h);
    return parts_[index]->answers(input_map_[index][input], inner[index],
                                  inner_query);
  }

 private:
  // Per-component histories, recovered from the tags.
  std::vector<History> split_history(const History& h) const {
    std::vector<History> inner(parts_.size());
    for (const auto& qa : h) {
      auto [index, inner_query] = parse_tagged_query(qa.query);
      if (index < 0 || index >= static_cast<int>(parts_.size())) {
        throw ParameterError("history routes to missing component " +
                             std::to_string(index));
      }
      inner[index].push_back({inner_query, qa.answer});
    }
    return inner;
  }

  std::vector<MechanismPtr> parts_;
  std::vector<std::array<int, 2>> input_map_;
  int rounds_;
};

class OrderedComposition final : public Mechanism {
 public:
  OrderedComposition(std::vector<MechanismPtr> parts, int total_rounds)
      : parts_(std::move(parts)), rounds_(total_rounds) {
    if (parts_.empty()) {
      throw ParameterError("composition of zero mechanisms");
    }
    if (rounds_ <= 0) {
      throw ParameterError("ordered composition needs at least one round");
    }
  }

  int rounds() const override { return rounds_; }

  std::vector<std::string> queries_at(const History& h) const override {
    const size_t j = h.size() % parts_.size();
    History inner = component_history(h, j);
    if (static_cast<int>(inner.size()) >= parts_[j]->rounds()) {
      return {kNullQuery};
    }
    return parts_[j]->queries_at(inner);
  }

  FiniteDist answers(int input, const History& h,
                     const std::string& query) const override {
    const size_t j = h.size() % parts_.size();
    History inner = component_history(h, j);
    if (static_cast<int>(inner.size()) >= parts_[j]->rounds()) {
      if (query != kNullQuery) {
        throw ParameterError("component " + std::to_string(j) +
                             " is exhausted; only the null query is valid");
      }
      return FiniteDist::point_mass(kNullAnswer);
    }
    return parts_[j]->answers(input, inner, query);
  }

 private:
  History component_history(const History& h, size_t j) const {
    History inner;
    for (size_t i = j; i < h.size(); i += parts_.size()) {
      inner.push_back(h[i]);
    }
    return inner;
  }

  std::vector<MechanismPtr> parts_;
  int rounds_;
};

}  // namespace

MechanismPtr concomp(std::vector<MechanismPtr> parts) {
  std::vector<std::array<int, 2>> identity(parts.size(), {0, 1});
  return concomp(std::move(parts), std::move(identity));
}

MechanismPtr concomp(std::vector<MechanismPtr> parts,
                     std::vector<std::array<int, 2>> input_map) {
  return std::make_shared<ConcurrentComposition>(std::move(parts),
                                                 std::move(input_map));
}

MechanismPtr ordered_concomp(std::vector<MechanismPtr> parts) {
  int max_rounds = 0;
  for (const auto& part : parts) {
    max_rounds = std::max(max_rounds, part->rounds());
  }
  const int total = static_cast<int>(parts.size()) * max_rounds;
  return ordered_concomp(std::move(parts), total);
}

MechanismPtr ordered_concomp(std::vector<MechanismPtr> parts,
                             int total_rounds) {
  return std::make_shared<OrderedComposition>(std::move(parts), total_rounds);
}

}  // namespace ccdp
