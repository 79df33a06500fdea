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

#include "ccdp/bounds.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ccdp/errors.h"

namespace ccdp {

const char* bound_theorem_name(BoundTheorem t) {
  switch (t) {
    case BoundTheorem::kBasicPure:
      return "basic-pure";
    case BoundTheorem::kHybrid:
      return "hybrid";
    case BoundTheorem::kOptimalPure:
      return "optimal-pure";
    case BoundTheorem::kOptimalApproxNoninteractive:
      return "optimal-approx-noninteractive";
  }
  return "unknown";
}

BoundResult basic_pure(const std::vector<double>& eps) {
  double total = 0;
  for (double e : eps) {
    if (e < 0 || !std::isfinite(e)) {
      throw ParameterError("eps values must be finite and nonnegative");
    }
    total += e;
  }
  BoundResult result;
  result.theorem = BoundTheorem::kBasicPure;
  result.eps_g = total;
  result.delta_g = 0;
  return result;
}

Rat hybrid_delta_for_order(const std::vector<PrivacyParams>& params,
                           const std::vector<int>& order) {
  Rat delta_g = 0;
  Rat prefix = 1;  // product of scales placed before the current mechanism
  for (int idx : order) {
    delta_g += prefix * params[idx].delta.rat();
    prefix *= params[idx].scale;
  }
  return delta_g;
}

BoundResult hybrid_delta(const std::vector<PrivacyParams>& params) {
  if (params.empty()) throw ParameterError("no mechanisms given");
  for (const auto& p : params) {
    if (p.scale < 1) {
      throw ParameterError("scale must be >= 1, got " + format_rat(p.scale));
    }
  }
  std::vector<int> order(params.size());
  std::iota(order.begin(), order.end(), 0);
  // Sort on delta_i / (u_i - 1) descending via cross-multiplication. Items
  // with delta = 0 and u = 1 contribute nothing in any position; pin them to
  // the end so the comparator stays a strict weak ordering.
  auto degenerate = [&params](int i) {
    return params[i].delta.is_zero() && params[i].scale == 1;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&params, &degenerate](int i, int j) {
                     if (degenerate(i)) return false;
                     if (degenerate(j)) return true;
                     return params[i].delta.rat() * (params[j].scale - 1) >
                            params[j].delta.rat() * (params[i].scale - 1);
                   });
  BoundResult result;
  result.theorem = BoundTheorem::kHybrid;
  result.delta_g = hybrid_delta_for_order(params, order);
  result.permutation = order;
  Rat total_scale = 1;
  Rat max_delta = 0;
  double eps_g = 0;
  for (const auto& p : params) {
    total_scale *= p.scale;
    max_delta = std::max(max_delta, p.delta.rat());
    eps_g += log_rat(p.scale);
  }
  result.eps_g = eps_g;
  result.scale_g = total_scale;
  result.convenience_delta =
      Rat(Rat(static_cast<long>(params.size())) * total_scale * max_delta);
  return result;
}

std::vector<std::pair<Rat, Rat>> rr_product_pairs(
    const std::vector<Rat>& scales) {
  const size_t k = scales.size();
  if (k == 0) throw ParameterError("no mechanisms given");
  if (k > 20) {
    throw LimitExceeded("subset enumeration capped at k = 20, got k = " +
                        std::to_string(k));
  }
  for (const auto& u : scales) {
    if (u < 1) {
      throw ParameterError("scale must be >= 1, got " + format_rat(u));
    }
  }
  std::vector<std::pair<Rat, Rat>> pairs;
  pairs.reserve(size_t{1} << k);
  pairs.emplace_back(Rat(1), Rat(1));
  for (const auto& u : scales) {
    const Rat truthful = u / (1 + u);
    const Rat lying = 1 / (1 + u);
    std::vector<std::pair<Rat, Rat>> next;
    next.reserve(pairs.size() * 2);
    for (const auto& [p, q] : pairs) {
      next.emplace_back(p * truthful, q * lying);
      next.emplace_back(p * lying, q * truthful);
    }
    pairs = std::move(next);
  }
  return pairs;
}

Rat optimal_scale(const std::vector<Rat>& scales, const Rat& delta_target) {
  return min_scale_one_direction(rr_product_pairs(scales), delta_target);
}

Rat optimal_scale_homogeneous(const Rat& scale, int k,
                              const Rat& delta_target) {
  if (k <= 0) throw ParameterError("k must be positive");
  if (scale < 1) {
    throw ParameterError("scale must be >= 1, got " + format_rat(scale));
  }
  // Group the 2^k outcomes by the number of truthful coordinates i:
  // C(k,i) outcomes with P0 = u^i / (1+u)^k and P1 = u^{k-i} / (1+u)^k.
  const Int num = numerator(scale);
  const Int den = denominator(scale);
  std::vector<Int> num_pow(k + 1), den_pow(k + 1);
  num_pow[0] = den_pow[0] = 1;
  for (int i = 1; i <= k; ++i) {
    num_pow[i] = num_pow[i - 1] * num;
    den_pow[i] = den_pow[i - 1] * den;
  }
  // u^i / (1+u)^k = num^i den^{k-i} / (num + den)^k.
  Int norm = 1;
  const Int base = num + den;
  for (int i = 0; i < k; ++i) norm *= base;
  std::vector<std::pair<Rat, Rat>> pairs;
  pairs.reserve(k + 1);
  Int binom = 1;
  for (int i = 0; i <= k; ++i) {
    Rat p(binom * num_pow[i] * den_pow[k - i], norm);
    Rat q(binom * num_pow[k - i] * den_pow[i], norm);
    pairs.emplace_back(std::move(p), std::move(q));
    binom = binom * (k - i) / (i + 1);
  }
  return min_scale_one_direction(pairs, delta_target);
}

BoundResult optimal_pure(const std::vector<Rat>& scales,
                         const Prob& delta_g) {
  if (delta_g.is_one()) throw ParameterError("delta_g must be < 1");
  BoundResult result;
  result.theorem = BoundTheorem::kOptimalPure;
  result.scale_g = optimal_scale(scales, delta_g.rat());
  result.eps_g = log_rat(*result.scale_g);
  result.delta_g = delta_g.rat();
  return result;
}

BoundResult optimal_approx_noninteractive(
    const std::vector<PrivacyParams>& params, const Prob& delta_g) {
  if (delta_g.is_one()) throw ParameterError("delta_g must be < 1");
  std::vector<Rat> scales;
  Rat keep = 1;  // prod (1 - delta_i)
  bool any_delta = false;
  for (const auto& p : params) {
    if (p.delta.is_one()) {
      throw ParameterError("component delta must be < 1");
    }
    if (!p.delta.is_zero()) any_delta = true;
    keep *= 1 - p.delta.rat();
    scales.push_back(p.scale);
  }
  const Rat target = 1 - (1 - delta_g.rat()) / keep;
  if (target < 0) {
    throw NoSolution("delta_g " + delta_g.str() +
                     " is below the composed floor 1 - prod(1 - delta_i) = " +
                     format_rat(1 - keep) + "; no eps_g exists");
  }
  BoundResult result;
  result.theorem = BoundTheorem::kOptimalApproxNoninteractive;
  result.scale_g = optimal_scale(scales, target);
  result.eps_g = log_rat(*result.scale_g);
  result.delta_g = delta_g.rat();
  result.noninteractive_only = any_delta;
  return result;
}

double optimal_lhs_homogeneous(double eps, int k, double eps_g) {
  // (1/(1+e^eps)^k) sum_i C(k,i) max(e^{i eps} - e^{eps_g} e^{(k-i) eps}, 0)
  // evaluated in log space; terms are active for (2i-k) eps > eps_g.
  const double log_norm = k * std::log1p(std::exp(eps));
  const double lg_k = std::lgamma(k + 1.0);
  double total = 0;
  for (int i = k; i >= 0; --i) {
    const double diff = (2.0 * i - k) * eps - eps_g;
    if (diff <= 0) break;
    const double log_coeff =
        lg_k - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0);
    total += std::exp(log_coeff + i * eps - log_norm) * (-std::expm1(-diff));
  }
  return total;
}

double optimal_eps_homogeneous(double eps, int k, double delta_g) {
  if (eps < 0 || !std::isfinite(eps)) {
    throw ParameterError("eps must be finite and nonnegative");
  }
  if (k <= 0) throw ParameterError("k must be positive");
  if (delta_g < 0 || delta_g >= 1) {
    throw ParameterError("delta_g must be in [0,1)");
  }
  double lo = 0;
  double hi = k * eps;
  if (optimal_lhs_homogeneous(eps, k, lo) <= delta_g) return lo;
  // The left side is continuous and nonincreasing in eps_g, 0 at k*eps.
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (optimal_lhs_homogeneous(eps, k, mid) <= delta_g) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<CurveRow> compare_curves(double eps, int k_max, double delta_g) {
  if (k_max <= 0) throw ParameterError("k_max must be positive");
  std::vector<CurveRow> rows;
  rows.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    rows.push_back({k, k * eps, 0.0,
                    optimal_eps_homogeneous(eps, k, delta_g), delta_g});
  }
  return rows;
}

std::string curves_to_csv(const std::vector<CurveRow>& rows) {
  std::string out = "k,eps_basic,delta_hybrid,eps_optimal,delta_g\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n", row.k,
                  row.eps_basic, row.delta_hybrid, row.eps_optimal,
                  row.delta_g);
    out += buf;
  }
  return out;
}

}  // namespace ccdp
