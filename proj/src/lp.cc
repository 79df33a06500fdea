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

#include "ccdp/lp.h"

#include <array>

#include "ccdp/errors.h"
#include "json.hpp"

namespace ccdp {

namespace {

constexpr std::array<const char*, 4> kSymbols = {"0", "1", "Iam0", "Iam1"};

// Variable index for Pr[T(c, q) = (a0, a1)].
size_t var_index(int c, int q, int a0, int a1) {
  return static_cast<size_t>(((c * 2 + q) * 2 + a0) * 2 + a1);
}

std::string var_name(int c, int q, int a0, int a1) {
  return std::string("T_") + kSymbols[c] + "_q" + std::to_string(q) + "_" +
         std::to_string(a0) + std::to_string(a1);
}

}  // namespace

LpSystem build_system(const Mechanism& m, const Rat& scale,
                      const Prob& delta) {
  if (scale < 1) {
    throw ParameterError("scale must be >= 1, got " + format_rat(scale));
  }
  if (m.rounds() != 2) {
    throw ParameterError("the feasibility system is defined for 2-round "
                         "mechanisms; got " +
                         std::to_string(m.rounds()) + " rounds");
  }
  const auto root_queries = m.queries_at({});
  if (root_queries.size() != 1) {
    throw ParameterError("the feasibility system needs a single first-round "
                         "query");
  }
  const std::string& q0 = root_queries.front();

  // Joint transcript law joint[b][q][a0][a1].
  Rat joint[2][2][2][2];
  for (int b = 0; b < 2; ++b) {
    const FiniteDist first = m.answers(b, {}, q0);
    if (first.outcomes() != std::vector<std::string>{"0", "1"}) {
      throw ParameterError("first-round answers must be {0, 1}");
    }
    for (int a0 = 0; a0 < 2; ++a0) {
      const History h = {{q0, std::to_string(a0)}};
      const auto second_queries = m.queries_at(h);
      if (second_queries != std::vector<std::string>{"0", "1"}) {
        throw ParameterError("second-round queries must be {0, 1}");
      }
      for (int q = 0; q < 2; ++q) {
        const FiniteDist second = m.answers(b, h, std::to_string(q));
        if (second.outcomes() != std::vector<std::string>{"0", "1"}) {
          throw ParameterError("second-round answers must be {0, 1}");
        }
        for (int a1 = 0; a1 < 2; ++a1) {
          joint[b][q][a0][a1] = first.mass(a0) * second.mass(a1);
        }
      }
    }
  }

  LpSystem sys;
  for (int c = 0; c < 4; ++c) {
    for (int q = 0; q < 2; ++q) {
      for (int a0 = 0; a0 < 2; ++a0) {
        for (int a1 = 0; a1 < 2; ++a1) {
          sys.var_names.push_back(var_name(c, q, a0, a1));
        }
      }
    }
  }
  const size_t n = sys.var_names.size();
  auto add_row = [&sys, n](const std::string& name) -> std::vector<Rat>& {
    sys.row_names.push_back(name);
    sys.coeffs.emplace_back(n, Rat(0));
    sys.rhs.emplace_back(0);
    return sys.coeffs.back();
  };

  const Rat keep = 1 - delta.rat();
  const Rat w_truthful = keep * scale / (1 + scale);
  const Rat w_lying = keep / (1 + scale);

  // Mixture equalities: the observed law is the RR-weighted mixture of the
  // four T-trees.
  for (int b = 0; b < 2; ++b) {
    for (int q = 0; q < 2; ++q) {
      for (int a0 = 0; a0 < 2; ++a0) {
        for (int a1 = 0; a1 < 2; ++a1) {
          auto& row = add_row("mix_b" + std::to_string(b) + "_q" +
                              std::to_string(q) + "_" + std::to_string(a0) +
                              std::to_string(a1));
          if (b == 0) {
            row[var_index(2, q, a0, a1)] = delta.rat();  // Iam0
            row[var_index(0, q, a0, a1)] = w_truthful;
            row[var_index(1, q, a0, a1)] = w_lying;
          } else {
            row[var_index(0, q, a0, a1)] = w_lying;
            row[var_index(1, q, a0, a1)] = w_truthful;
            row[var_index(3, q, a0, a1)] = delta.rat();  // Iam1
          }
          sys.rhs.back() = joint[b][q][a0][a1];
        }
      }
    }
  }

  // Normalization under every deterministic adversary f: a0 -> q.
  for (int c = 0; c < 4; ++c) {
    for (int f0 = 0; f0 < 2; ++f0) {
      for (int f1 = 0; f1 < 2; ++f1) {
        auto& row = add_row(std::string("norm_") + kSymbols[c] + "_f" +
                            std::to_string(f0) + std::to_string(f1));
        for (int a0 = 0; a0 < 2; ++a0) {
          const int q = a0 == 0 ? f0 : f1;
          for (int a1 = 0; a1 < 2; ++a1) {
            row[var_index(c, q, a0, a1)] += 1;
          }
        }
        sys.rhs.back() = 1;
      }
    }
  }

  // First-round consistency: the a0 marginal may not depend on the query.
  for (int c = 0; c < 4; ++c) {
    for (int a0 = 0; a0 < 2; ++a0) {
      auto& row = add_row(std::string("consist_") + kSymbols[c] + "_a" +
                          std::to_string(a0));
      for (int a1 = 0; a1 < 2; ++a1) {
        row[var_index(c, 0, a0, a1)] += 1;
        row[var_index(c, 1, a0, a1)] -= 1;
      }
      sys.rhs.back() = 0;
    }
  }
  return sys;
}

namespace {

// Incremental exact Gaussian elimination that keeps an original-row subset.
// Each kept row remembers its reduced form; each incoming row is reduced
// against the kept basis while tracking the combination over original rows,
// so an inconsistent dependent row yields a certificate directly.
struct Eliminator {
  struct BasisRow {
    std::vector<Rat> reduced;
    Rat rhs;
    size_t pivot;
  };
  std::vector<BasisRow> basis;
  std::vector<size_t> kept;  // original row indices

  // Returns: 0 kept, 1 dependent-consistent, 2 dependent-inconsistent (with
  // `combo` holding y over original rows such that yA = 0, yb != 0).
  int feed(const LpSystem& sys, size_t row, std::vector<Rat>* combo_out) {
    std::vector<Rat> vec = sys.coeffs[row];
    Rat rhs = sys.rhs[row];
    std::vector<Rat> combo(sys.num_rows(), Rat(0));
    combo[row] = 1;
    for (size_t k = 0; k < basis.size(); ++k) {
      const Rat& lead = vec[basis[k].pivot];
      if (lead == 0) continue;
      const Rat factor = lead / basis[k].reduced[basis[k].pivot];
      for (size_t j = 0; j < vec.size(); ++j) {
        if (basis[k].reduced[j] != 0) {
          vec[j] -= factor * basis[k].reduced[j];
        }
      }
      rhs -= factor * basis[k].rhs;
      // Kept rows were themselves reduced; expand the dependency through
      // their stored combinations.
      for (size_t r = 0; r < combo.size(); ++r) {
        if (combos[k][r] != 0) combo[r] -= factor * combos[k][r];
      }
    }
    size_t pivot = vec.size();
    for (size_t j = 0; j < vec.size(); ++j) {
      if (vec[j] != 0) {
        pivot = j;
        break;
      }
    }
    if (pivot == vec.size()) {
      if (rhs != 0) {
        if (combo_out) {
          if (rhs < 0) {
            for (auto& c : combo) c = -c;
          }
          *combo_out = std::move(combo);
        }
        return 2;
      }
      return 1;
    }
    basis.push_back({std::move(vec), std::move(rhs), pivot});
    kept.push_back(row);
    combos.push_back(std::move(combo));
    return 0;
  }

  std::vector<std::vector<Rat>> combos;  // kept-row expression over originals
};

}  // namespace

Feasibility solve_feasibility(const LpSystem& sys) {
  const size_t n = sys.num_vars();
  Feasibility result;

  Eliminator elim;
  for (size_t r = 0; r < sys.num_rows(); ++r) {
    std::vector<Rat> combo;
    const int what = elim.feed(sys, r, &combo);
    if (what == 2) {
      result.status = Feasibility::Status::kInfeasible;
      result.certificate = std::move(combo);
      result.rank = elim.kept.size();
      result.rows_dropped = sys.num_rows() - elim.kept.size();
      return result;
    }
    if (what == 1) ++result.rows_dropped;
  }
  result.rank = elim.kept.size();
  const size_t m = elim.kept.size();

  // Phase-1: minimize the sum of one artificial per kept row, rows oriented
  // so the right side is nonnegative.
  std::vector<int> sign(m, 1);
  std::vector<std::vector<Rat>> tab(m, std::vector<Rat>(n + m + 1, Rat(0)));
  for (size_t i = 0; i < m; ++i) {
    const size_t orig = elim.kept[i];
    sign[i] = sys.rhs[orig] < 0 ? -1 : 1;
    for (size_t j = 0; j < n; ++j) {
      tab[i][j] = sign[i] * sys.coeffs[orig][j];
    }
    tab[i][n + i] = 1;
    tab[i][n + m] = sign[i] * sys.rhs[orig];
  }
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced costs r_j = c_j - pi^T A_j with pi = ones initially.
  std::vector<Rat> red(n + m, Rat(0));
  for (size_t j = 0; j < n; ++j) {
    Rat colsum = 0;
    for (size_t i = 0; i < m; ++i) colsum += tab[i][j];
    red[j] = -colsum;
  }

  while (true) {
    // Bland: the lowest-index column with negative reduced cost enters.
    size_t enter = n + m;
    for (size_t j = 0; j < n + m; ++j) {
      if (red[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;
    // Ratio test; ties broken by the smallest basis variable index.
    size_t leave = m;
    Rat best_ratio = 0;
    for (size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rat ratio = tab[i][n + m] / tab[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == m) {
      // The phase-1 objective is bounded below by zero, so an unbounded
      // direction cannot occur on independent rows.
      throw InvariantViolation("phase-1 simplex detected an unbounded ray");
    }
    ++result.pivots;
    // Pivot on (leave, enter).
    const Rat pivot = tab[leave][enter];
    for (auto& v : tab[leave]) v /= pivot;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rat factor = tab[i][enter];
      for (size_t j = 0; j <= n + m; ++j) {
        if (tab[leave][j] != 0) tab[i][j] -= factor * tab[leave][j];
      }
    }
    const Rat rfactor = red[enter];
    if (rfactor != 0) {
      for (size_t j = 0; j < n + m; ++j) {
        if (tab[leave][j] != 0) red[j] -= rfactor * tab[leave][j];
      }
    }
    basis[leave] = enter;
  }

  Rat objective = 0;
  for (size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) objective += tab[i][n + m];
  }
  if (objective == 0) {
    result.status = Feasibility::Status::kFeasible;
    result.witness.assign(n, Rat(0));
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < n) result.witness[basis[i]] = tab[i][n + m];
    }
  } else {
    result.status = Feasibility::Status::kInfeasible;
    // pi_k = 1 - reduced cost of artificial k; y = sign-adjusted pi mapped
    // back to the original rows.
    result.certificate.assign(sys.num_rows(), Rat(0));
    for (size_t k = 0; k < m; ++k) {
      const Rat pi = 1 - red[n + k];
      result.certificate[elim.kept[k]] = sign[k] * pi;
    }
  }
  return result;
}

bool check_witness(const LpSystem& sys, const std::vector<Rat>& witness) {
  if (witness.size() != sys.num_vars()) return false;
  for (const auto& w : witness) {
    if (w < 0) return false;
  }
  for (size_t r = 0; r < sys.num_rows(); ++r) {
    Rat lhs = 0;
    for (size_t j = 0; j < sys.num_vars(); ++j) {
      if (sys.coeffs[r][j] != 0) lhs += sys.coeffs[r][j] * witness[j];
    }
    if (lhs != sys.rhs[r]) return false;
  }
  return true;
}

bool check_certificate(const LpSystem& sys, const std::vector<Rat>& y) {
  if (y.size() != sys.num_rows()) return false;
  for (size_t j = 0; j < sys.num_vars(); ++j) {
    Rat col = 0;
    for (size_t r = 0; r < sys.num_rows(); ++r) {
      if (y[r] != 0 && sys.coeffs[r][j] != 0) col += y[r] * sys.coeffs[r][j];
    }
    if (col > 0) return false;
  }
  Rat value = 0;
  for (size_t r = 0; r < sys.num_rows(); ++r) value += y[r] * sys.rhs[r];
  return value > 0;
}

std::string dump_text(const LpSystem& sys) {
  std::string out;
  for (size_t r = 0; r < sys.num_rows(); ++r) {
    out += sys.row_names[r];
    out += ": ";
    bool first = true;
    for (size_t j = 0; j < sys.num_vars(); ++j) {
      if (sys.coeffs[r][j] == 0) continue;
      if (!first) out += " + ";
      out += format_rat(sys.coeffs[r][j]) + "*" + sys.var_names[j];
      first = false;
    }
    if (first) out += "0";
    out += " = " + format_rat(sys.rhs[r]) + "\n";
  }
  out += "all variables >= 0\n";
  return out;
}

std::string Feasibility::to_json() const {
  nlohmann::json j;
  j["status"] =
      status == Status::kFeasible ? "feasible" : "infeasible";
  j["rank"] = rank;
  j["rows_dropped"] = rows_dropped;
  j["pivots"] = pivots;
  if (status == Status::kFeasible) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& v : witness) w.push_back(format_rat(v));
    j["witness"] = std::move(w);
  } else {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& v : certificate) c.push_back(format_rat(v));
    j["certificate"] = std::move(c);
  }
  return j.dump();
}

}  // namespace ccdp
