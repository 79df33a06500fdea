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

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccdp/adversary.h"
#include "ccdp/bounds.h"
#include "ccdp/composition.h"
#include "ccdp/errors.h"
#include "ccdp/experiments.h"
#include "ccdp/lp.h"
#include "ccdp/mechanism.h"
#include "ccdp/rr_sim.h"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace ccdp;

constexpr long kMaxCliDenominator = 1'000'000;

struct GlobalOptions {
  uint64_t seed = 1;
  std::string output;
  std::string format = "json";
};

// Writes payload to --output or stdout.
void emit(const GlobalOptions& opts, const std::string& payload) {
  if (opts.output.empty() || opts.output == "-") {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(opts.output, std::ios::binary);
    if (!out) throw ParseError("cannot write output file '" + opts.output + "'");
    out << payload;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> eps;
  for (const auto& tok : split_list(s)) {
    eps.push_back(rat_to_double(rat_from_decimal(tok)));
  }
  return eps;
}

// Decimal eps -> exact rational scale e^eps approximated with denominator
// <= 10^6; the conversion is echoed in the output meta.
Rat scale_from_eps(double eps) {
  if (eps < 0 || !std::isfinite(eps)) {
    throw ParameterError("eps must be finite and nonnegative");
  }
  std::ostringstream s;
  s.precision(17);
  s << std::exp(eps);
  return approximate_rat(rat_from_decimal(s.str()), Int(kMaxCliDenominator));
}

// Accepts "num/den" or a decimal; decimals convert exactly, then reduce to
// denominator <= 10^6.
Rat parse_scale_arg(const std::string& s) {
  Rat r = s.find('/') != std::string::npos ? parse_rat(s)
                                           : approximate_rat(
                                                 rat_from_decimal(s),
                                                 Int(kMaxCliDenominator));
  if (r < 1) throw ParameterError("scale must be >= 1, got " + s);
  return r;
}

Prob parse_prob_arg(const std::string& s) {
  Rat r = s.find('/') != std::string::npos ? parse_rat(s) : rat_from_decimal(s);
  if (r < 0 || r > 1) throw ParameterError("probability out of [0,1]: " + s);
  return Prob(r);
}

std::shared_ptr<const TableMechanism> load_mechanism_arg(
    const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return parse_mechanism(buf.str());
  }
  return load_mechanism(path);
}

json bound_result_json(const BoundResult& r) {
  json j;
  j["theorem"] = bound_theorem_name(r.theorem);
  j["eps_g"] = r.eps_g;
  if (r.scale_g) {
    j["scale_g"] = format_rat(*r.scale_g);
    j["delta_g"] = format_rat(r.delta_g);
    j["delta_g_float"] = rat_to_double(r.delta_g);
  } else {
    j["delta_g"] = rat_to_double(r.delta_g);
  }
  if (r.permutation) j["permutation"] = *r.permutation;
  if (r.convenience_delta) {
    j["convenience_delta"] = format_rat(*r.convenience_delta);
  }
  if (r.noninteractive_only) j["noninteractive_only"] = true;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Exact verification engine for composing interactive differentially "
      "private mechanisms"};
  app.require_subcommand(1);
  GlobalOptions opts;
  app.add_option("--seed", opts.seed, "Global seed for randomized runs");
  app.add_option("--output", opts.output, "Write data output to this path");
  app.add_option("--format", opts.format, "Output format (json|csv)")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- bound ----
  auto* bound = app.add_subcommand("bound", "Closed-form composition bounds");
  bound->require_subcommand(1);

  std::string basic_eps;
  auto* bound_basic = bound->add_subcommand(
      "basic", "Basic composition for pure DP: the epsilons add, delta_g = 0");
  bound_basic->add_option("--eps", basic_eps, "Comma-separated eps list")
      ->required();

  std::string hybrid_params;
  auto* bound_hybrid = bound->add_subcommand(
      "hybrid",
      "Hybrid-argument bound for approximate DP: eps_g is the sum, delta_g "
      "is minimized exactly over mechanism orderings");
  bound_hybrid
      ->add_option("--params", hybrid_params,
                   "Comma-separated eps:delta pairs, e.g. 0.1:0.01,0.2:0")
      ->required();

  std::string optimal_eps, optimal_delta_g, optimal_deltas;
  auto* bound_optimal = bound->add_subcommand(
      "optimal",
      "Optimal composition bound via the randomized-response reduction "
      "(exact piecewise solve in the scale domain)");
  bound_optimal->add_option("--eps", optimal_eps, "Comma-separated eps list")
      ->required();
  bound_optimal->add_option("--delta-g", optimal_delta_g, "Target delta_g")
      ->required();
  bound_optimal->add_option(
      "--noninteractive-delta", optimal_deltas,
      "Per-mechanism delta list; switches to the approximate bound, which "
      "is proven for noninteractive mechanisms only");

  double cmp_eps = 0.005;
  int cmp_kmax = 100;
  double cmp_delta_g = 1e-5;
  auto* bound_compare = bound->add_subcommand(
      "compare",
      "Per-k table comparing the summed bound against the optimal bound");
  bound_compare->add_option("--eps", cmp_eps, "Per-mechanism eps")->required();
  bound_compare->add_option("--k-max", cmp_kmax, "Largest k")->required();
  bound_compare->add_option("--delta-g", cmp_delta_g, "Target delta_g")
      ->required();

  // ---- privloss ----
  std::string pl_mechanism, pl_delta;
  auto* privloss_cmd = app.add_subcommand(
      "privloss",
      "Exact privacy loss: least eps such that the mechanism is "
      "(eps,delta)-DP, maximized over all deterministic adversaries");
  privloss_cmd->add_option("--mechanism", pl_mechanism,
                           "Mechanism file ('-' for stdin)")
      ->required();
  privloss_cmd->add_option("--delta", pl_delta, "delta (rational or decimal)")
      ->required();

  // ---- concomp ----
  std::string cc_mechanisms, cc_out;
  bool cc_ordered = false;
  auto* concomp_cmd = app.add_subcommand(
      "concomp",
      "Concurrent composition of mechanism files (tagged queries j:q); "
      "--ordered builds the round-robin form instead");
  concomp_cmd->add_option("--mechanisms", cc_mechanisms,
                          "Comma-separated mechanism files")
      ->required();
  concomp_cmd->add_option("--out", cc_out, "Output mechanism file")
      ->required();
  concomp_cmd->add_flag("--ordered", cc_ordered,
                        "Round-robin ordered composition");

  // ---- simulate-rr ----
  std::string sim_mechanism, sim_scale, sim_out;
  bool sim_verify = false;
  auto* simulate_cmd = app.add_subcommand(
      "simulate-rr",
      "Build the interactive post-processing simulator that reproduces a "
      "pure-DP mechanism from one randomized-response bit");
  simulate_cmd->add_option("--mechanism", sim_mechanism,
                           "Mechanism file ('-' for stdin)")
      ->required();
  simulate_cmd->add_option("--scale", sim_scale,
                           "Scale u = e^eps (default: exact PrivLoss)");
  simulate_cmd->add_option("--out", sim_out, "Write the simulator here");
  simulate_cmd->add_flag("--verify", sim_verify,
                         "Check the mixture identity for every adversary");

  // ---- lp-check ----
  std::string lp_mechanism, lp_delta, lp_scale;
  bool lp_dump = false;
  auto* lp_cmd = app.add_subcommand(
      "lp-check",
      "Exact feasibility of simulating a 2-round mechanism by interactive "
      "post-processing of approximate randomized response");
  lp_cmd->add_option("--mechanism", lp_mechanism,
                     "Mechanism file ('-' for stdin)")
      ->required();
  lp_cmd->add_option("--delta", lp_delta, "delta (rational or decimal)")
      ->required();
  lp_cmd->add_option("--scale", lp_scale,
                     "Scale u = e^eps (default: exact PrivLoss at delta)");
  lp_cmd->add_flag("--dump-system", lp_dump,
                   "Also dump the constraint rows as text to stderr");

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "Seeded study harness");
  experiment->require_subcommand(1);

  uint64_t exp_trials = 2000;
  std::string exp_delta = "1/20";
  bool exp_shrink = false;
  std::string exp_trials_csv;
  auto* exp_rr = experiment->add_subcommand(
      "rr-feasibility",
      "Sample 2-round mechanisms, compute exact PrivLoss, and solve the "
      "randomized-response feasibility system for each");
  exp_rr->add_option("--trials", exp_trials, "Number of trials");
  exp_rr->add_option("--delta", exp_delta, "delta (default 1/20)");
  exp_rr->add_flag("--shrink-scale", exp_shrink,
                   "Rebuild each system at (1+u)/2 below the PrivLoss scale");
  exp_rr->add_option("--trials-out", exp_trials_csv,
                     "Write the per-trial CSV to this path");

  double bc_eps = 0.005;
  int bc_kmax = 1000;
  double bc_delta_g = 1e-5;
  auto* exp_bounds = experiment->add_subcommand(
      "compare-bounds",
      "Emit the bound-comparison CSV with the dominance check");
  exp_bounds->add_option("--eps", bc_eps, "Per-mechanism eps");
  exp_bounds->add_option("--k-max", bc_kmax, "Largest k");
  exp_bounds->add_option("--delta-g", bc_delta_g, "Target delta_g");

  CLI11_PARSE(app, argc, argv);

  if (bound_basic->parsed()) {
    BoundResult r = basic_pure(parse_eps_list(basic_eps));
    json j = bound_result_json(r);
    j.erase("scale_g");
    emit(opts, j.dump());
    return 0;
  }
  if (bound_hybrid->parsed()) {
    std::vector<PrivacyParams> params;
    json scales = json::array();
    for (const auto& pair : split_list(hybrid_params)) {
      const size_t colon = pair.find(':');
      if (colon == std::string::npos) {
        throw ParameterError("--params entries must look like eps:delta");
      }
      const double eps = rat_to_double(rat_from_decimal(pair.substr(0, colon)));
      PrivacyParams p{scale_from_eps(eps),
                      parse_prob_arg(pair.substr(colon + 1))};
      scales.push_back(format_rat(p.scale));
      params.push_back(std::move(p));
    }
    BoundResult r = hybrid_delta(params);
    json j = bound_result_json(r);
    j["scales"] = std::move(scales);
    emit(opts, j.dump());
    return 0;
  }
  if (bound_optimal->parsed()) {
    std::vector<Rat> scales;
    json echoed = json::array();
    for (double eps : parse_eps_list(optimal_eps)) {
      scales.push_back(scale_from_eps(eps));
      echoed.push_back(format_rat(scales.back()));
    }
    const Prob delta_g = parse_prob_arg(optimal_delta_g);
    BoundResult r;
    if (optimal_deltas.empty()) {
      r = optimal_pure(scales, delta_g);
    } else {
      std::vector<PrivacyParams> params;
      const auto deltas = split_list(optimal_deltas);
      if (deltas.size() != scales.size()) {
        throw ParameterError("--noninteractive-delta length mismatch");
      }
      for (size_t i = 0; i < scales.size(); ++i) {
        params.push_back({scales[i], parse_prob_arg(deltas[i])});
      }
      r = optimal_approx_noninteractive(params, delta_g);
    }
    json j = bound_result_json(r);
    j["scales"] = std::move(echoed);
    emit(opts, j.dump());
    return 0;
  }
  if (bound_compare->parsed()) {
    emit(opts, curves_to_csv(compare_curves(cmp_eps, cmp_kmax, cmp_delta_g)));
    return 0;
  }
  if (privloss_cmd->parsed()) {
    auto m = load_mechanism_arg(pl_mechanism);
    PrivLossResult r = priv_loss(*m, parse_prob_arg(pl_delta));
    json j;
    j["u"] = format_rat(r.scale);
    j["eps"] = r.eps;
    j["delta"] = parse_prob_arg(pl_delta).str();
    j["adversaries"] = r.adversaries;
    emit(opts, j.dump());
    return 0;
  }
  if (concomp_cmd->parsed()) {
    std::vector<MechanismPtr> parts;
    for (const auto& path : split_list(cc_mechanisms)) {
      parts.push_back(load_mechanism_arg(path));
    }
    MechanismPtr composed =
        cc_ordered ? ordered_concomp(parts) : concomp(parts);
    auto table = materialize(*composed);
    save_mechanism(*table, cc_out);
    json j;
    j["rounds"] = table->rounds();
    j["mechanisms"] = parts.size();
    j["ordered"] = cc_ordered;
    j["out"] = cc_out;
    emit(opts, j.dump());
    return 0;
  }
  if (simulate_cmd->parsed()) {
    auto m = load_mechanism_arg(sim_mechanism);
    const Rat scale = sim_scale.empty()
                          ? priv_loss(*m, Prob(Rat(0))).scale
                          : parse_scale_arg(sim_scale);
    auto simulator = build_simulator(*m, scale);
    if (!sim_out.empty()) save_mechanism(*simulator, sim_out);
    if (sim_verify) {
      SimulationReport report = verify_simulation(*m, *simulator, scale);
      json j = json::parse(report.to_json());
      j["scale"] = format_rat(scale);
      if (!sim_out.empty()) j["out"] = sim_out;
      emit(opts, j.dump());
      return report.pass ? 0 : 2;
    }
    json j;
    j["scale"] = format_rat(scale);
    j["rounds"] = simulator->rounds();
    if (!sim_out.empty()) j["out"] = sim_out;
    emit(opts, j.dump());
    return 0;
  }
  if (lp_cmd->parsed()) {
    auto m = load_mechanism_arg(lp_mechanism);
    const Prob delta = parse_prob_arg(lp_delta);
    const Rat scale = lp_scale.empty() ? priv_loss(*m, delta).scale
                                       : parse_scale_arg(lp_scale);
    LpSystem sys = build_system(*m, scale, delta);
    if (lp_dump) std::cerr << dump_text(sys);
    Feasibility feas = solve_feasibility(sys);
    const bool ok =
        feas.status == Feasibility::Status::kFeasible
            ? check_witness(sys, feas.witness)
            : check_certificate(sys, feas.certificate);
    if (!ok) {
      throw InvariantViolation("solver output failed exact re-validation");
    }
    json j = json::parse(feas.to_json());
    j["scale"] = format_rat(scale);
    j["delta"] = delta.str();
    emit(opts, j.dump());
    return 0;
  }
  if (exp_rr->parsed()) {
    RrFeasibilityOptions options;
    options.trials = exp_trials;
    options.delta = parse_prob_arg(exp_delta);
    options.seed = opts.seed;
    options.shrink_scale = exp_shrink;
    RrFeasibilityResult result = run_rr_feasibility(options);
    if (!exp_trials_csv.empty()) {
      std::ofstream out(exp_trials_csv, std::ios::binary);
      if (!out) {
        throw ParseError("cannot write trials file '" + exp_trials_csv + "'");
      }
      out << trials_to_csv(result.records);
    }
    if (opts.format == "csv") {
      emit(opts, trials_to_csv(result.records));
    } else {
      emit(opts, summary_to_json(result.summary));
    }
    return 0;
  }
  if (exp_bounds->parsed()) {
    BoundComparison cmp = run_bound_comparison(bc_eps, bc_kmax, bc_delta_g);
    emit(opts, cmp.csv);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
