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

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "ccdp/mechanism.h"
#include "json.hpp"

namespace ccdp {
namespace {

struct CliResult {
  int exit_code;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CCDP_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_rr2(const std::string& name) {
  const std::string path = testing::TempDir() + name;
  save_mechanism(*rr_pure(Rat(2)), path);
  return path;
}

TEST(CliTest, BoundBasic) {
  const auto r = run_cli("bound basic --eps 0.5,0.3");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_DOUBLE_EQ(j["eps_g"].get<double>(), 0.8);
  EXPECT_DOUBLE_EQ(j["delta_g"].get<double>(), 0.0);
  EXPECT_EQ(j["theorem"], "basic-pure");
}

TEST(CliTest, BoundHybridEchoesScales) {
  const auto r = run_cli("bound hybrid --params 0.1:0.01,0.2:0.001");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_EQ(j["scales"].size(), 2u);
  EXPECT_TRUE(j.contains("permutation"));
  EXPECT_TRUE(j.contains("convenience_delta"));
}

TEST(CliTest, BoundOptimalPureAndApprox) {
  const auto pure = run_cli("bound optimal --eps 0.5,0.5 --delta-g 0.01");
  EXPECT_EQ(pure.exit_code, 0);
  const auto jp = nlohmann::json::parse(pure.stdout_text);
  EXPECT_EQ(jp["theorem"], "optimal-pure");
  EXPECT_GT(jp["eps_g"].get<double>(), 0.5);
  EXPECT_LT(jp["eps_g"].get<double>(), 1.0);

  const auto approx = run_cli(
      "bound optimal --eps 0.5,0.5 --delta-g 0.05 "
      "--noninteractive-delta 0.01,0.01");
  EXPECT_EQ(approx.exit_code, 0);
  const auto ja = nlohmann::json::parse(approx.stdout_text);
  EXPECT_EQ(ja["theorem"], "optimal-approx-noninteractive");
  EXPECT_TRUE(ja["noninteractive_only"].get<bool>());
}

TEST(CliTest, BoundCompareEmitsCsv) {
  const auto r =
      run_cli("bound compare --eps 0.005 --k-max 5 --delta-g 1e-5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.stdout_text.rfind("k,eps_basic", 0), 0u);
}

TEST(CliTest, PrivLossOnRandomizedResponseFile) {
  const std::string path = write_rr2("rr2.json");
  const auto r = run_cli("privloss --mechanism " + path + " --delta 0");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_EQ(j["u"], "2/1");
  EXPECT_NEAR(j["eps"].get<double>(), 0.6931471805599453, 1e-12);
  EXPECT_EQ(j["adversaries"], 1);
}

TEST(CliTest, SimulateRrVerify) {
  const std::string path = write_rr2("rr2v.json");
  const auto r = run_cli("simulate-rr --mechanism " + path + " --verify");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_EQ(j["status"], "pass");
  EXPECT_EQ(j["adversaries_checked"], 1);
}

TEST(CliTest, LpCheckFeasibleAtPrivLoss) {
  const std::string path = testing::TempDir() + "tr.json";
  TwoRoundParams p;
  p.p0 = Prob(Rat(2, 3));
  p.p0p = Prob(Rat(1, 3));
  p.p00 = p.p01 = p.p10 = p.p11 = Prob(Rat(1, 2));
  p.p00p = p.p01p = p.p10p = p.p11p = Prob(Rat(1, 2));
  save_mechanism(*two_round(p), path);
  const auto r = run_cli("lp-check --mechanism " + path + " --delta 1/20");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_EQ(j["status"], "feasible");
}

TEST(CliTest, ExperimentSummaryJson) {
  const auto r = run_cli(
      "--seed 5 experiment rr-feasibility --trials 3 --delta 1/20");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.stdout_text);
  EXPECT_EQ(j["trials"], 3);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["delta"], "1/20");
}

TEST(CliTest, ExitCodes) {
  // Usage error: unknown flag.
  EXPECT_EQ(run_cli("bound basic --nope 1").exit_code, 1);
  // Computation error: disjoint supports at delta 0.
  const std::string path = testing::TempDir() + "disjoint.json";
  TwoRoundParams p;
  p.p0 = Prob(Rat(1));
  p.p0p = Prob(Rat(0));
  p.p00 = p.p01 = p.p10 = p.p11 = Prob(Rat(1, 2));
  p.p00p = p.p01p = p.p10p = p.p11p = Prob(Rat(1, 2));
  save_mechanism(*two_round(p), path);
  EXPECT_EQ(run_cli("privloss --mechanism " + path + " --delta 0").exit_code,
            2);
  // Invariant violation: malformed mechanism file.
  const std::string bad = testing::TempDir() + "bad.json";
  std::ofstream(bad) << "{\"version\": 1}";
  EXPECT_EQ(run_cli("privloss --mechanism " + bad + " --delta 0").exit_code,
            3);
}

TEST(CliTest, OutputFileOption) {
  const std::string out = testing::TempDir() + "basic.json";
  const auto r = run_cli("--output " + out + " bound basic --eps 0.1");
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream in(out);
  ASSERT_TRUE(in.good());
  nlohmann::json j;
  in >> j;
  EXPECT_NEAR(j["eps_g"].get<double>(), 0.1, 1e-12);
}

}  // namespace
}  // namespace ccdp
