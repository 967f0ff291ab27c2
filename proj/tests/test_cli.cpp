// Copyright 2026 The qsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <string>

#include "qsub/testing.hpp"

namespace qsub {
namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`. stderr is folded into the output when `merge` is set.
RunResult run_cli(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(QSUB_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(QSUB_SAMPLES) + "/" + name; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qsub_cli_test_" + name);
}

TEST(CliTrace, IdentityAndPhaseGate) {
  const auto id = run_cli("trace --both " + sample("identity.qc"));
  EXPECT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("agreement: yes"), std::string::npos);
  EXPECT_NE(id.out.find("|tau| = 1\n"), std::string::npos);
  const auto s = run_cli("--format json trace " + sample("s_gate.qc"));
  ASSERT_EQ(s.code, 0);
  const auto j = nlohmann::json::parse(s.out);
  EXPECT_NEAR(j.at("abs").get<double>(), std::sqrt(0.5), 1e-9);
}

TEST(CliTrace, ExactAndDenseOnlyModes) {
  EXPECT_EQ(run_cli("trace --exact " + sample("bell_prep.qc")).code, 0);
  EXPECT_EQ(run_cli("trace --dense " + sample("bell_prep.qc")).code, 0);
  EXPECT_EQ(run_cli("trace --exact --dense " + sample("bell_prep.qc")).code, 2);
}

TEST(CliTrace, MalformedInputReportsLine) {
  const auto r = run_cli("trace " + sample("malformed.qc"), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 5"), std::string::npos);
  EXPECT_EQ(run_cli("trace " + sample("does_not_exist.qc")).code, 2);
}

TEST(CliEpr, Modes) {
  EXPECT_EQ(run_cli("epr " + sample("identity.qc")).out, "1\n");
  EXPECT_EQ(run_cli("epr --mode analytic " + sample("s_gate.qc")).out, "0.5\n");
  EXPECT_EQ(run_cli("epr --mode statevector " + sample("s_gate.qc")).out, "0.5\n");
  const auto x = run_cli("--format json epr --mode sample --shots 1000 --seed 3 " + sample("x_gate.qc"));
  ASSERT_EQ(x.code, 0);
  const auto j = nlohmann::json::parse(x.out);
  EXPECT_EQ(j.at("accepts").get<int>(), 0);
  EXPECT_EQ(j.at("shots").get<int>(), 1000);
  EXPECT_EQ(j.at("wilson95").size(), 2U);
}

TEST(CliEpr, MatrixInput) {
  const auto t = run_cli("epr " + sample("t_gate.json"));
  ASSERT_EQ(t.code, 0);
  EXPECT_NEAR(std::stod(t.out), std::norm(normalized_trace(t_gate())), 1e-9);
}

TEST(CliWb, FourierSquaredAccepts) {
  const auto r = run_cli("wb " + sample("ff.qc"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at("verdict"), "accept");
  EXPECT_EQ(nlohmann::json::parse(run_cli("wb " + sample("s_gate.qc")).out).at("verdict"), "reject");
}

TEST(CliReduce, CtpToPtpOutputIsAcceptedByExactPtp) {
  const auto out = temp_file("ctp.qc");
  ASSERT_EQ(run_cli("reduce --from ctp --to ptp -o " + out.string() + " " + sample("s_gate.qc")).code, 0);
  std::ifstream in(out);
  const auto c = parse_circuit(in);
  EXPECT_EQ(c.n(), 2U);
  EXPECT_TRUE(wb_pauli_test(c));
  const auto r = run_cli("decide --problem ptp " + out.string());
  EXPECT_EQ(nlohmann::json::parse(r.out).at("verdict"), "accept");
  std::filesystem::remove(out);
}

TEST(CliReduce, CtpToPtpOnMatrixInputRejects) {
  const auto out = temp_file("ctp.json");
  ASSERT_EQ(run_cli("reduce --from ctp --to ptp -o " + out.string() + " " + sample("t_gate.json")).code, 0);
  const auto r = run_cli("decide --problem ptp " + out.string());
  EXPECT_EQ(nlohmann::json::parse(r.out).at("verdict"), "reject");
  std::filesystem::remove(out);
}

TEST(CliReduce, PtpToItpEmitsCommutator) {
  const auto r = run_cli("reduce --from ptp --to itp --seed 4 " + sample("x_gate.qc"), true);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sampled Pauli: "), std::string::npos);
  const auto circuit_text = r.out.substr(r.out.find("qudits"));
  EXPECT_TRUE(wb_identity_test(parse_circuit(circuit_text)));
}

TEST(CliReduce, ItpToPtpRunsComposedTester) {
  const auto r = run_cli("reduce --from itp --to ptp --trials 50 " + sample("ff.qc"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("verdict"), "accept");
  EXPECT_DOUBLE_EQ(j.at("empirical").at("accept_rate").get<double>(), 1.0);
  EXPECT_EQ(run_cli("reduce --from ptp --to ctp " + sample("ff.qc")).code, 2);
}

TEST(CliDecide, PhaseGateUnderCliffordPromise) {
  constexpr int kTrials = 2000;
  const auto r = run_cli("decide --problem itp --promise clifford --reps 8 --trials 2000 --seed 1 " +
                         sample("s_gate.qc"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double p = std::pow(0.5, 8);
  EXPECT_EQ(j.at("verdict"), "reject");
  EXPECT_DOUBLE_EQ(j.at("declared").at("s").get<double>(), p);
  EXPECT_LE(j.at("empirical").at("accept_rate").get<double>(), p + 4 * TrialSummary::sigma(p, kTrials));
  EXPECT_EQ(j.at("queries").get<int>(), 8);
}

TEST(CliDecide, SchemaAndUsageErrors) {
  const auto j = nlohmann::json::parse(run_cli("decide --problem ctp " + sample("s_gate.qc")).out);
  for (const char* key : {"verdict", "declared", "empirical", "queries"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j.at("declared").contains("c"));
  EXPECT_TRUE(j.at("declared").contains("s"));
  EXPECT_TRUE(j.at("empirical").contains("accept_rate"));
  EXPECT_TRUE(j.at("empirical").contains("trials"));
  EXPECT_EQ(run_cli("decide --problem itp --promise unitary " + sample("s_gate.qc")).code, 2);
  EXPECT_EQ(run_cli("decide --problem ptp --promise pauli " + sample("s_gate.qc")).code, 2);
  EXPECT_EQ(run_cli("decide --problem bogus " + sample("s_gate.qc")).code, 2);
  EXPECT_EQ(run_cli("").code, 2);
}

TEST(CliRandom, RoundTripsThroughTrace) {
  const auto out = temp_file("random.qc");
  ASSERT_EQ(run_cli("random --n 2 --q 5 --depth 20 --seed 9 -o " + out.string()).code, 0);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(format_circuit(parse_circuit(text)), text);
  EXPECT_EQ(parse_circuit(text), random_clifford_circuit(2, 5, 20, 9));
  EXPECT_EQ(run_cli("trace --both " + out.string()).code, 0);
  std::filesystem::remove(out);
  EXPECT_EQ(run_cli("random --n 2 --q 4").code, 2);
}

TEST(CliCap, ExceededExitsWithResourceCode) {
  const auto out = temp_file("big.qc");
  ASSERT_EQ(run_cli("random --n 3 --q 5 --depth 5 -o " + out.string()).code, 0);
  const auto r = run_cli("--cap 100 trace --dense " + out.string(), true);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("exceeds cap"), std::string::npos);
  EXPECT_EQ(run_cli("--cap 100 trace --exact " + out.string()).code, 0);
  std::filesystem::remove(out);
}

TEST(CliSelftest, QuickRunPasses) {
  const auto r = run_cli("selftest");
  EXPECT_EQ(r.code, 0);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_NE(r.out.find("PASS criterion " + std::to_string(k) + " "), std::string::npos) << k;
  }
}

}  // namespace
}  // namespace qsub
