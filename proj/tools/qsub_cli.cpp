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

// qsub: command-line front end.
//
// Exit codes: 0 ok, 1 claim mismatch, 2 usage or parse error, 3 dimension cap exceeded.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qsub/acceptance.hpp"
#include "qsub/qsub.hpp"

namespace {

using namespace qsub;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Input {
  std::optional<CliffordCircuit> circuit;
  std::optional<DenseUnitary> matrix;

  OracleHandle handle() const { return circuit ? OracleHandle(*circuit) : OracleHandle(*matrix); }
  std::size_t n() const { return circuit ? circuit->n() : matrix->n(); }
  std::int64_t q() const { return circuit ? circuit->q() : matrix->q(); }
};

/** Matrix JSON if the path ends in .json or the content starts with '{', else a circuit file. */
Input load_input(const std::string& path, std::size_t cap) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) ||
                    (first != std::string::npos && text[first] == '{');
  Input out;
  if (json) {
    std::istringstream is(text);
    out.matrix = load_unitary(is, cap);
  } else {
    out.circuit = parse_circuit(text);
  }
  return out;
}

CliffordCircuit require_circuit(const Input& in, const std::string& what) {
  if (!in.circuit) throw UsageError(what + " needs a circuit file");
  return *in.circuit;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string complex_str(std::complex<double> z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/** 95% Wilson score interval for k successes in n trials. */
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Problem parse_problem(const std::string& s) {
  static const std::map<std::string, Problem> table = {
      {"itp", Problem::Itp}, {"ptp", Problem::Ptp}, {"ctp", Problem::Ctp}};
  const auto it = table.find(s);
  if (it == table.end()) throw UsageError("unknown problem '" + s + "'");
  return it->second;
}

struct Options {
  std::size_t cap = default_dim_cap();
  std::string format = "text";
  std::string file;
  std::string out;
  std::string trace_mode = "both";
  std::string epr_mode = "analytic";
  std::size_t shots = 10000;
  std::uint64_t seed = 0;
  std::string problem = "itp";
  std::string promise = "none";
  std::size_t reps = 1;
  std::size_t trials = 1000;
  std::string from;
  std::string to;
  std::size_t n = 1;
  std::int64_t q = 2;
  std::size_t depth = 10;
  bool full = false;
};

int cmd_trace(const Options& o) {
  const auto c = require_circuit(load_input(o.file, o.cap), "trace");
  const bool want_exact = o.trace_mode != "dense";
  const bool want_dense = o.trace_mode != "exact";
  nlohmann::json j;
  std::optional<std::complex<double>> exact_value;
  std::optional<std::complex<double>> dense_value;
  if (want_exact) {
    const auto t = exact_trace(c);
    exact_value = t.to_complex();
    j["exact"] = t.is_zero() ? nlohmann::json{{"zero", true}}
                             : nlohmann::json{{"zero", false},
                                              {"half_power", t.half_power()},
                                              {"phase_exp", t.phase_exp()},
                                              {"L", t.root_order()}};
    if (o.format == "text") std::cout << "exact: " << t.str() << " = " << complex_str(*exact_value) << "\n";
  }
  if (want_dense) {
    dense_value = normalized_trace(circuit_to_dense(c, o.cap));
    j["dense"] = {{"re", dense_value->real()}, {"im", dense_value->imag()}};
    if (o.format == "text") std::cout << "dense: " << complex_str(*dense_value) << "\n";
  }
  const double mag = std::abs(exact_value ? *exact_value : *dense_value);
  j["abs"] = mag;
  int code = kOk;
  if (exact_value && dense_value) {
    const double err = std::abs(*exact_value - *dense_value);
    j["error"] = err;
    if (err > 1e-9) code = kMismatch;
    if (o.format == "text") std::cout << "agreement: " << (code == kOk ? "yes" : "NO") << " (error " << err << ")\n";
  }
  if (o.format == "text") {
    std::cout << "|tau| = " << std::setprecision(12) << mag << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return code;
}

int cmd_epr(const Options& o) {
  const auto in = load_input(o.file, o.cap);
  nlohmann::json j;
  j["mode"] = o.epr_mode;
  if (o.epr_mode == "analytic") {
    auto h = in.handle();
    j["probability"] = h.epr_query_analytic(o.cap);
  } else if (o.epr_mode == "statevector" || o.epr_mode == "sample") {
    const auto u = in.handle().materialize(o.cap);
    const double p = epr_acceptance(u, {EprMode::Statevector, 0, 0, o.cap});
    if (o.epr_mode == "statevector") {
      j["probability"] = p;
    } else {
      const double rate = sample_acceptance(p, o.shots, o.seed);
      const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(o.shots)));
      const auto [lo, hi] = wilson_interval(k, o.shots);
      j["accepts"] = k;
      j["shots"] = o.shots;
      j["seed"] = o.seed;
      j["rate"] = rate;
      j["wilson95"] = {lo, hi};
    }
  } else {
    throw UsageError("unknown EPR mode '" + o.epr_mode + "'");
  }
  if (o.format == "json") {
    std::cout << j.dump() << "\n";
  } else if (j.contains("probability")) {
    std::cout << std::setprecision(12) << j["probability"].get<double>() << "\n";
  } else {
    std::cout << j["accepts"] << "/" << j["shots"] << " accepted, rate " << j["rate"].get<double>()
              << ", 95% Wilson interval [" << j["wilson95"][0].get<double>() << ", "
              << j["wilson95"][1].get<double>() << "]\n";
  }
  return kOk;
}

/** Runs `t` for `trials` trials; the verdict is that of trial 0. */
nlohmann::json run_reported(const Tester& t, const Input& in, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw UsageError("--trials must be positive");
  std::optional<TesterReport> first;
  const auto summary = run_trials(
      [&](OracleHandle& h, std::uint64_t s) {
        auto r = t.run(h, s);
        if (!first) first = r;
        return r;
      },
      [&] { return in.handle(); }, trials, seed);
  auto j = result_json(*first, summary);
  j["tester"] = t.name;
  return j;
}

int cmd_decide(const Options& o) {
  const auto in = load_input(o.file, o.cap);
  const auto problem = parse_problem(o.problem);
  Tester t;
  if (o.promise == "none") {
    t = exact_solver(problem);
  } else if (problem != Problem::Itp) {
    throw UsageError("promise testing is only defined for --problem itp");
  } else if (o.promise == "pauli") {
    t = bb_tester(Promise::Pauli, o.reps, in.q());
  } else if (o.promise == "clifford") {
    t = bb_tester(Promise::Clifford, o.reps, in.q());
  } else {
    throw UsageError("unknown promise '" + o.promise + "'");
  }
  if (o.reps == 0) throw UsageError("--reps must be positive");
  const std::size_t trials = o.promise == "none" ? 1 : o.trials;
  auto j = run_reported(t, in, trials, o.seed);
  j["problem"] = o.problem;
  j["promise"] = o.promise;
  std::cout << j.dump() << "\n";
  return kOk;
}

int cmd_wb(const Options& o) {
  const auto c = require_circuit(load_input(o.file, o.cap), "wb");
  const bool accept = wb_identity_test(c);
  TesterReport r;
  r.verdict = verdict_of(accept);
  TrialSummary s{1, accept ? 1U : 0U, 0};
  auto j = result_json(r, s);
  j["tester"] = "wb-identity";
  std::cout << j.dump() << "\n";
  return kOk;
}

int cmd_reduce(const Options& o) {
  const auto in = load_input(o.file, o.cap);
  if (o.from == "ctp" && o.to == "ptp") {
    if (in.circuit) {
      write_output(o.out, format_circuit(build_ctp_to_ptp_circuit(*in.circuit)));
    } else {
      write_output(o.out, unitary_to_json(build_ctp_to_ptp_dense(*in.matrix, o.cap)).dump() + "\n");
    }
    return kOk;
  }
  if (o.from == "ptp" && o.to == "itp") {
    const auto c = require_circuit(in, "reduce --from ptp");
    const auto p = sample_basis_pauli(c.n(), c.q(), derive_seed(o.seed, 0));
    std::cerr << "sampled Pauli: " << p.str() << "\n";
    write_output(o.out, format_circuit(build_commutator_circuit(c, p)));
    return kOk;
  }
  if (o.from == "itp" && (o.to == "ptp" || o.to == "ctp")) {
    const auto t = o.to == "ptp" ? itp_via_ptp(exact_solver(Problem::Ptp), in.q())
                                 : itp_via_ctp(exact_solver(Problem::Ctp), in.q());
    auto j = run_reported(t, in, o.trials, o.seed);
    j["reduction"] = o.from + "->" + o.to;
    write_output(o.out, j.dump() + "\n");
    return kOk;
  }
  throw UsageError("unsupported reduction " + o.from + " -> " + o.to);
}

int cmd_random(const Options& o) {
  if (!is_prime(o.q)) throw UsageError("--q must be prime");
  if (o.n == 0) throw UsageError("--n must be positive");
  write_output(o.out, format_circuit(random_clifford_circuit(o.n, o.q, o.depth, o.seed)));
  return kOk;
}

int cmd_selftest(const Options& o) {
  auto sizes = o.full ? acceptance::Sizes{} : acceptance::Sizes::quick();
  sizes.seed = o.seed;
  bool ok = true;
  for (const auto& r : acceptance::run_all(sizes)) {
    std::cout << acceptance::format_outcome(r) << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsub: subgroup testing of qudit Clifford circuits"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--cap", o.cap, "Dense dimension cap (default $QSUB_DIM_CAP or 4096)")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* trace = app.add_subcommand("trace", "Normalized trace of a circuit");
  trace->add_option("file", o.file, "Circuit file")->required();
  auto* g = trace->add_option_group("mode");
  g->add_flag_callback("--exact", [&] { o.trace_mode = "exact"; }, "Exact Gauss-sum value only");
  g->add_flag_callback("--dense", [&] { o.trace_mode = "dense"; }, "Dense value only");
  g->add_flag_callback("--both", [&] { o.trace_mode = "both"; }, "Both, exit 1 if they differ");
  g->require_option(0, 1);

  auto* epr = app.add_subcommand("epr", "EPR identity-test acceptance probability");
  epr->add_option("file", o.file, "Circuit or matrix file")->required();
  epr->add_option("--mode", o.epr_mode)->check(CLI::IsMember({"analytic", "statevector", "sample"}));
  epr->add_option("--shots", o.shots)->check(CLI::PositiveNumber);
  epr->add_option("--seed", o.seed);

  auto* decide = app.add_subcommand("decide", "Decide membership, exactly or by a promise tester");
  decide->add_option("file", o.file, "Circuit or matrix file")->required();
  decide->add_option("--problem", o.problem)->check(CLI::IsMember({"itp", "ptp", "ctp"}));
  decide->add_option("--promise", o.promise, "none, pauli or clifford");
  decide->add_option("--reps", o.reps)->check(CLI::PositiveNumber);
  decide->add_option("--trials", o.trials, "Trials for the empirical rate")->check(CLI::PositiveNumber);
  decide->add_option("--seed", o.seed);

  auto* wb = app.add_subcommand("wb", "White-box identity test");
  wb->add_option("file", o.file, "Circuit file")->required();

  auto* reduce = app.add_subcommand("reduce", "Apply a reduction");
  reduce->add_option("file", o.file, "Circuit or matrix file")->required();
  reduce->add_option("--from", o.from)->required();
  reduce->add_option("--to", o.to)->required();
  reduce->add_option("-o,--output", o.out, "Output path (default stdout)");
  reduce->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  reduce->add_option("--seed", o.seed);

  auto* random = app.add_subcommand("random", "Seeded random Clifford circuit");
  random->add_option("--n", o.n)->required();
  random->add_option("--q", o.q)->required();
  random->add_option("--depth", o.depth);
  random->add_option("--seed", o.seed);
  random->add_option("-o,--output", o.out, "Output path (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");
  selftest->add_flag("--full", o.full, "Full instance counts");
  selftest->add_option("--seed", o.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  // Library calls that take the cap as a defaulted argument read it from the environment.
  setenv("QSUB_DIM_CAP", std::to_string(o.cap).c_str(), 1);

  try {
    if (*trace) return cmd_trace(o);
    if (*epr) return cmd_epr(o);
    if (*decide) return cmd_decide(o);
    if (*wb) return cmd_wb(o);
    if (*reduce) return cmd_reduce(o);
    if (*random) return cmd_random(o);
    if (*selftest) return cmd_selftest(o);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
