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

// End-to-end property checks shared by the acceptance binary and `qsub selftest`.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qsub/clifford.hpp"
#include "qsub/dense.hpp"
#include "qsub/phasepoly.hpp"
#include "qsub/testing.hpp"

namespace qsub::acceptance {

struct Sizes {
  std::size_t circuits_per_cell = 200;
  std::size_t max_depth = 40;
  std::size_t adversarial = 50;
  std::size_t random_quadratics = 500;
  std::size_t epr_shots = 10000;
  std::size_t non_pauli_unitaries = 50;
  std::size_t reduction_circuits = 50;
  std::size_t monte_carlo_trials = 10000;
  std::size_t decomposition_unitaries = 100;
  std::uint64_t seed = 0;

  /** Smaller instance counts for a quick smoke run. */
  static Sizes quick() {
    Sizes s;
    s.circuits_per_cell = 20;
    s.adversarial = 10;
    s.random_quadratics = 50;
    s.non_pauli_unitaries = 12;
    s.reduction_circuits = 10;
    s.monte_carlo_trials = 4000;
    s.decomposition_unitaries = 12;
    return s;
  }
};

struct Outcome {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

constexpr std::int64_t kArities[] = {2, 3, 5};

/** Seeded random circuit k of cell (q, n), depth in [0, max_depth]. */
inline CliffordCircuit sample_circuit(std::int64_t q, std::size_t n, std::size_t k, const Sizes& sz) {
  const std::uint64_t cell = static_cast<std::uint64_t>(q) * 16 + n;
  const std::uint64_t seed = derive_seed(derive_seed(sz.seed, cell), k);
  return random_clifford_circuit(n, q, seed % (sz.max_depth + 1), seed);
}

inline void for_each_sample(const Sizes& sz,
                            const std::function<void(const CliffordCircuit&, std::int64_t, std::size_t)>& f) {
  for (std::int64_t q : kArities) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t k = 0; k < sz.circuits_per_cell; ++k) f(sample_circuit(q, n, k, sz), q, n);
    }
  }
}

/** True iff x is 0 or q^{j/2} for an integer j, within tol. */
inline bool is_zero_or_root_power(double x, std::int64_t q, double tol) {
  if (x <= tol) return true;
  const double j = std::round(2.0 * std::log(x) / std::log(static_cast<double>(q)));
  return std::abs(x - std::pow(static_cast<double>(q), j / 2.0)) <= tol;
}

inline Outcome trace_discreteness(const Sizes& sz) {
  std::size_t checked = 0;
  std::size_t bad_shape = 0;
  std::size_t bad_exact = 0;
  double worst = 0.0;
  for_each_sample(sz, [&](const CliffordCircuit& c, std::int64_t q, std::size_t) {
    const auto dense = normalized_trace(circuit_to_dense(c));
    const auto exact = exact_trace(c).to_complex();
    ++checked;
    if (!is_zero_or_root_power(std::abs(dense), q, 1e-9)) ++bad_shape;
    const double err = std::abs(dense - exact);
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad_exact;
  });
  std::ostringstream d;
  d << checked << " circuits, " << bad_shape << " off-lattice, " << bad_exact
    << " exact/dense mismatches, max error " << worst;
  return {1, "trace discreteness", bad_shape == 0 && bad_exact == 0, d.str()};
}

inline Outcome identity_gap(const Sizes& sz) {
  std::size_t checked = 0;
  std::size_t bad = 0;
  std::size_t identities = 0;
  for_each_sample(sz, [&](const CliffordCircuit& c, std::int64_t q, std::size_t) {
    const double mag = std::abs(normalized_trace(circuit_to_dense(c)));
    const bool wb = wb_identity_test(c);
    ++checked;
    identities += wb ? 1 : 0;
    const bool ok = wb ? std::abs(mag - 1.0) <= 1e-9
                       : mag <= 1.0 / std::sqrt(static_cast<double>(q)) + 1e-9;
    bad += ok ? 0 : 1;
  });
  std::ostringstream d;
  d << checked << " circuits (" << identities << " identities), " << bad << " exceptions";
  return {2, "identity gap", bad == 0, d.str()};
}

inline Outcome epr_test(const Sizes& sz) {
  std::size_t bad = 0;
  std::size_t compared = 0;
  double worst = 0.0;
  std::ostringstream d;
  for_each_sample(sz, [&](const CliffordCircuit& c, std::int64_t q, std::size_t n) {
    if (std::pow(static_cast<double>(q), static_cast<double>(n)) > 64) return;
    OracleHandle h(c);
    const double sv = h.epr_query();
    const double an = epr_acceptance(circuit_to_dense(c));
    ++compared;
    worst = std::max(worst, std::abs(sv - an));
    if (std::abs(sv - an) > 1e-12 || h.query_count() != 1) ++bad;
  });
  d << compared << " statevector/analytic pairs, max gap " << worst;

  std::size_t pauli_bad = 0;
  for (std::int64_t q : kArities) {
    for (std::size_t n = 1; n <= 2; ++n) {
      for (std::uint64_t s = 0; s < 10; ++s) {
        auto p = sample_basis_pauli(n, q, derive_seed(sz.seed + 17, s));
        if (p.is_identity_up_to_phase()) p.set_x(0, 1);
        OracleHandle h(pauli_circuit(p));
        const double sv = h.epr_query();
        const double an = epr_acceptance(pauli_to_dense(p));
        if (sv > 1e-12 || an > 1e-12) ++pauli_bad;
      }
    }
  }
  d << "; " << pauli_bad << " non-identity Paulis above 0";

  const auto s_gate = circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)}));
  const double s_an = epr_acceptance(s_gate);
  const double s_sv = epr_acceptance(s_gate, {EprMode::Statevector});
  const bool s_ok = std::abs(s_an - 0.5) <= 1e-12 && std::abs(s_sv - 0.5) <= 1e-12;
  d << "; S gate " << s_an << "/" << s_sv;

  std::size_t sample_bad = 0;
  for (std::int64_t q : kArities) {
    const auto u = circuit_to_dense(CliffordCircuit(1, q, {Gate::s(0)}));
    const double p = epr_acceptance(u);
    const double rate = epr_acceptance(u, {EprMode::Sample, sz.epr_shots, derive_seed(sz.seed, 99)});
    if (std::abs(rate - p) > 4.0 * TrialSummary::sigma(p, sz.epr_shots)) ++sample_bad;
  }
  d << "; " << sample_bad << " sampled estimates outside 4 sigma";

  bool queries_ok = true;
  for (std::size_t reps : {1U, 3U, 8U}) {
    OracleHandle h(CliffordCircuit(1, 2, {Gate::s(0)}));
    const auto r = bb_promise_identity_test(h, Promise::Clifford, reps, sz.seed);
    queries_ok = queries_ok && r.queries == reps && h.query_count() == reps;
  }
  d << "; query counter " << (queries_ok ? "matches" : "differs from") << " reps";
  return {3, "EPR test", bad == 0 && pauli_bad == 0 && s_ok && sample_bad == 0 && queries_ok, d.str()};
}

/** Σ_x ω^{h(x)} over x ∈ {0..q-1}^k, with ω = i for the binary (mod 4) case. */
inline std::complex<double> brute_force_gauss_sum(const QuadraticPhasePolynomial& h, std::int64_t q) {
  const std::size_t k = h.num_vars();
  std::vector<std::int64_t> x(k, 0);
  std::complex<double> acc = 0;
  while (true) {
    acc += root_of_unity(h.evaluate(x), h.modulus());
    std::size_t i = 0;
    while (i < k && ++x[i] == q) x[i++] = 0;
    if (i == k) break;
  }
  return acc;
}

inline Outcome gauss_sums(const Sizes& sz) {
  std::size_t binary = 0;
  std::size_t binary_bad = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    const std::size_t pairs = k * (k - 1) / 2;
    const std::size_t combos = static_cast<std::size_t>(std::pow(4, k)) * (1U << pairs) * (1U << k) * 4;
    for (std::size_t code = 0; code < combos; ++code) {
      QuadraticPhasePolynomial h(4, k);
      std::size_t rest = code;
      for (std::size_t i = 0; i < k; ++i, rest /= 4) h.add_square(i, static_cast<std::int64_t>(rest % 4));
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j, rest /= 2) h.add_cross(i, j, 2 * static_cast<std::int64_t>(rest % 2));
      }
      for (std::size_t i = 0; i < k; ++i, rest /= 2) h.add_linear(i, 2 * static_cast<std::int64_t>(rest % 2));
      h.add_constant(static_cast<std::int64_t>(rest % 4));
      ++binary;
      if (std::abs(gauss_sum_binary(h).to_complex() - brute_force_gauss_sum(h, 2)) > 1e-9) ++binary_bad;
    }
  }
  std::size_t odd = 0;
  std::size_t odd_bad = 0;
  for (std::int64_t q : {3, 5, 7}) {
    Rng rng(derive_seed(sz.seed, 400 + static_cast<std::uint64_t>(q)));
    for (std::size_t t = 0; t < sz.random_quadratics; ++t) {
      const auto k = static_cast<std::size_t>(1 + uniform_below(rng, 3));
      QuadraticPhasePolynomial h(q, k);
      for (std::size_t i = 0; i < k; ++i) {
        h.add_square(i, uniform_below(rng, q));
        h.add_linear(i, uniform_below(rng, q));
        for (std::size_t j = i + 1; j < k; ++j) h.add_cross(i, j, uniform_below(rng, q));
      }
      h.add_constant(uniform_below(rng, q));
      ++odd;
      if (std::abs(gauss_sum_odd(h).to_complex() - brute_force_gauss_sum(h, q)) > 1e-9) ++odd_bad;
    }
  }
  std::ostringstream d;
  d << binary << " respectful binary polynomials (" << binary_bad << " mismatches), " << odd
    << " odd-q quadratics (" << odd_bad << " mismatches)";
  return {4, "Gauss sums", binary_bad == 0 && odd_bad == 0, d.str()};
}

/**
 * Identity-equivalent circuits R·R† with G·G† pairs spliced in, every other
 * one broken by dropping a single gate from one pair, plus (F·S)³ at q = 2,
 * which is a nontrivial global phase.
 */
inline std::vector<CliffordCircuit> adversarial_circuits(const Sizes& sz) {
  std::vector<CliffordCircuit> out;
  if (sz.adversarial > 0) {
    CliffordCircuit fs(1, 2);
    for (int r = 0; r < 3; ++r) fs.append(Gate::f(0)).append(Gate::s(0));
    out.push_back(fs);
  }
  for (std::size_t k = 1; k < sz.adversarial; ++k) {
    const std::uint64_t seed = derive_seed(sz.seed + 5, k);
    Rng rng(seed);
    const std::int64_t q = kArities[k % 3];
    const auto n = static_cast<std::size_t>(1 + uniform_below(rng, 3));
    const auto r = random_clifford_circuit(n, q, 1 + static_cast<std::size_t>(uniform_below(rng, 12)), seed);
    CliffordCircuit body = r;
    body.append(dagger(r));
    const bool broken = k % 2 == 1;
    CliffordCircuit c(n, q);
    const std::size_t victim = static_cast<std::size_t>(uniform_below(rng, static_cast<std::int64_t>(body.size()) + 1));
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i == victim) {
        const auto g = random_clifford_circuit(n, q, 1, seed + 1);
        CliffordCircuit pair = g;
        auto inv = dagger(g);
        if (broken) {
          pair = CliffordCircuit(n, q, {g.gates()[0], g.gates()[0]});
          inv = dagger(CliffordCircuit(n, q, {g.gates()[0]}));
        }
        c.append(pair).append(inv);
      }
      if (i < body.size()) c.append(body.gates()[i]);
    }
    out.push_back(c);
  }
  return out;
}

inline Outcome wb_test(const Sizes& sz) {
  std::size_t checked = 0;
  std::size_t disagreements = 0;
  auto check = [&](const CliffordCircuit& c) {
    ++checked;
    if (wb_identity_test(c) != is_identity_up_to_phase(circuit_to_dense(c))) ++disagreements;
  };
  for_each_sample(sz, [&](const CliffordCircuit& c, std::int64_t, std::size_t) { check(c); });
  std::size_t adversarial_identities = 0;
  for (const auto& c : adversarial_circuits(sz)) {
    check(c);
    adversarial_identities += wb_identity_test(c) ? 1 : 0;
  }
  std::ostringstream d;
  d << checked << " circuits (" << adversarial_identities << " adversarial identities), " << disagreements
    << " disagreements";
  return {5, "white-box test", disagreements == 0, d.str()};
}

/** The non-Pauli unitaries used by the commutator check. */
inline std::vector<DenseUnitary> non_pauli_unitaries(const Sizes& sz) {
  std::vector<DenseUnitary> out;
  const auto t = t_gate();
  const auto id = DenseUnitary::identity(1, 2);
  out.push_back(t);
  if (sz.non_pauli_unitaries > 1) out.push_back(kron(t, id));
  if (sz.non_pauli_unitaries > 2) out.push_back(kron(id, t));
  if (sz.non_pauli_unitaries > 3) out.push_back(kron(t, t));
  const std::size_t remaining = sz.non_pauli_unitaries > out.size() ? sz.non_pauli_unitaries - out.size() : 0;
  const std::size_t cliffords = remaining / 2;
  for (std::uint64_t s = 0; out.size() < 4 + cliffords; ++s) {
    const std::int64_t q = kArities[s % 3];
    const std::size_t n = 1 + (s / 3) % 2;
    const auto c = random_clifford_circuit(n, q, 12, derive_seed(sz.seed + 6, s));
    auto u = circuit_to_dense(c);
    if (!is_pauli_up_to_phase(u)) out.push_back(std::move(u));
  }
  for (std::uint64_t s = 0; out.size() < sz.non_pauli_unitaries; ++s) {
    const std::int64_t q = kArities[s % 3];
    const std::size_t n = 1 + (s / 3) % 2;
    out.push_back(random_unitary(n, q, derive_seed(sz.seed + 7, s)));
  }
  return out;
}

inline Outcome commutator_lemma(const Sizes& sz) {
  std::size_t bad = 0;
  const auto unitaries = non_pauli_unitaries(sz);
  for (const auto& u : unitaries) {
    const auto f = commutator_identity_probability(u);
    if (f.numerator * static_cast<std::uint64_t>(u.q()) > f.denominator) ++bad;
  }
  const auto tf = commutator_identity_probability(t_gate());
  const bool tight = tf == Fraction{1, 2};
  std::ostringstream d;
  d << unitaries.size() << " non-Pauli unitaries, " << bad << " above 1/q; T gate gives " << tf.numerator << "/"
    << tf.denominator;
  return {6, "commutator lemma", bad == 0 && tight, d.str()};
}

inline Outcome reductions(const Sizes& sz) {
  std::ostringstream d;
  std::size_t ctop_bad = 0;
  std::size_t ctop_cross = 0;
  for (std::size_t k = 0; k < sz.reduction_circuits; ++k) {
    const std::int64_t q = k % 2 == 0 ? 2 : 3;
    const std::size_t n = 1 + (k / 2) % 2;
    const auto c = random_clifford_circuit(n, q, 20, derive_seed(sz.seed + 8, k));
    const auto reduced = build_ctp_to_ptp_circuit(c);
    if (!decide_exact(OracleHandle(reduced), Problem::Ptp)) ++ctop_bad;
    if (std::pow(static_cast<double>(q), static_cast<double>(reduced.n())) <= static_cast<double>(default_dim_cap())) {
      ++ctop_cross;
      if (!wb_pauli_test(reduced)) ++ctop_bad;
    }
  }
  d << "CtoP: " << ctop_bad << " of " << sz.reduction_circuits << " emitted circuits fail PTP (" << ctop_cross
    << " also checked densely)";

  std::size_t ptoi_bad = 0;
  std::vector<OracleHandle> handles;
  handles.emplace_back(t_gate());
  handles.emplace_back(CliffordCircuit(1, 2, {Gate::f(0)}));
  handles.emplace_back(CliffordCircuit(1, 3, {Gate::s(0)}));
  handles.emplace_back(CliffordCircuit(2, 2, {Gate::cnot(0, 1)}));
  handles.emplace_back(CliffordCircuit(1, 5, {Gate::x(0), Gate::z(0)}));
  handles.emplace_back(random_unitary(1, 3, sz.seed + 9));
  for (const auto& h : handles) {
    if (!(ptp_via_itp_exhaustive(h) == commutator_identity_probability(h.materialize()))) ++ptoi_bad;
  }
  d << "; PtoI exhaustive: " << ptoi_bad << " of " << handles.size() << " differ from the commutator fraction";

  // Stochastic ITP solver with (c, s) = (1, 0.3) on the T gate, where exactly
  // half the basis Paulis commute, so the declared soundness bound is tight.
  const double c_itp = 1.0;
  const double s_itp = 0.3;
  const auto coin = coin_solver(Problem::Itp, c_itp, s_itp);
  const double declared = ptp_via_itp_soundness(s_itp, 2);
  const auto frac = commutator_identity_probability(t_gate());
  const double predicted = frac.value() * c_itp + (1.0 - frac.value()) * s_itp;
  const auto mc = run_trials([&](OracleHandle& h, std::uint64_t s) { return reduce_ptp_to_itp(h, coin, s); },
                             [] { return OracleHandle(t_gate()); }, sz.monte_carlo_trials, sz.seed + 10);
  const double sigma = TrialSummary::sigma(predicted, sz.monte_carlo_trials);
  const bool ptoi_mc = std::abs(mc.rate() - predicted) <= 3 * sigma && mc.rate() <= declared + 3 * sigma &&
                       std::abs(predicted - declared) < 1e-12;
  d << "; PtoI Monte Carlo " << mc.rate() << " vs declared " << declared;

  // Composition: coin PTP tester (0.9, 0.4) with coin promise tester (0.8, 0.3).
  const auto composite = compose_testers(coin_solver(Problem::Ptp, 0.9, 0.4), coin_solver(Problem::Itp, 0.8, 0.3));
  const auto [cc, cs] = composed_parameters(0.9, 0.4, 0.8, 0.3);
  bool comp_ok = std::abs(composite.completeness - cc) < 1e-15 && std::abs(composite.soundness - cs) < 1e-15;
  struct Case {
    std::function<OracleHandle()> make;
    double truth;
    bool yes;
  };
  const std::vector<Case> cases = {
      {[] { return OracleHandle(CliffordCircuit(1, 2)); }, 0.9 * 0.8, true},
      {[] { return OracleHandle(CliffordCircuit(1, 2, {Gate::x(0)})); }, 0.9 * 0.3, false},
      {[] { return OracleHandle(t_gate()); }, 0.4 * 0.3, false},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto t = run_trials(composite.run, cases[i].make, sz.monte_carlo_trials, sz.seed + 11 + i);
    const double sg = TrialSummary::sigma(cases[i].truth, sz.monte_carlo_trials);
    comp_ok = comp_ok && std::abs(t.rate() - cases[i].truth) <= 3 * sg;
    comp_ok = comp_ok && (cases[i].yes ? t.rate() >= cc - 3 * sg : t.rate() <= cs + 3 * sg);
  }
  d << "; composition " << (comp_ok ? "within" : "outside") << " 3 sigma";
  return {7, "reductions", ctop_bad == 0 && ptoi_bad == 0 && ptoi_mc && comp_ok, d.str()};
}

inline Outcome pauli_decomposition(const Sizes& sz) {
  struct Shape {
    std::int64_t q;
    std::size_t n;
  };
  const std::vector<Shape> shapes = {{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 1},
                                     {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 1}, {7, 2}};
  double worst_rec = 0.0;
  double worst_parseval = 0.0;
  for (std::size_t k = 0; k < sz.decomposition_unitaries; ++k) {
    const auto sh = shapes[k % shapes.size()];
    const auto u = random_unitary(sh.n, sh.q, derive_seed(sz.seed + 12, k));
    const auto dec = pauli_decompose(u);
    worst_rec = std::max(worst_rec, (reconstruct(dec) - u.matrix()).cwiseAbs().maxCoeff());
    worst_parseval = std::max(worst_parseval, std::abs(dec.squared_norm() - 1.0));
  }
  std::ostringstream d;
  d << sz.decomposition_unitaries << " unitaries, max reconstruction error " << worst_rec
    << ", max Parseval error " << worst_parseval;
  return {8, "Pauli decomposition", worst_rec < 1e-9 && worst_parseval <= 1e-9, d.str()};
}

inline std::vector<Outcome> run_all(const Sizes& sz) {
  return {trace_discreteness(sz), identity_gap(sz),   epr_test(sz),   gauss_sums(sz),
          wb_test(sz),            commutator_lemma(sz), reductions(sz), pauli_decomposition(sz)};
}

inline std::string format_outcome(const Outcome& o) {
  return std::string(o.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(o.id) + " (" + o.name +
         "): " + o.detail;
}

}  // namespace qsub::acceptance
