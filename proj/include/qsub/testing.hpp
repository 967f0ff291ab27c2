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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "qsub/clifford.hpp"
#include "qsub/dense.hpp"
#include "qsub/pauli.hpp"
#include "qsub/phasepoly.hpp"
#include "qsub/random.hpp"

namespace qsub {

enum class Problem { Itp, Ptp, Ctp };
enum class Promise { Pauli, Clifford };
enum class Verdict { Accept, Reject };

inline const char* problem_name(Problem p) {
  switch (p) {
    case Problem::Itp: return "itp";
    case Problem::Ptp: return "ptp";
    case Problem::Ctp: return "ctp";
  }
  return "?";
}

inline const char* verdict_name(Verdict v) { return v == Verdict::Accept ? "accept" : "reject"; }

inline Verdict verdict_of(bool accept) { return accept ? Verdict::Accept : Verdict::Reject; }

/*******************************************************************************
 * ORACLE HANDLE
 ******************************************************************************/

/**
 * Black-box access to U, backed by a Clifford circuit or a dense matrix.
 * Every apply or apply_inverse counts as one query.
 */
class OracleHandle {
 public:
  explicit OracleHandle(CliffordCircuit c)
      : n_(c.n()), q_(c.q()), circuit_(std::move(c)) {}
  explicit OracleHandle(DenseUnitary u) : n_(u.n()), q_(u.q()), dense_(std::move(u)) {}

  std::size_t n() const { return n_; }
  std::int64_t q() const { return q_; }
  bool is_circuit() const { return circuit_.has_value(); }
  const CliffordCircuit& circuit() const { return *circuit_; }
  std::size_t query_count() const { return queries_; }

  /** rows ← U · rows, i.e. U on register A of a d × (anything) state. */
  void apply(ComplexMatrix& rows) {
    ++queries_;
    if (circuit_) {
      for (const auto& g : circuit_->gates()) apply_gate(rows, g, n_, q_);
    } else {
      rows = dense_->matrix() * rows;
    }
  }

  /** rows ← U† · rows. */
  void apply_inverse(ComplexMatrix& rows) {
    ++queries_;
    if (circuit_) {
      const auto inverse = dagger(*circuit_);
      for (const auto& g : inverse.gates()) apply_gate(rows, g, n_, q_);
    } else {
      rows = dense_->matrix().adjoint() * rows;
    }
  }

  /**
   * One run of the EPR test, returning its acceptance probability. Uses the
   * statevector when (q^n)² fits the cap and otherwise, for circuits, the
   * exact trace |τ̂|². Either way it costs one query.
   */
  double epr_query(std::size_t cap = default_dim_cap()) {
    if (statevector_fits(cap)) {
      return epr_statevector_probability(n_, q_, [this](ComplexMatrix& s) { apply(s); }, cap);
    }
    if (!circuit_) throw CapExceeded(dimension_squared(), cap);
    ++queries_;
    return std::norm(exact_trace(*circuit_).to_complex());
  }

  /** |τ̂(U)|², exact for circuits. Costs one query. */
  double epr_query_analytic(std::size_t cap = default_dim_cap()) {
    ++queries_;
    if (circuit_) return std::norm(exact_trace(*circuit_).to_complex());
    checked_dimension(n_, q_, cap);
    return std::norm(normalized_trace(*dense_));
  }

  /** The full matrix. White-box access, so no query is charged. */
  DenseUnitary materialize(std::size_t cap = default_dim_cap()) const {
    if (circuit_) return circuit_to_dense(*circuit_, cap);
    checked_dimension(n_, q_, cap);
    return *dense_;
  }

 private:
  std::size_t dimension_squared() const {
    std::size_t d = 1;
    for (std::size_t i = 0; i < 2 * n_; ++i) d *= static_cast<std::size_t>(q_);
    return d;
  }
  bool statevector_fits(std::size_t cap) const {
    std::size_t d = 1;
    for (std::size_t i = 0; i < 2 * n_; ++i) {
      d *= static_cast<std::size_t>(q_);
      if (d > cap) return false;
    }
    return true;
  }

  std::size_t n_;
  std::int64_t q_;
  std::optional<CliffordCircuit> circuit_;
  std::optional<DenseUnitary> dense_;
  std::size_t queries_ = 0;
};

/*******************************************************************************
 * TESTERS
 ******************************************************************************/

struct TesterReport {
  Verdict verdict = Verdict::Reject;
  double declared_completeness = 1.0;
  double declared_soundness = 0.0;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::size_t queries = 0;

  bool accepted() const { return verdict == Verdict::Accept; }
};

/** A randomized decision procedure with declared completeness c and soundness s. */
struct Tester {
  std::string name;
  double completeness = 1.0;
  double soundness = 0.0;
  std::function<TesterReport(OracleHandle&, std::uint64_t)> run;
};

enum class EprRun { Sampled, Deterministic };

/**
 * EPR identity test repeated `reps` times, accepting iff every run accepts.
 * Sampled runs draw each outcome from the run's acceptance probability.
 * Deterministic runs accept iff that probability is at least 1 − 1e-9.
 */
inline TesterReport bb_promise_identity_test(
    OracleHandle& h, Promise promise, std::size_t reps, std::uint64_t seed,
    EprRun mode = EprRun::Sampled, std::size_t cap = default_dim_cap()) {
  if (reps == 0) throw InvalidArgument("reps must be at least 1");
  TesterReport r;
  r.repetitions = reps;
  r.seed = seed;
  r.declared_completeness = 1.0;
  r.declared_soundness =
      promise == Promise::Pauli ? 0.0 : std::pow(static_cast<double>(h.q()), -static_cast<double>(reps));
  const std::size_t before = h.query_count();
  bool accept = true;
  for (std::size_t k = 0; k < reps; ++k) {
    if (mode == EprRun::Deterministic) {
      accept = accept && h.epr_query_analytic(cap) >= 1.0 - 1e-9;
    } else {
      const double p = h.epr_query(cap);
      Rng rng(derive_seed(seed, k));
      accept = accept && bernoulli(rng, p);
    }
  }
  r.verdict = verdict_of(accept);
  r.queries = h.query_count() - before;
  return r;
}

inline Tester bb_tester(Promise promise, std::size_t reps, std::int64_t q,
                        EprRun mode = EprRun::Sampled) {
  Tester t;
  t.name = promise == Promise::Pauli ? "epr[pauli]" : "epr[clifford]";
  t.completeness = 1.0;
  t.soundness = promise == Promise::Pauli ? 0.0 : std::pow(static_cast<double>(q), -static_cast<double>(reps));
  t.run = [promise, reps, mode](OracleHandle& h, std::uint64_t seed) {
    return bb_promise_identity_test(h, promise, reps, seed, mode);
  };
  return t;
}

/** Declared (c, s) of running two testers and accepting iff both accept. */
inline std::pair<double, double> composed_parameters(double c1, double s1, double c2, double s2) {
  return {c1 * c2, s1 + s2 - s1 * s2};
}

/**
 * Tester for 𝓖 from a tester for 𝓖′ and a promise tester for (𝓖′, 𝓖).
 * Both always run, on independent seed streams.
 */
inline Tester compose_testers(const Tester& big, const Tester& promise) {
  Tester t;
  t.name = big.name + "+" + promise.name;
  std::tie(t.completeness, t.soundness) =
      composed_parameters(big.completeness, big.soundness, promise.completeness, promise.soundness);
  t.run = [big, promise, c = t.completeness, s = t.soundness](OracleHandle& h, std::uint64_t seed) {
    const auto r1 = big.run(h, derive_seed(seed, 1));
    const auto r2 = promise.run(h, derive_seed(seed, 2));
    TesterReport r;
    r.verdict = verdict_of(r1.accepted() && r2.accepted());
    r.declared_completeness = c;
    r.declared_soundness = s;
    r.repetitions = r1.repetitions + r2.repetitions;
    r.seed = seed;
    r.queries = r1.queries + r2.queries;
    return r;
  };
  return t;
}

/*******************************************************************************
 * EXACT DECIDERS
 ******************************************************************************/

/** Single-wire generators X_i (i < n) and Z_i as dense matrices. */
inline std::vector<DenseUnitary> dense_generators(std::size_t n, std::int64_t q, std::size_t cap) {
  std::vector<DenseUnitary> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pauli_to_dense(PauliOperator::x_on(n, q, i), cap));
  for (std::size_t i = 0; i < n; ++i) out.push_back(pauli_to_dense(PauliOperator::z_on(n, q, i), cap));
  return out;
}

/**
 * Ground-truth membership of U in 𝓘, 𝓘𝓟 or 𝓘𝓒. Dense when q^n fits the cap.
 * Larger circuits fall back to the conjugation tableau, which is exact too.
 */
inline bool decide_exact(const OracleHandle& h, Problem problem, std::size_t cap = default_dim_cap()) {
  bool fits = true;
  try {
    checked_dimension(h.n(), h.q(), cap);
  } catch (const CapExceeded&) {
    if (!h.is_circuit()) throw;
    fits = false;
  }
  if (!fits) {
    switch (problem) {
      case Problem::Itp: return wb_identity_test(h.circuit());
      case Problem::Ptp: return wb_pauli_test(h.circuit());
      case Problem::Ctp: return true;
    }
  }
  const auto u = h.materialize(cap);
  switch (problem) {
    case Problem::Itp: return is_identity_up_to_phase(u);
    case Problem::Ptp: return is_pauli_up_to_phase(u);
    case Problem::Ctp:
      for (const auto& g : dense_generators(h.n(), h.q(), cap)) {
        if (!is_pauli_up_to_phase(u * g * u.adjoint())) return false;
      }
      return true;
  }
  return false;
}

/** decide_exact as a tester with (c, s) = (1, 0). */
inline Tester exact_solver(Problem problem) {
  Tester t;
  t.name = std::string("exact[") + problem_name(problem) + "]";
  t.completeness = 1.0;
  t.soundness = 0.0;
  t.run = [problem](OracleHandle& h, std::uint64_t seed) {
    TesterReport r;
    r.verdict = verdict_of(decide_exact(h, problem));
    r.seed = seed;
    return r;
  };
  return t;
}

/**
 * Synthetic tester of known (c, s): accepts members with probability exactly
 * c and non-members with probability exactly s.
 */
inline Tester coin_solver(Problem problem, double c, double s) {
  Tester t;
  t.name = std::string("coin[") + problem_name(problem) + "]";
  t.completeness = c;
  t.soundness = s;
  t.run = [problem, c, s](OracleHandle& h, std::uint64_t seed) {
    TesterReport r;
    Rng rng(seed);
    r.verdict = verdict_of(bernoulli(rng, decide_exact(h, problem) ? c : s));
    r.declared_completeness = c;
    r.declared_soundness = s;
    r.seed = seed;
    return r;
  };
  return t;
}

/**
 * Certified non-member used when a reduction must output a NO instance:
 * X₀ is not in 𝓘, and CNOT (F on one qudit) is not in 𝓘𝓟.
 */
inline CliffordCircuit karp_dummy(Problem problem, std::size_t n, std::int64_t q) {
  CliffordCircuit c(n, q);
  if (problem == Problem::Itp) {
    c.append(Gate::x(0));
  } else if (n >= 2) {
    c.append(Gate::cnot(0, 1));
  } else {
    c.append(Gate::f(0));
  }
  return c;
}

/*******************************************************************************
 * REDUCTIONS
 ******************************************************************************/

/** ITP via a PTP tester and the EPR test under the Pauli promise. */
inline Tester itp_via_ptp(const Tester& ptp_solver, std::int64_t q, EprRun mode = EprRun::Sampled) {
  return compose_testers(ptp_solver, bb_tester(Promise::Pauli, 1, q, mode));
}

/** ITP via a CTP tester and the EPR test under the Clifford promise. */
inline Tester itp_via_ctp(const Tester& ctp_solver, std::int64_t q, EprRun mode = EprRun::Sampled) {
  return compose_testers(ctp_solver, bb_tester(Promise::Clifford, 1, q, mode));
}

inline TesterReport reduce_itp_to_ptp(const Tester& ptp_solver, OracleHandle& h, std::uint64_t seed,
                                      EprRun mode = EprRun::Sampled) {
  return itp_via_ptp(ptp_solver, h.q(), mode).run(h, seed);
}

inline TesterReport reduce_itp_to_ctp(const Tester& ctp_solver, OracleHandle& h, std::uint64_t seed,
                                      EprRun mode = EprRun::Sampled) {
  return itp_via_ctp(ctp_solver, h.q(), mode).run(h, seed);
}

/**
 * Dense counterpart of build_ctp_to_ptp_circuit for matrix inputs:
 * ⊗_i (U·X_i·U†) ⊗ ⊗_i (U·Z_i·U†).
 */
inline DenseUnitary build_ctp_to_ptp_dense(const DenseUnitary& u, std::size_t cap = default_dim_cap()) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < 2 * u.n() * u.n(); ++i) {
    total *= static_cast<std::size_t>(u.q());
    if (total > cap) throw CapExceeded(total, cap);
  }
  std::optional<DenseUnitary> out;
  for (const auto& g : dense_generators(u.n(), u.q(), cap)) {
    const auto block = u * g * u.adjoint();
    out = out ? kron(*out, block) : block;
  }
  return *out;
}

/** CTP through PTP on the generator-conjugation instance. Declared (c, s) unchanged. */
inline TesterReport reduce_ctp_to_ptp(const OracleHandle& h, const Tester& ptp_solver, std::uint64_t seed) {
  OracleHandle reduced = h.is_circuit() ? OracleHandle(build_ctp_to_ptp_circuit(h.circuit()))
                                        : OracleHandle(build_ctp_to_ptp_dense(h.materialize()));
  auto r = ptp_solver.run(reduced, seed);
  r.declared_completeness = ptp_solver.completeness;
  r.declared_soundness = ptp_solver.soundness;
  return r;
}

/** The commutator instance C·P·C†·P† for circuit or matrix backing. */
inline OracleHandle commutator_instance(const OracleHandle& h, const PauliOperator& p) {
  if (h.is_circuit()) return OracleHandle(build_commutator_circuit(h.circuit(), p));
  const auto u = h.materialize();
  const auto pd = pauli_to_dense(p);
  return OracleHandle(u * pd * u.adjoint() * pd.adjoint());
}

/** Declared soundness of the PTP-to-ITP reduction from an ITP tester's s. */
inline double ptp_via_itp_soundness(double s, std::int64_t q) {
  return s + (1.0 - s) / static_cast<double>(q);
}

/** PTP through ITP on the commutator with a uniformly drawn basis Pauli. */
inline TesterReport reduce_ptp_to_itp(const OracleHandle& h, const Tester& itp_solver, std::uint64_t seed) {
  const auto p = sample_basis_pauli(h.n(), h.q(), derive_seed(seed, 0));
  auto instance = commutator_instance(h, p);
  auto r = itp_solver.run(instance, derive_seed(seed, 1));
  r.declared_completeness = itp_solver.completeness;
  r.declared_soundness = ptp_via_itp_soundness(itp_solver.soundness, h.q());
  r.seed = seed;
  return r;
}

/**
 * Exact acceptance probability of reduce_ptp_to_itp with the exact ITP
 * decider, by enumerating all q^{2n} basis Paulis.
 */
inline Fraction ptp_via_itp_exhaustive(const OracleHandle& h) {
  const std::size_t n = h.n();
  const std::int64_t q = h.q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < 2 * n; ++i) total *= static_cast<std::uint64_t>(q);
  std::uint64_t hits = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    PauliOperator p(n, q);
    std::uint64_t rest = idx;
    for (std::size_t w = 0; w < 2 * n; ++w) {
      const auto digit = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(q));
      rest /= static_cast<std::uint64_t>(q);
      if (w < n) {
        p.set_x(w, digit);
      } else {
        p.set_z(w - n, digit);
      }
    }
    hits += decide_exact(commutator_instance(h, p), Problem::Itp) ? 1 : 0;
  }
  return {hits, total};
}

/*******************************************************************************
 * TRIALS AND SERIALIZATION
 ******************************************************************************/

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t accepts = 0;
  std::size_t queries = 0;

  double rate() const { return trials ? static_cast<double>(accepts) / static_cast<double>(trials) : 0.0; }
  /** Binomial standard deviation of the rate at true probability p. */
  static double sigma(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
};

/** Runs `trials` independent trials, each on a fresh handle from `make_handle`. */
inline TrialSummary run_trials(const std::function<TesterReport(OracleHandle&, std::uint64_t)>& run,
                               const std::function<OracleHandle()>& make_handle, std::size_t trials,
                               std::uint64_t seed) {
  TrialSummary out;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    auto h = make_handle();
    const auto r = run(h, derive_seed(seed, k));
    out.accepts += r.accepted() ? 1 : 0;
    out.queries += h.query_count();
  }
  return out;
}

inline nlohmann::json result_json(const TesterReport& r, const TrialSummary& t) {
  return {
      {"verdict", verdict_name(r.verdict)},
      {"declared", {{"c", r.declared_completeness}, {"s", r.declared_soundness}}},
      {"empirical", {{"accept_rate", t.rate()}, {"trials", t.trials}}},
      {"queries", r.queries},
  };
}

}  // namespace qsub
