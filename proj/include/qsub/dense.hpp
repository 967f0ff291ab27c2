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

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <istream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qsub/clifford.hpp"
#include "qsub/errors.hpp"
#include "qsub/pauli.hpp"
#include "qsub/random.hpp"

namespace qsub {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

constexpr std::size_t kDefaultDimCap = 4096;

/** The dense dimension cap: $QSUB_DIM_CAP when set to a positive integer, else 4096. */
inline std::size_t default_dim_cap() {
  if (const char* env = std::getenv("QSUB_DIM_CAP")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimCap;
}

/** q^n, throwing CapExceeded when it is larger than `cap`. */
inline std::size_t checked_dimension(std::size_t n, std::int64_t q, std::size_t cap) {
  std::size_t d = 1;
  for (std::size_t i = 0; i < n; ++i) {
    d *= static_cast<std::size_t>(q);
    if (d > cap) throw CapExceeded(d, cap);
  }
  return d;
}

/** e^{2πi k/m} */
inline Complex root_of_unity(std::int64_t k, std::int64_t m) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(reduce(k, m)) /
                             static_cast<double>(m));
}

/** A q^n × q^n unitary. Basis index Σ_w x_w q^{n-1-w}: wire 0 is most significant. */
class DenseUnitary {
 public:
  static constexpr double kUnitarityTol = 1e-9;

  /** Validates U·U† = I within `tol`. */
  DenseUnitary(std::size_t n, std::int64_t q, ComplexMatrix m, double tol = kUnitarityTol)
      : DenseUnitary(Unchecked{}, n, q, std::move(m)) {
    const auto d = static_cast<Eigen::Index>(dimension());
    const double err = (m_ * m_.adjoint() - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (!(err <= tol)) {
      throw InvalidArgument("matrix is not unitary (error " + std::to_string(err) + ")");
    }
  }

  static DenseUnitary identity(std::size_t n, std::int64_t q) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < n; ++i) d *= static_cast<std::size_t>(q);
    const auto di = static_cast<Eigen::Index>(d);
    return DenseUnitary(Unchecked{}, n, q, ComplexMatrix::Identity(di, di));
  }

  /** For matrices unitary by construction (gate products, QR factors). */
  static DenseUnitary trusted(std::size_t n, std::int64_t q, ComplexMatrix m) {
    return DenseUnitary(Unchecked{}, n, q, std::move(m));
  }

  std::size_t n() const { return n_; }
  std::int64_t q() const { return q_; }
  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  DenseUnitary adjoint() const { return trusted(n_, q_, m_.adjoint()); }

  DenseUnitary operator*(const DenseUnitary& other) const {
    if (other.n_ != n_ || other.q_ != q_) throw DimensionMismatch("unitary shapes differ");
    return trusted(n_, q_, m_ * other.m_);
  }

 private:
  struct Unchecked {};
  DenseUnitary(Unchecked, std::size_t n, std::int64_t q, ComplexMatrix m)
      : n_(n), q_(q), m_(std::move(m)) {
    require_prime(q);
    std::size_t d = 1;
    for (std::size_t i = 0; i < n; ++i) d *= static_cast<std::size_t>(q);
    if (m_.rows() != m_.cols() || static_cast<std::size_t>(m_.rows()) != d) {
      throw DimensionMismatch("matrix is not q^n × q^n");
    }
  }

  std::size_t n_;
  std::int64_t q_;
  ComplexMatrix m_;
};

/*******************************************************************************
 * GATE APPLICATION
 ******************************************************************************/

/** Digit of wire `w` in basis index `i`. */
inline std::int64_t wire_digit(std::size_t i, std::size_t w, std::size_t n, std::int64_t q) {
  std::size_t stride = 1;
  for (std::size_t k = w + 1; k < n; ++k) stride *= static_cast<std::size_t>(q);
  return static_cast<std::int64_t>((i / stride) % static_cast<std::size_t>(q));
}

/**
 * rows ← G · rows for a gate on n qudits. `rows` has q^n rows and any number
 * of columns, so this serves both U ← G·U and |ψ⟩_AB ← (G ⊗ I)|ψ⟩_AB with
 * ψ reshaped as a d × d matrix.
 */
inline void apply_gate(ComplexMatrix& rows, const Gate& g, std::size_t n, std::int64_t q) {
  const auto d = static_cast<std::size_t>(rows.rows());
  const auto uq = static_cast<std::size_t>(q);
  auto stride_of = [&](std::size_t w) {
    std::size_t s = 1;
    for (std::size_t k = w + 1; k < n; ++k) s *= uq;
    return s;
  };
  const std::size_t st = stride_of(g.target);
  switch (g.kind) {
    case GateKind::X: {
      ComplexMatrix out(rows.rows(), rows.cols());
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t digit = (i / st) % uq;
        const std::size_t j = i - digit * st + ((digit + 1) % uq) * st;
        out.row(static_cast<Eigen::Index>(j)) = rows.row(static_cast<Eigen::Index>(i));
      }
      rows = std::move(out);
      return;
    }
    case GateKind::Z:
    case GateKind::S: {
      for (std::size_t i = 0; i < d; ++i) {
        const auto x = static_cast<std::int64_t>((i / st) % uq);
        Complex phase;
        if (g.kind == GateKind::Z) {
          phase = root_of_unity(x, q);
        } else if (q == 2) {
          phase = root_of_unity(x, 4);
        } else {
          phase = root_of_unity(x * (x - 1) / 2, q);
        }
        rows.row(static_cast<Eigen::Index>(i)) *= phase;
      }
      return;
    }
    case GateKind::CNOT: {
      const std::size_t sc = stride_of(g.control);
      ComplexMatrix out(rows.rows(), rows.cols());
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t c = (i / sc) % uq;
        const std::size_t t = (i / st) % uq;
        const std::size_t j = i - t * st + ((t + c) % uq) * st;
        out.row(static_cast<Eigen::Index>(j)) = rows.row(static_cast<Eigen::Index>(i));
      }
      rows = std::move(out);
      return;
    }
    case GateKind::F: {
      ComplexMatrix out = ComplexMatrix::Zero(rows.rows(), rows.cols());
      const double norm = 1.0 / std::sqrt(static_cast<double>(q));
      for (std::size_t i = 0; i < d; ++i) {
        const auto x = static_cast<std::int64_t>((i / st) % uq);
        const std::size_t base = i - static_cast<std::size_t>(x) * st;
        for (std::int64_t a = 0; a < q; ++a) {
          out.row(static_cast<Eigen::Index>(base + static_cast<std::size_t>(a) * st)) +=
              (norm * root_of_unity(a * x, q)) * rows.row(static_cast<Eigen::Index>(i));
        }
      }
      rows = std::move(out);
      return;
    }
  }
}

inline DenseUnitary circuit_to_dense(const CliffordCircuit& c, std::size_t cap = default_dim_cap()) {
  checked_dimension(c.n(), c.q(), cap);
  ComplexMatrix m = DenseUnitary::identity(c.n(), c.q()).matrix();
  for (const auto& g : c.gates()) apply_gate(m, g, c.n(), c.q());
  return DenseUnitary::trusted(c.n(), c.q(), std::move(m));
}

/** Dense ω_{q'}^p X^x Z^z: column j holds ω_{q'}^p ω_q^{z·j} at row j + x. */
inline DenseUnitary pauli_to_dense(const PauliOperator& p, std::size_t cap = default_dim_cap()) {
  const std::size_t n = p.n();
  const std::int64_t q = p.q();
  const std::size_t d = checked_dimension(n, q, cap);
  const auto di = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(di, di);
  const Complex global = root_of_unity(p.phase_exp(), phase_modulus(q));
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t row = 0;
    std::int64_t zdot = 0;
    for (std::size_t w = 0; w < n; ++w) {
      const auto digit = wire_digit(j, w, n, q);
      zdot += p.z()[w] * digit;
      row = row * static_cast<std::size_t>(q) + static_cast<std::size_t>(reduce(digit + p.x()[w], q));
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = global * root_of_unity(zdot, q);
  }
  return DenseUnitary::trusted(n, q, std::move(m));
}

/*******************************************************************************
 * TRACES AND COMPARISONS
 ******************************************************************************/

inline Complex normalized_trace(const ComplexMatrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

inline Complex normalized_trace(const DenseUnitary& u) { return normalized_trace(u.matrix()); }

/**
 * True iff ‖U − e^{iφ}V‖_max ≤ tol for the φ read off the first
 * largest-magnitude entry of V.
 */
inline bool equal_up_to_global_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol = 1e-9) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionMismatch("shape mismatch");
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double a = std::abs(v.data()[k]);
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = k;
    }
  }
  if (best_abs <= tol) return u.cwiseAbs().maxCoeff() <= tol;
  const Complex ratio = u.data()[best] / v.data()[best];
  if (std::abs(ratio) == 0.0) return false;
  const Complex phase = ratio / std::abs(ratio);
  return (u - phase * v).cwiseAbs().maxCoeff() <= tol;
}

inline bool equal_up_to_global_phase(const DenseUnitary& u, const DenseUnitary& v, double tol = 1e-9) {
  return equal_up_to_global_phase(u.matrix(), v.matrix(), tol);
}

inline bool is_identity_up_to_phase(const DenseUnitary& u, double tol = 1e-9) {
  return equal_up_to_global_phase(u, DenseUnitary::identity(u.n(), u.q()), tol);
}

/*******************************************************************************
 * EPR TEST
 ******************************************************************************/

enum class EprMode { Analytic, Statevector, Sample };

/**
 * |⟨e|(U ⊗ I)|e⟩|² with |e⟩ = q^{-n/2} Σ_x |x⟩|x⟩. The state is held as the
 * d × d matrix ψ(a, b) = ⟨a, b|ψ⟩; `apply_on_a` must apply U once to its rows.
 */
inline double epr_statevector_probability(
    std::size_t n, std::int64_t q, const std::function<void(ComplexMatrix&)>& apply_on_a,
    std::size_t cap = default_dim_cap()) {
  const std::size_t d = checked_dimension(n, q, cap);
  if (d * d > cap) throw CapExceeded(d * d, cap);
  const auto di = static_cast<Eigen::Index>(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix state = ComplexMatrix::Identity(di, di) * amp;
  apply_on_a(state);
  const Complex overlap = state.diagonal().sum() * amp;
  return std::norm(overlap);
}

/** Fraction of `shots` Bernoulli(p) draws that succeed. */
inline double sample_acceptance(double p, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw InvalidArgument("at least one shot is required");
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < shots; ++s) hits += bernoulli(rng, p) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(shots);
}

struct EprOptions {
  EprMode mode = EprMode::Analytic;
  std::size_t shots = 10000;
  std::uint64_t seed = 0;
  std::size_t cap = default_dim_cap();
};

/** Acceptance probability of the EPR test, or its sampled estimate. */
inline double epr_acceptance(const DenseUnitary& u, const EprOptions& opt = {}) {
  if (opt.mode == EprMode::Analytic) return std::norm(normalized_trace(u));
  const double p = epr_statevector_probability(
      u.n(), u.q(), [&](ComplexMatrix& s) { s = u.matrix() * s; }, opt.cap);
  if (opt.mode == EprMode::Statevector) return p;
  return sample_acceptance(p, opt.shots, opt.seed);
}

/*******************************************************************************
 * PAULI DECOMPOSITION
 ******************************************************************************/

/**
 * M = Σ m_{a,b} X^a Z^b. Coefficient (a, b) is stored at index
 * idx(a)·q^n + idx(b), idx being the basis-index encoding of a vector.
 */
struct PauliDecomposition {
  std::size_t n;
  std::int64_t q;
  std::vector<Complex> coeffs;

  std::size_t dimension() const { return static_cast<std::size_t>(std::sqrt(static_cast<double>(coeffs.size())) + 0.5); }

  Complex at(const ModVector& a, const ModVector& b) const {
    return coeffs[encode(a) * dimension() + encode(b)];
  }

  /** Number of coefficients with modulus above `tol`. */
  std::size_t support_size(double tol = 1e-9) const {
    std::size_t k = 0;
    for (const auto& c : coeffs) k += std::abs(c) > tol ? 1 : 0;
    return k;
  }

  double squared_norm() const {
    double s = 0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
  }

  std::size_t encode(const ModVector& v) const {
    std::size_t idx = 0;
    for (std::size_t w = 0; w < v.size(); ++w) {
      idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(v[w]);
    }
    return idx;
  }

  ModVector decode(std::size_t idx) const {
    ModVector v(q, n);
    for (std::size_t w = n; w-- > 0;) {
      v.set(w, static_cast<std::int64_t>(idx % static_cast<std::size_t>(q)));
      idx /= static_cast<std::size_t>(q);
    }
    return v;
  }
};

namespace detail {

// shift[a][i] = index of i + a (digitwise mod q).
inline std::vector<std::vector<std::size_t>> shift_table(std::size_t n, std::int64_t q, std::size_t d) {
  std::vector<std::vector<std::size_t>> table(d, std::vector<std::size_t>(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t idx = 0;
      for (std::size_t w = 0; w < n; ++w) {
        idx = idx * static_cast<std::size_t>(q) +
              static_cast<std::size_t>(reduce(wire_digit(a, w, n, q) + wire_digit(i, w, n, q), q));
      }
      table[a][i] = idx;
    }
  }
  return table;
}

// dot[b][i] = Σ_w b_w i_w mod q.
inline std::vector<std::vector<std::int64_t>> dot_table(std::size_t n, std::int64_t q, std::size_t d) {
  std::vector<std::vector<std::int64_t>> table(d, std::vector<std::int64_t>(d));
  for (std::size_t b = 0; b < d; ++b) {
    for (std::size_t i = 0; i < d; ++i) {
      std::int64_t s = 0;
      for (std::size_t w = 0; w < n; ++w) s += wire_digit(b, w, n, q) * wire_digit(i, w, n, q);
      table[b][i] = reduce(s, q);
    }
  }
  return table;
}

}  // namespace detail

/** m_{a,b} = τ̂((X^aZ^b)† M) = q^{-n} Σ_i ω_q^{-b·i} M_{i+a, i}. */
inline PauliDecomposition pauli_decompose(
    const ComplexMatrix& m, std::size_t n, std::int64_t q, std::size_t cap = default_dim_cap()) {
  const std::size_t d = checked_dimension(n, q, cap);
  if (static_cast<std::size_t>(m.rows()) != d || m.rows() != m.cols()) {
    throw DimensionMismatch("matrix is not q^n × q^n");
  }
  const auto shift = detail::shift_table(n, q, d);
  const auto dots = detail::dot_table(n, q, d);
  std::vector<Complex> roots(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) roots[static_cast<std::size_t>(k)] = root_of_unity(-k, q);

  PauliDecomposition out{n, q, std::vector<Complex>(d * d)};
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      Complex acc = 0;
      for (std::size_t i = 0; i < d; ++i) {
        acc += roots[static_cast<std::size_t>(dots[b][i])] *
               m(static_cast<Eigen::Index>(shift[a][i]), static_cast<Eigen::Index>(i));
      }
      out.coeffs[a * d + b] = acc / static_cast<double>(d);
    }
  }
  return out;
}

inline PauliDecomposition pauli_decompose(const DenseUnitary& u, std::size_t cap = default_dim_cap()) {
  return pauli_decompose(u.matrix(), u.n(), u.q(), cap);
}

/** Σ m_{a,b} X^a Z^b. */
inline ComplexMatrix reconstruct(const PauliDecomposition& dec) {
  const std::size_t d = dec.dimension();
  const auto shift = detail::shift_table(dec.n, dec.q, d);
  const auto dots = detail::dot_table(dec.n, dec.q, d);
  const auto di = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(di, di);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const Complex c = dec.coeffs[a * d + b];
      if (c == Complex(0.0, 0.0)) continue;
      for (std::size_t i = 0; i < d; ++i) {
        m(static_cast<Eigen::Index>(shift[a][i]), static_cast<Eigen::Index>(i)) +=
            c * root_of_unity(dots[b][i], dec.q);
      }
    }
  }
  return m;
}

/** True iff M is a unit multiple of a single X^aZ^b. */
inline bool is_pauli_up_to_phase(const ComplexMatrix& m, std::size_t n, std::int64_t q,
                                 double tol = 1e-9, std::size_t cap = default_dim_cap()) {
  const auto dec = pauli_decompose(m, n, q, cap);
  std::size_t support = 0;
  Complex only = 0;
  for (const auto& c : dec.coeffs) {
    if (std::abs(c) > tol) {
      ++support;
      only = c;
    }
  }
  return support == 1 && std::abs(std::abs(only) - 1.0) <= tol;
}

inline bool is_pauli_up_to_phase(const DenseUnitary& u, double tol = 1e-9) {
  return is_pauli_up_to_phase(u.matrix(), u.n(), u.q(), tol);
}

/*******************************************************************************
 * COMMUTATORS
 ******************************************************************************/

struct Fraction {
  std::uint64_t numerator;
  std::uint64_t denominator;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

/**
 * Exact fraction of basis Paulis P with U†P†UP ∈ 𝓘, i.e. P†UP = λU. Uses
 * (P†UP)_{ij} = ω_q^{z·(j−i)} U_{i+x, j+x} for P = X^x Z^z.
 */
inline Fraction commutator_identity_probability(
    const DenseUnitary& u, double tol = 1e-9, std::size_t cap = default_dim_cap()) {
  const std::size_t n = u.n();
  const std::int64_t q = u.q();
  const std::size_t d = checked_dimension(n, q, cap);
  const auto shift = detail::shift_table(n, q, d);
  const auto dots = detail::dot_table(n, q, d);
  const auto di = static_cast<Eigen::Index>(d);
  const ComplexMatrix& m = u.matrix();
  std::uint64_t hits = 0;
  ComplexMatrix w(di, di);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t z = 0; z < d; ++z) {
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              root_of_unity(dots[z][j] - dots[z][i], q) *
              m(static_cast<Eigen::Index>(shift[x][i]), static_cast<Eigen::Index>(shift[x][j]));
        }
      }
      hits += equal_up_to_global_phase(w, m, tol) ? 1 : 0;
    }
  }
  return {hits, static_cast<std::uint64_t>(d) * d};
}

/*******************************************************************************
 * TEST-INPUT GENERATORS
 ******************************************************************************/

/** QR of a seeded complex Gaussian matrix with R's diagonal phases removed. */
inline DenseUnitary random_unitary(std::size_t n, std::int64_t q, std::uint64_t seed,
                                   std::size_t cap = default_dim_cap()) {
  const auto d = static_cast<Eigen::Index>(checked_dimension(n, q, cap));
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix qm = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex rk = r(k, k);
    qm.col(k) *= rk / std::abs(rk);
  }
  return DenseUnitary::trusted(n, q, std::move(qm));
}

/** Single-qudit diag(1, e^{iθ_1}, ..., e^{iθ_{q-1}}). */
inline DenseUnitary diagonal_phase_gate(std::int64_t q, const std::vector<double>& angles) {
  if (angles.size() != static_cast<std::size_t>(q - 1)) {
    throw DimensionMismatch("need q-1 phase angles");
  }
  ComplexMatrix m = ComplexMatrix::Zero(q, q);
  m(0, 0) = 1.0;
  for (std::int64_t k = 1; k < q; ++k) m(k, k) = std::polar(1.0, angles[static_cast<std::size_t>(k - 1)]);
  return DenseUnitary::trusted(1, q, std::move(m));
}

/** The qubit T gate diag(1, e^{iπ/4}). */
inline DenseUnitary t_gate() { return diagonal_phase_gate(2, {std::numbers::pi / 4}); }

inline DenseUnitary kron(const DenseUnitary& a, const DenseUnitary& b) {
  if (a.q() != b.q()) throw DimensionMismatch("arity mismatch in tensor product");
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  ComplexMatrix m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  }
  return DenseUnitary::trusted(a.n() + b.n(), a.q(), std::move(m));
}

/*******************************************************************************
 * MATRIX JSON:  {"n": .., "q": .., "re": [[..]], "im": [[..]]}  (row-major)
 ******************************************************************************/

inline nlohmann::json unitary_to_json(const DenseUnitary& u) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  const auto& m = u.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ri = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"n", u.n()}, {"q", u.q()}, {"re", re}, {"im", im}};
}

/** Loads a matrix file, rejecting shapes other than q^n × q^n and non-unitary input (tol 1e-6). */
inline DenseUnitary unitary_from_json(const nlohmann::json& j, std::size_t cap = default_dim_cap()) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto q = j.at("q").get<std::int64_t>();
    if (!is_prime(q)) throw ParseError("q must be prime");
    if (n == 0) throw ParseError("n must be positive");
    const auto d = static_cast<Eigen::Index>(checked_dimension(n, q, cap));
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != d ||
        static_cast<Eigen::Index>(im.size()) != d) {
      throw ParseError("re and im must have q^n rows");
    }
    ComplexMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto& rr = re[static_cast<std::size_t>(r)];
      const auto& ri = im[static_cast<std::size_t>(r)];
      if (!rr.is_array() || !ri.is_array() || static_cast<Eigen::Index>(rr.size()) != d ||
          static_cast<Eigen::Index>(ri.size()) != d) {
        throw ParseError("row " + std::to_string(r) + " does not have q^n entries");
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        m(r, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(), ri[static_cast<std::size_t>(c)].get<double>());
      }
    }
    return DenseUnitary(n, q, std::move(m), 1e-6);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad matrix file: ") + e.what());
  }
}

inline DenseUnitary load_unitary(std::istream& in, std::size_t cap = default_dim_cap()) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad matrix file: ") + e.what());
  }
  return unitary_from_json(j, cap);
}

}  // namespace qsub
