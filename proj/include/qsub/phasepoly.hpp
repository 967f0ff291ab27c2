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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsub/clifford.hpp"
#include "qsub/errors.hpp"
#include "qsub/exact_root.hpp"
#include "qsub/modring.hpp"
#include "qsub/pauli.hpp"

namespace qsub {

/**
 * Σ_i cᵢ wᵢ + c₀ with coefficients in [0, modulus). Used both as a basis-state
 * label over Z_q and, through its integer lift, inside phase polynomials.
 */
struct AffineForm {
  std::int64_t modulus;
  std::vector<Residue> coeffs;
  Residue constant = 0;

  AffineForm(std::int64_t m, std::size_t num_vars) : modulus(m), coeffs(num_vars, 0) {}

  static AffineForm variable(std::int64_t m, std::size_t num_vars, std::size_t index) {
    AffineForm f(m, num_vars);
    f.coeffs[index] = reduce(1, m);
    return f;
  }

  AffineForm& operator+=(const AffineForm& other) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      coeffs[i] = reduce(coeffs[i] + other.coeffs[i], modulus);
    }
    constant = reduce(constant + other.constant, modulus);
    return *this;
  }

  Residue evaluate(std::span<const std::int64_t> point) const {
    std::int64_t acc = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc = (acc + coeffs[i] * point[i]) % modulus;
    return reduce(acc, modulus);
  }

  bool is_constant() const {
    for (auto c : coeffs) {
      if (c != 0) return false;
    }
    return true;
  }
};

/**
 * h(w) = Σ aᵢ wᵢ² + Σ_{i<j} c_ij wᵢ wⱼ + Σ bᵢ wᵢ + c₀ over Z_m, m = 4 for the
 * binary phase ring and m = q for odd q. Coefficients are those of h viewed as
 * an integer polynomial, so h can be evaluated at arbitrary integer points.
 */
class QuadraticPhasePolynomial {
 public:
  QuadraticPhasePolynomial(std::int64_t modulus, std::size_t num_vars)
      : modulus_(modulus), n_(num_vars), square_(num_vars, 0),
        cross_(num_vars * num_vars, 0), linear_(num_vars, 0) {
    require_ring_modulus(modulus);
  }

  std::int64_t modulus() const { return modulus_; }
  std::size_t num_vars() const { return n_; }

  Residue square(std::size_t i) const { return square_[i]; }
  /** Coefficient of the monomial wᵢwⱼ, i ≠ j. */
  Residue cross(std::size_t i, std::size_t j) const { return cross_[i * n_ + j]; }
  Residue linear(std::size_t i) const { return linear_[i]; }
  Residue constant() const { return constant_; }

  void add_square(std::size_t i, std::int64_t c) { square_[i] = reduce(square_[i] + c, modulus_); }
  void add_cross(std::size_t i, std::size_t j, std::int64_t c) {
    if (i == j) throw InvalidArgument("cross term needs distinct variables");
    cross_[i * n_ + j] = reduce(cross_[i * n_ + j] + c, modulus_);
    cross_[j * n_ + i] = cross_[i * n_ + j];
  }
  void add_linear(std::size_t i, std::int64_t c) { linear_[i] = reduce(linear_[i] + c, modulus_); }
  void add_constant(std::int64_t c) { constant_ = reduce(constant_ + c, modulus_); }

  /** h += coef · f, using the integer lift of f. */
  void add_affine(std::int64_t coef, const AffineForm& f) {
    check_form(f);
    for (std::size_t k = 0; k < n_; ++k) add_linear(k, coef * f.coeffs[k]);
    add_constant(coef * f.constant);
  }

  /** h += coef · f · g, expanding the product of integer lifts. */
  void add_product(std::int64_t coef, const AffineForm& f, const AffineForm& g) {
    check_form(f);
    check_form(g);
    coef = reduce(coef, modulus_);
    for (std::size_t k = 0; k < n_; ++k) {
      if (f.coeffs[k] == 0 && g.coeffs[k] == 0) continue;
      add_square(k, coef * f.coeffs[k] % modulus_ * g.coeffs[k]);
      for (std::size_t l = k + 1; l < n_; ++l) {
        const std::int64_t c = f.coeffs[k] * g.coeffs[l] + f.coeffs[l] * g.coeffs[k];
        if (c != 0) add_cross(k, l, coef * (c % modulus_));
      }
      add_linear(k, coef * ((f.coeffs[k] * g.constant + f.constant * g.coeffs[k]) % modulus_));
    }
    add_constant(coef * (f.constant * g.constant % modulus_));
  }

  /** h at an integer point, reduced into [0, m). */
  Residue evaluate(std::span<const std::int64_t> point) const {
    if (point.size() != n_) throw DimensionMismatch("evaluation point has wrong length");
    const std::int64_t m = modulus_;
    std::int64_t acc = constant_;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::int64_t wi = reduce(point[i], m);
      acc = (acc + square_[i] * wi % m * wi + linear_[i] * wi) % m;
      for (std::size_t j = i + 1; j < n_; ++j) {
        acc = (acc + cross(i, j) * wi % m * reduce(point[j], m)) % m;
      }
    }
    return reduce(acc, m);
  }

  /**
   * For m = 4: every non-square monomial has an even coefficient, i.e.
   * h = s(w²) + 2g(w). Such h satisfy h(w) ≡ h(w mod 2) (mod 4).
   */
  bool is_respectful() const {
    if (modulus_ != 4) return false;
    for (std::size_t i = 0; i < n_; ++i) {
      if (linear_[i] % 2 != 0) return false;
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (cross(i, j) % 2 != 0) return false;
      }
    }
    return true;
  }

  /** h(B·y + d) over y, with B and d taken as their least non-negative lifts. */
  QuadraticPhasePolynomial substitute(const ModMatrix& basis, const ModVector& offset) const {
    if (basis.rows() != n_ || offset.size() != n_) {
      throw DimensionMismatch("substitution does not match variable count");
    }
    const std::size_t f = basis.cols();
    std::vector<AffineForm> images;
    images.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      AffineForm li(modulus_, f);
      for (std::size_t k = 0; k < f; ++k) li.coeffs[k] = reduce(basis(i, k), modulus_);
      li.constant = reduce(offset[i], modulus_);
      images.push_back(std::move(li));
    }
    QuadraticPhasePolynomial out(modulus_, f);
    out.add_constant(constant_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (square_[i] != 0) out.add_product(square_[i], images[i], images[i]);
      if (linear_[i] != 0) out.add_affine(linear_[i], images[i]);
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (cross(i, j) != 0) out.add_product(cross(i, j), images[i], images[j]);
      }
    }
    return out;
  }

  QuadraticPhasePolynomial negated() const {
    QuadraticPhasePolynomial out(modulus_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      out.square_[i] = reduce(-square_[i], modulus_);
      out.linear_[i] = reduce(-linear_[i], modulus_);
    }
    for (std::size_t k = 0; k < cross_.size(); ++k) out.cross_[k] = reduce(-cross_[k], modulus_);
    out.constant_ = reduce(-constant_, modulus_);
    return out;
  }

  /** The terms of h that only involve the first `k` variables. */
  QuadraticPhasePolynomial leading(std::size_t k) const {
    QuadraticPhasePolynomial out(modulus_, k);
    out.constant_ = constant_;
    for (std::size_t i = 0; i < k; ++i) {
      out.square_[i] = square_[i];
      out.linear_[i] = linear_[i];
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) out.cross_[i * k + j] = cross(i, j);
      }
    }
    return out;
  }

  friend bool operator==(const QuadraticPhasePolynomial&, const QuadraticPhasePolynomial&) = default;

 private:
  void check_form(const AffineForm& f) const {
    if (f.coeffs.size() != n_) throw DimensionMismatch("affine form has wrong variable count");
  }

  std::int64_t modulus_;
  std::size_t n_;
  std::vector<Residue> square_;
  std::vector<Residue> cross_;  // symmetric n×n, diagonal unused
  std::vector<Residue> linear_;
  Residue constant_ = 0;
};

/*******************************************************************************
 * GAUSS SUMS
 ******************************************************************************/

/**
 * Σ_{x ∈ {0,1}^n} ω_4^{h(x)} for respectful h, by elimination of the last
 * variable. Writing h = c·x² + 2x·ℓ(x') + g(x'):
 *   c = 0: the x-sum is 2·ω_4^g when ℓ(x') is even and 0 otherwise, so x' is
 *          restricted to the affine subspace ℓ ≡ 0 (mod 2);
 *   c = 1: the x-sum is √2·e^{iπ/4}·ω_4^{-ℓ²}, leaving g − ℓ²;
 *   c = 2: 2x² ≡ 2x on integers, moved into the linear term;
 *   c = 3: the sum for −h, conjugated.
 */
inline ExactScaledRoot gauss_sum_binary(const QuadraticPhasePolynomial& h) {
  if (h.modulus() != 4) throw InvalidArgument("binary Gauss sums are taken mod 4");
  if (!h.is_respectful()) throw InvalidArgument("polynomial is not respectful");
  const std::size_t n = h.num_vars();
  if (n == 0) return ExactScaledRoot(2, 0, 2 * h.constant());

  const std::size_t last = n - 1;
  QuadraticPhasePolynomial work = h;
  if (work.square(last) == 2) {
    work.add_square(last, -2);
    work.add_linear(last, 2);
  }
  if (work.square(last) == 3) return gauss_sum_binary(work.negated()).conj();

  auto g = work.leading(last);
  AffineForm ell(2, last);
  for (std::size_t j = 0; j < last; ++j) ell.coeffs[j] = work.cross(last, j) / 2;
  ell.constant = work.linear(last) / 2;

  if (work.square(last) == 1) {
    g.add_product(-1, ell, ell);
    return gauss_sum_binary(g).scaled(1).rotated(1);
  }
  if (ell.is_constant()) {
    if (ell.constant != 0) return ExactScaledRoot::zero(2);
    return gauss_sum_binary(g).scaled(2);
  }
  ModMatrix row(2, 1, last);
  for (std::size_t j = 0; j < last; ++j) row.set(0, j, ell.coeffs[j]);
  const auto subspace = solve_affine_system(row, ModVector(2, {ell.constant}));
  return gauss_sum_binary(g.substitute(subspace->basis, subspace->offset)).scaled(2);
}

/** Quadratic character of a nonzero residue mod an odd prime: ±1. */
inline int legendre_symbol(Residue a, std::int64_t q) {
  return pow_mod(a, static_cast<std::uint64_t>((q - 1) / 2), q) == 1 ? 1 : -1;
}

/**
 * Σ_{x ∈ Z_q^n} ω_q^{h(x)} for odd prime q. After diagonalization each
 * variable contributes q (a = b = 0), 0 (a = 0 ≠ b), or
 * ω_q^{-b²/(4a)}·η(a)·G_q with G_q = √q for q ≡ 1 and i√q for q ≡ 3 (mod 4).
 */
inline ExactScaledRoot gauss_sum_odd(const QuadraticPhasePolynomial& h) {
  const std::int64_t q = h.modulus();
  if (q == 2 || q == 4) throw InvalidArgument("odd Gauss sums need an odd prime modulus");
  require_prime(q);
  const std::size_t n = h.num_vars();
  const Residue half = inverse_mod(2, q);
  ModMatrix form(q, n, n);
  ModVector linear(q, n);
  for (std::size_t i = 0; i < n; ++i) {
    form.set(i, i, h.square(i));
    linear.set(i, h.linear(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) form.set(i, j, h.cross(i, j) * half);
    }
  }
  const auto diag = diagonalize_quadratic(form, linear, h.constant());

  ExactScaledRoot out(q, 0, 4 * diag.constant);
  for (std::size_t i = 0; i < n; ++i) {
    const Residue a = diag.diagonal[i];
    const Residue b = diag.linear[i];
    if (a == 0) {
      if (b != 0) return ExactScaledRoot::zero(q);
      out = out.scaled(2);
      continue;
    }
    const Residue shift = reduce(-b * b % q * inverse_mod(4 * a, q), q);
    std::int64_t phase = 4 * shift;
    if (legendre_symbol(a, q) < 0) phase += 2 * q;
    if (q % 4 == 3) phase += q;
    out = out.scaled(1).rotated(phase);
  }
  return out;
}

/*******************************************************************************
 * SUM OVER PATHS
 ******************************************************************************/

/**
 * Symbolic C|x⟩ = q^{norm_half_power/2} Σ_v ω_{q'}^{phase(x,v)} |labels(x,v)⟩.
 *
 * Variables 0..n-1 are the inputs x; variable n+j is the path variable
 * introduced by the j-th F gate. Labels are affine over Z_q; the phase lives
 * in Z_4 (q = 2) or Z_q.
 */
struct PathSumState {
  std::size_t n;
  std::int64_t q;
  std::size_t num_path_vars = 0;
  std::vector<AffineForm> labels;
  QuadraticPhasePolynomial phase;
  std::int64_t norm_half_power = 0;

  std::size_t num_vars() const { return n + num_path_vars; }
};

inline PathSumState build_path_sum(const CliffordCircuit& c) {
  const std::size_t n = c.n();
  const std::int64_t q = c.q();
  std::size_t total = n;
  for (const auto& g : c.gates()) total += g.kind == GateKind::F ? 1 : 0;

  PathSumState st{n, q, 0, {}, QuadraticPhasePolynomial(phase_modulus(q), total), 0};
  for (std::size_t i = 0; i < n; ++i) st.labels.push_back(AffineForm::variable(q, total, i));

  const bool binary = q == 2;
  const Residue half = binary ? 0 : inverse_mod(2, q);
  for (const auto& g : c.gates()) {
    auto& label = st.labels[g.target];
    switch (g.kind) {
      case GateKind::CNOT:
        label += st.labels[g.control];
        break;
      case GateKind::X:
        label.constant = reduce(label.constant + 1, q);
        break;
      case GateKind::Z:
        st.phase.add_affine(binary ? 2 : 1, label);
        break;
      case GateKind::S:
        if (binary) {
          // A parity of bits z is ≡ (Σz)² (mod 4).
          st.phase.add_product(1, label, label);
        } else {
          st.phase.add_product(half, label, label);
          st.phase.add_affine(-half, label);
        }
        break;
      case GateKind::F: {
        const auto v = AffineForm::variable(q, total, n + st.num_path_vars);
        st.phase.add_product(binary ? 2 : 1, v, label);
        label = v;
        ++st.num_path_vars;
        --st.norm_half_power;
        break;
      }
    }
  }
  return st;
}

namespace detail {

inline ExactScaledRoot gauss_sum(const QuadraticPhasePolynomial& h, std::int64_t q) {
  return q == 2 ? gauss_sum_binary(h) : gauss_sum_odd(h);
}

// Σ_x ⟨x|C|x⟩ before any normalization: the Gauss sum of the phase over the
// solutions of labels(x, v) = x.
inline ExactScaledRoot diagonal_path_sum(const PathSumState& st) {
  const std::int64_t q = st.q;
  const std::size_t vars = st.num_vars();
  ModMatrix system(q, st.n, vars);
  ModVector rhs(q, st.n);
  for (std::size_t i = 0; i < st.n; ++i) {
    for (std::size_t k = 0; k < vars; ++k) system.set(i, k, st.labels[i].coeffs[k]);
    system.add(i, i, -1);
    rhs.set(i, -st.labels[i].constant);
  }
  const auto solutions = solve_affine_system(system, rhs);
  if (!solutions) return ExactScaledRoot::zero(q);
  return gauss_sum(st.phase.substitute(solutions->basis, solutions->offset), q);
}

}  // namespace detail

/** Unnormalized trace τ(C) = Σ_x ⟨x|C|x⟩. */
inline ExactScaledRoot exact_trace_unnormalized(const CliffordCircuit& c) {
  const auto st = build_path_sum(c);
  return detail::diagonal_path_sum(st).scaled(st.norm_half_power);
}

/** Normalized trace τ̂(C) = τ(C)/q^n. */
inline ExactScaledRoot exact_trace(const CliffordCircuit& c) {
  return exact_trace_unnormalized(c).scaled(-2 * static_cast<std::int64_t>(c.n()));
}

}  // namespace qsub
