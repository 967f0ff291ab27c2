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
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsub/errors.hpp"

namespace qsub {

/** An element of Z_m, always stored in [0, m). */
using Residue = std::int64_t;

/** Least non-negative representative of `value` modulo `modulus`. */
inline Residue reduce(std::int64_t value, std::int64_t modulus) {
  Residue r = value % modulus;
  return r < 0 ? r + modulus : r;
}

inline bool is_prime(std::int64_t value) {
  if (value < 2) return false;
  for (std::int64_t d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

inline Residue pow_mod(Residue base, std::uint64_t exponent, std::int64_t modulus) {
  Residue result = reduce(1, modulus);
  base = reduce(base, modulus);
  while (exponent > 0) {
    if (exponent & 1U) result = result * base % modulus;
    base = base * base % modulus;
    exponent >>= 1U;
  }
  return result;
}

/** Multiplicative inverse modulo a prime. `value` must be nonzero mod p. */
inline Residue inverse_mod(Residue value, std::int64_t prime) {
  value = reduce(value, prime);
  if (value == 0) throw InvalidArgument("zero has no inverse");
  return pow_mod(value, static_cast<std::uint64_t>(prime - 2), prime);
}

inline void require_prime(std::int64_t q) {
  if (!is_prime(q)) {
    throw InvalidArgument("modulus " + std::to_string(q) + " is not prime");
  }
}

/** Accepts the moduli the library computes over: primes and 4. */
inline void require_ring_modulus(std::int64_t m) {
  if (m != 4 && !is_prime(m)) {
    throw InvalidArgument(
        "modulus " + std::to_string(m) + " is neither prime nor 4");
  }
}

/*******************************************************************************
 * VECTORS AND MATRICES
 ******************************************************************************/

class ModVector {
 public:
  ModVector() : modulus_(2) {}

  ModVector(std::int64_t modulus, std::size_t size)
      : modulus_(modulus), entries_(size, 0) {
    require_ring_modulus(modulus);
  }

  ModVector(std::int64_t modulus, std::vector<std::int64_t> entries)
      : modulus_(modulus), entries_(std::move(entries)) {
    require_ring_modulus(modulus);
    for (auto& e : entries_) e = reduce(e, modulus_);
  }

  ModVector(std::int64_t modulus, std::initializer_list<std::int64_t> entries)
      : ModVector(modulus, std::vector<std::int64_t>(entries)) {}

  std::int64_t modulus() const { return modulus_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Residue operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, std::int64_t value) {
    entries_[i] = reduce(value, modulus_);
  }
  void add(std::size_t i, std::int64_t value) {
    entries_[i] = reduce(entries_[i] + value, modulus_);
  }

  std::span<const Residue> entries() const { return entries_; }

  bool is_zero() const {
    for (auto e : entries_) {
      if (e != 0) return false;
    }
    return true;
  }

  /** Euclidean pairing reduced modulo the common modulus. */
  Residue dot(const ModVector& other) const {
    check_compatible(other);
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      acc = (acc + entries_[i] * other.entries_[i]) % modulus_;
    }
    return acc;
  }

  ModVector operator+(const ModVector& other) const {
    check_compatible(other);
    ModVector out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.add(i, other[i]);
    return out;
  }

  ModVector operator-() const {
    ModVector out = *this;
    for (auto& e : out.entries_) e = reduce(-e, modulus_);
    return out;
  }

  ModVector operator-(const ModVector& other) const { return *this + (-other); }

  ModVector scaled(std::int64_t factor) const {
    ModVector out = *this;
    for (auto& e : out.entries_) e = reduce(e * factor, modulus_);
    return out;
  }

  friend bool operator==(const ModVector&, const ModVector&) = default;

 private:
  void check_compatible(const ModVector& other) const {
    if (other.modulus_ != modulus_ || other.size() != size()) {
      throw DimensionMismatch("vector modulus or length mismatch");
    }
  }

  std::int64_t modulus_;
  std::vector<Residue> entries_;
};

/** Dense row-major matrix over Z_m. */
class ModMatrix {
 public:
  ModMatrix() : modulus_(2), rows_(0), cols_(0) {}

  ModMatrix(std::int64_t modulus, std::size_t rows, std::size_t cols)
      : modulus_(modulus), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    require_ring_modulus(modulus);
  }

  ModMatrix(
      std::int64_t modulus,
      std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : ModMatrix(
            modulus, rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix rows");
      std::size_t c = 0;
      for (auto v : row) set(r, c++, v);
      ++r;
    }
  }

  static ModMatrix identity(std::int64_t modulus, std::size_t n) {
    ModMatrix m(modulus, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::int64_t modulus() const { return modulus_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  void set(std::size_t r, std::size_t c, std::int64_t value) {
    data_[r * cols_ + c] = reduce(value, modulus_);
  }
  void add(std::size_t r, std::size_t c, std::int64_t value) {
    set(r, c, data_[r * cols_ + c] + value);
  }

  ModVector column(std::size_t c) const {
    ModVector v(modulus_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.set(r, (*this)(r, c));
    return v;
  }

  ModVector row(std::size_t r) const {
    ModVector v(modulus_, cols_);
    for (std::size_t c = 0; c < cols_; ++c) v.set(c, (*this)(r, c));
    return v;
  }

  ModVector apply(const ModVector& x) const {
    if (x.size() != cols_ || x.modulus() != modulus_) {
      throw DimensionMismatch("matrix-vector shape mismatch");
    }
    ModVector out(modulus_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::int64_t acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) {
        acc = (acc + (*this)(r, c) * x[c]) % modulus_;
      }
      out.set(r, acc);
    }
    return out;
  }

  ModMatrix operator*(const ModMatrix& other) const {
    if (cols_ != other.rows_ || modulus_ != other.modulus_) {
      throw DimensionMismatch("matrix product shape mismatch");
    }
    ModMatrix out(modulus_, rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Residue a = (*this)(r, k);
        if (a == 0) continue;
        for (std::size_t c = 0; c < other.cols_; ++c) {
          out.add(r, c, a * other(k, c));
        }
      }
    }
    return out;
  }

  ModMatrix transpose() const {
    ModMatrix out(modulus_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, (*this)(r, c));
    }
    return out;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = r + 1; c < cols_; ++c) {
        if ((*this)(r, c) != (*this)(c, r)) return false;
      }
    }
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < cols_; ++c) {
      std::swap(data_[a * cols_ + c], data_[b * cols_ + c]);
    }
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < rows_; ++r) {
      std::swap(data_[r * cols_ + a], data_[r * cols_ + b]);
    }
  }
  /** row[dst] += factor * row[src] */
  void add_row_multiple(std::size_t dst, std::size_t src, std::int64_t factor) {
    for (std::size_t c = 0; c < cols_; ++c) add(dst, c, factor * (*this)(src, c));
  }
  /** col[dst] += factor * col[src] */
  void add_col_multiple(std::size_t dst, std::size_t src, std::int64_t factor) {
    for (std::size_t r = 0; r < rows_; ++r) add(r, dst, factor * (*this)(r, src));
  }

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  std::int64_t modulus_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

/*******************************************************************************
 * LINEAR SYSTEMS
 ******************************************************************************/

/**
 * The solutions of A·w = b as {basis·y + offset : y ∈ Z_q^free_dim}.
 * Distinct y give distinct solutions.
 */
struct AffineSolutionSet {
  ModMatrix basis;
  ModVector offset;

  std::size_t free_dim() const { return basis.cols(); }

  ModVector point(const ModVector& y) const { return basis.apply(y) + offset; }
};

namespace detail {

// Reduced row echelon form in place, pivoting on the first nonzero entry of
// each column. Only the first `coeff_cols` columns are pivot candidates.
inline std::vector<std::size_t> row_reduce(ModMatrix& m, std::size_t coeff_cols) {
  const std::int64_t p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < coeff_cols && row < m.rows(); ++col) {
    std::size_t found = m.rows();
    for (std::size_t r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        found = r;
        break;
      }
    }
    if (found == m.rows()) continue;
    m.swap_rows(row, found);
    const Residue inv = inverse_mod(m(row, col), p);
    for (std::size_t c = 0; c < m.cols(); ++c) m.set(row, c, m(row, c) * inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != row && m(r, col) != 0) m.add_row_multiple(r, row, -m(r, col));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(const ModMatrix& a) {
  require_prime(a.modulus());
  ModMatrix work = a;
  return detail::row_reduce(work, work.cols()).size();
}

/**
 * Complete solution set of A·w = b over Z_q, or nullopt when the system is
 * inconsistent. Deterministic: free variables are the non-pivot columns in
 * increasing order and the offset sets them to zero.
 */
inline std::optional<AffineSolutionSet> solve_affine_system(
    const ModMatrix& a, const ModVector& b) {
  const std::int64_t q = a.modulus();
  require_prime(q);
  if (b.modulus() != q || b.size() != a.rows()) {
    throw DimensionMismatch("right-hand side does not match the system");
  }
  const std::size_t n = a.cols();
  ModMatrix aug(q, a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.set(r, c, a(r, c));
    aug.set(r, n, b[r]);
  }
  const auto pivots = detail::row_reduce(aug, n);
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r) {
    if (aug(r, n) != 0) return std::nullopt;
  }

  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }

  AffineSolutionSet out{ModMatrix(q, n, free_cols.size()), ModVector(q, n)};
  for (std::size_t i = 0; i < pivots.size(); ++i) out.offset.set(pivots[i], aug(i, n));
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    out.basis.set(free_cols[j], j, 1);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      out.basis.set(pivots[i], j, -aug(i, free_cols[j]));
    }
  }
  return out;
}

/*******************************************************************************
 * QUADRATIC FORMS
 ******************************************************************************/

/**
 * x ↦ xᵀ Q x + ℓ·x + c rewritten as Σ aᵢ yᵢ² + Σ bᵢ yᵢ + c under x = M·y.
 */
struct DiagonalizedForm {
  ModVector diagonal;
  ModVector linear;
  Residue constant = 0;
  ModMatrix change_of_vars;
};

/** xᵀ Q x + ℓ·x + c reduced modulo the common modulus. */
inline Residue evaluate_quadratic(
    const ModMatrix& form, const ModVector& linear, Residue constant,
    const ModVector& x) {
  const std::int64_t m = form.modulus();
  std::int64_t acc = constant;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      acc = (acc + form(i, j) * x[i] % m * x[j]) % m;
    }
    acc = (acc + linear[i] * x[i]) % m;
  }
  return reduce(acc, m);
}

/**
 * Congruence diagonalization of a symmetric form over Z_q, q an odd prime.
 *
 * Pivots are taken in order; a zero diagonal is repaired first by swapping in
 * a later nonzero diagonal entry, otherwise by the substitution
 * x_j → x_j + x_k on a nonzero cross term, which puts 2·Q_kj on the diagonal.
 */
inline DiagonalizedForm diagonalize_quadratic(
    const ModMatrix& form, const ModVector& linear, Residue constant) {
  const std::int64_t q = form.modulus();
  if (q == 2 || q == 4) {
    throw InvalidArgument("diagonalization requires an odd prime modulus");
  }
  require_prime(q);
  if (!form.is_symmetric()) throw InvalidArgument("form is not symmetric");
  const std::size_t n = form.rows();
  if (linear.size() != n || linear.modulus() != q) {
    throw DimensionMismatch("linear part does not match the form");
  }

  ModMatrix a = form;
  ModMatrix m = ModMatrix::identity(q, n);
  // a ← Eᵀ a E and m ← m E for an elementary column operation E.
  auto add_multiple = [&](std::size_t dst, std::size_t src, std::int64_t f) {
    a.add_col_multiple(dst, src, f);
    a.add_row_multiple(dst, src, f);
    m.add_col_multiple(dst, src, f);
  };
  auto swap_vars = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    a.swap_rows(i, j);
    m.swap_cols(i, j);
  };

  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t diag = n;
      for (std::size_t j = k + 1; j < n && diag == n; ++j) {
        if (a(j, j) != 0) diag = j;
      }
      if (diag != n) {
        swap_vars(k, diag);
      } else {
        std::size_t ci = n;
        std::size_t cj = n;
        for (std::size_t i = k; i < n && ci == n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (a(i, j) != 0) {
              ci = i;
              cj = j;
              break;
            }
          }
        }
        if (ci == n) break;  // remaining block is zero
        if (ci != k) swap_vars(k, ci);
        add_multiple(k, cj, 1);
      }
    }
    const Residue inv = inverse_mod(a(k, k), q);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) != 0) add_multiple(i, k, -a(i, k) * inv);
    }
  }

  DiagonalizedForm out{
      ModVector(q, n), m.transpose().apply(linear), reduce(constant, q), m};
  for (std::size_t i = 0; i < n; ++i) out.diagonal.set(i, a(i, i));
  return out;
}

}  // namespace qsub
