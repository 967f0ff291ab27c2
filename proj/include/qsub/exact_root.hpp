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
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>

#include "qsub/modring.hpp"

namespace qsub {

/**
 * An exact value of the form 0 or (√q)^half_power · e^{2πi·phase_exp/L}.
 *
 * L is 8 for q = 2 and 4q for odd q: the smallest cyclic groups holding
 * ω_{q'}, ±1, ±i and e^{iπ/4}, which are all the unit factors that appear in
 * quadratic Gauss sums and Clifford traces.
 */
class ExactScaledRoot {
 public:
  /** The value 1 for arity q. */
  explicit ExactScaledRoot(std::int64_t q) : q_(q) { require_prime(q); }

  ExactScaledRoot(std::int64_t q, std::int64_t half_power, std::int64_t phase_exp)
      : q_(q), half_power_(half_power) {
    require_prime(q);
    phase_exp_ = reduce(phase_exp, root_order());
  }

  static ExactScaledRoot zero(std::int64_t q) {
    ExactScaledRoot v(q);
    v.is_zero_ = true;
    return v;
  }

  /** ω_{q'}^k, with q' = 4 for q = 2 and q' = q otherwise. */
  static ExactScaledRoot pauli_phase(std::int64_t q, std::int64_t k) {
    return ExactScaledRoot(q, 0, q == 2 ? 2 * k : 4 * k);
  }

  std::int64_t q() const { return q_; }
  bool is_zero() const { return is_zero_; }
  std::int64_t half_power() const { return half_power_; }
  std::int64_t phase_exp() const { return phase_exp_; }
  std::int64_t root_order() const { return q_ == 2 ? 8 : 4 * q_; }

  double magnitude() const {
    if (is_zero_) return 0.0;
    return std::pow(static_cast<double>(q_), 0.5 * static_cast<double>(half_power_));
  }

  std::complex<double> to_complex() const {
    if (is_zero_) return {0.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase_exp_) /
                         static_cast<double>(root_order());
    return std::polar(magnitude(), angle);
  }

  ExactScaledRoot operator*(const ExactScaledRoot& other) const {
    if (other.q_ != q_) throw DimensionMismatch("arity mismatch in product");
    if (is_zero_ || other.is_zero_) return zero(q_);
    return ExactScaledRoot(
        q_, half_power_ + other.half_power_, phase_exp_ + other.phase_exp_);
  }

  ExactScaledRoot conj() const {
    if (is_zero_) return *this;
    return ExactScaledRoot(q_, half_power_, -phase_exp_);
  }

  /** Multiplies by (√q)^delta. */
  ExactScaledRoot scaled(std::int64_t delta) const {
    if (is_zero_) return *this;
    return ExactScaledRoot(q_, half_power_ + delta, phase_exp_);
  }

  /** Multiplies by e^{2πi·delta/L}. */
  ExactScaledRoot rotated(std::int64_t delta) const {
    if (is_zero_) return *this;
    return ExactScaledRoot(q_, half_power_, phase_exp_ + delta);
  }

  friend bool operator==(const ExactScaledRoot& a, const ExactScaledRoot& b) {
    if (a.q_ != b.q_ || a.is_zero_ != b.is_zero_) return false;
    if (a.is_zero_) return true;
    return a.half_power_ == b.half_power_ && a.phase_exp_ == b.phase_exp_;
  }

  std::string str() const {
    if (is_zero_) return "0";
    return "sqrt(" + std::to_string(q_) + ")^" + std::to_string(half_power_) +
           " * e^(2pi i " + std::to_string(phase_exp_) + "/" +
           std::to_string(root_order()) + ")";
  }

 private:
  std::int64_t q_;
  bool is_zero_ = false;
  std::int64_t half_power_ = 0;
  std::int64_t phase_exp_ = 0;
};

inline std::complex<double> to_complex(const ExactScaledRoot& v) { return v.to_complex(); }

inline std::ostream& operator<<(std::ostream& os, const ExactScaledRoot& v) {
  return os << v.str();
}

}  // namespace qsub
