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
#include <sstream>
#include <string>
#include <vector>

#include "qsub/exact_root.hpp"
#include "qsub/modring.hpp"
#include "qsub/random.hpp"

namespace qsub {

/** Modulus of Pauli phase exponents: 4 for qubits, q for odd prime q. */
inline std::int64_t phase_modulus(std::int64_t q) { return q == 2 ? 4 : q; }

/** Exponent of ω_{q'} equal to ω_q, i.e. 2 for qubits and 1 otherwise. */
inline std::int64_t omega_q_unit(std::int64_t q) { return q == 2 ? 2 : 1; }

/**
 * ω_{q'}^phase_exp · X^x Z^z on n qudits of prime arity q, where
 * X^x Z^z = ⊗_i X^{x_i} Z^{z_i}.
 *
 * The tuple is a normal form: two operators are equal as matrices iff all
 * fields agree.
 */
class PauliOperator {
 public:
  /** Identity on n qudits. */
  PauliOperator(std::size_t n, std::int64_t q)
      : q_(q), x_(q, n), z_(q, n) {
    require_prime(q);
  }

  PauliOperator(std::int64_t q, std::int64_t phase_exp, ModVector x, ModVector z)
      : q_(q), phase_exp_(reduce(phase_exp, phase_modulus(q))),
        x_(std::move(x)), z_(std::move(z)) {
    require_prime(q);
    if (x_.modulus() != q || z_.modulus() != q || x_.size() != z_.size()) {
      throw DimensionMismatch("X and Z parts must be vectors over Z_q of equal length");
    }
  }

  static PauliOperator x_on(std::size_t n, std::int64_t q, std::size_t wire) {
    PauliOperator p(n, q);
    p.x_.set(wire, 1);
    return p;
  }
  static PauliOperator z_on(std::size_t n, std::int64_t q, std::size_t wire) {
    PauliOperator p(n, q);
    p.z_.set(wire, 1);
    return p;
  }

  std::size_t n() const { return x_.size(); }
  std::int64_t q() const { return q_; }
  std::int64_t phase_exp() const { return phase_exp_; }
  const ModVector& x() const { return x_; }
  const ModVector& z() const { return z_; }

  void add_phase(std::int64_t delta) {
    phase_exp_ = reduce(phase_exp_ + delta, phase_modulus(q_));
  }
  void set_x(std::size_t wire, std::int64_t v) { x_.set(wire, v); }
  void set_z(std::size_t wire, std::int64_t v) { z_.set(wire, v); }

  /** True for X^0 Z^0, whatever the phase. */
  bool is_identity_up_to_phase() const { return x_.is_zero() && z_.is_zero(); }

  bool equal_up_to_phase(const PauliOperator& other) const {
    return q_ == other.q_ && x_ == other.x_ && z_ == other.z_;
  }

  /** (ω^p X^x Z^z)† = ω^{-p} Z^{-z} X^{-x} = ω^{-p} ω_q^{⟨x,z⟩} X^{-x} Z^{-z}. */
  PauliOperator dagger() const {
    return PauliOperator(
        q_, -phase_exp_ + omega_q_unit(q_) * x_.dot(z_), -x_, -z_);
  }

  std::string str() const;

  friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

 private:
  std::int64_t q_;
  std::int64_t phase_exp_ = 0;
  ModVector x_;
  ModVector z_;
};

/**
 * Matrix product P·Q in normal form. Moving Q's X block left past P's Z block
 * uses Z^b X^a = ω_q^{ab} X^a Z^b on each wire.
 */
inline PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
  if (p.q() != q.q() || p.n() != q.n()) {
    throw DimensionMismatch("Pauli product of mismatched width or arity");
  }
  const std::int64_t phase = p.phase_exp() + q.phase_exp() +
                             omega_q_unit(p.q()) * p.z().dot(q.x());
  return PauliOperator(p.q(), phase, p.x() + q.x(), p.z() + q.z());
}

inline PauliOperator operator*(const PauliOperator& p, const PauliOperator& q) {
  return multiply(p, q);
}

inline PauliOperator power(const PauliOperator& p, std::int64_t k) {
  PauliOperator out(p.n(), p.q());
  for (std::int64_t i = 0; i < k; ++i) out = out * p;
  return out;
}

/**
 * Exponent e with (X^x Z^z)† (X^a Z^b) (X^x Z^z) = ω_q^e X^a Z^b, namely
 * e = ⟨b, x⟩ − ⟨a, z⟩ mod q.
 */
inline Residue commutation_exponent(
    const ModVector& x, const ModVector& z, const ModVector& a, const ModVector& b) {
  if (x.size() != a.size() || z.size() != b.size() || x.size() != z.size()) {
    throw DimensionMismatch("commutation exponent of mismatched widths");
  }
  return reduce(b.dot(x) - a.dot(z), x.modulus());
}

inline Residue commutation_exponent(
    const PauliOperator& p, const ModVector& a, const ModVector& b) {
  return commutation_exponent(p.x(), p.z(), a, b);
}

/** Normalized trace: the phase when X^x Z^z = I, zero otherwise. */
inline ExactScaledRoot exact_trace_pauli(const PauliOperator& p) {
  if (!p.is_identity_up_to_phase()) return ExactScaledRoot::zero(p.q());
  return ExactScaledRoot::pauli_phase(p.q(), p.phase_exp());
}

/** Uniform element of {X^a Z^b : a, b ∈ Z_q^n} with phase 0. */
inline PauliOperator sample_basis_pauli(std::size_t n, std::int64_t q, std::uint64_t seed) {
  require_prime(q);
  Rng rng(seed);
  PauliOperator p(n, q);
  for (std::size_t i = 0; i < n; ++i) p.set_x(i, uniform_below(rng, q));
  for (std::size_t i = 0; i < n; ++i) p.set_z(i, uniform_below(rng, q));
  return p;
}

/*******************************************************************************
 * TEXT LITERALS:  w^<phase> X[<x_0>,...] Z[<z_0>,...] q=<q>
 ******************************************************************************/

namespace detail {

inline std::string join_residues(const ModVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::int64_t parse_canonical_int(const std::string& s, const std::string& what) {
  if (s.empty() || s.size() > 18) throw ParseError("bad " + what + " '" + s + "'");
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("bad " + what + " '" + s + "'");
  }
  if (s.size() > 1 && s[0] == '0') throw ParseError("leading zero in " + what);
  return std::stoll(s);
}

inline std::vector<std::int64_t> parse_bracket_list(
    const std::string& token, char head) {
  if (token.size() < 3 || token[0] != head || token[1] != '[' || token.back() != ']') {
    throw ParseError(std::string("expected ") + head + "[...] but got '" + token + "'");
  }
  std::vector<std::int64_t> out;
  std::string body = token.substr(2, token.size() - 3);
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    out.push_back(parse_canonical_int(body.substr(start, comma - start), "exponent"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline std::string PauliOperator::str() const {
  return "w^" + std::to_string(phase_exp_) + " X[" + detail::join_residues(x_) +
         "] Z[" + detail::join_residues(z_) + "] q=" + std::to_string(q_);
}

/**
 * Inverse of PauliOperator::str(). Exponents may be unreduced and are taken
 * modulo q (or q' for the phase), so str(parse_pauli(s)) == s exactly when s
 * is canonical.
 */
inline PauliOperator parse_pauli(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() != 4) throw ParseError("expected 'w^p X[..] Z[..] q=Q'");
  if (tokens[0].rfind("w^", 0) != 0) throw ParseError("phase must start with 'w^'");
  if (tokens[3].rfind("q=", 0) != 0) throw ParseError("arity must start with 'q='");
  const auto phase = detail::parse_canonical_int(tokens[0].substr(2), "phase");
  const auto q = detail::parse_canonical_int(tokens[3].substr(2), "arity");
  if (!is_prime(q)) throw ParseError("arity " + std::to_string(q) + " is not prime");
  const auto xs = detail::parse_bracket_list(tokens[1], 'X');
  const auto zs = detail::parse_bracket_list(tokens[2], 'Z');
  if (xs.size() != zs.size()) throw ParseError("X and Z lists differ in length");
  return PauliOperator(q, phase, ModVector(q, xs), ModVector(q, zs));
}

}  // namespace qsub
