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
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsub/errors.hpp"
#include "qsub/modring.hpp"
#include "qsub/pauli.hpp"
#include "qsub/random.hpp"

namespace qsub {

/*******************************************************************************
 * GATES AND CIRCUITS
 ******************************************************************************/

/**
 * Gate alphabet on prime-arity qudits:
 *   F|x⟩ = q^{-1/2} Σ_a ω_q^{ax}|a⟩
 *   S|x⟩ = ω_4^x|x⟩ (q = 2),  ω_q^{x(x-1)/2}|x⟩ (odd q)
 *   CNOT|x,y⟩ = |x, x+y⟩
 *   X|x⟩ = |x+1⟩,  Z|x⟩ = ω_q^x|x⟩
 */
enum class GateKind { F, S, CNOT, X, Z };

inline const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::F: return "F";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
  }
  return "?";
}

struct Gate {
  GateKind kind;
  std::size_t target;
  std::size_t control = 0;  // CNOT only

  static Gate f(std::size_t w) { return {GateKind::F, w}; }
  static Gate s(std::size_t w) { return {GateKind::S, w}; }
  static Gate x(std::size_t w) { return {GateKind::X, w}; }
  static Gate z(std::size_t w) { return {GateKind::Z, w}; }
  static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, t, c}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/** Smallest k ≥ 1 with gate^k = I exactly. */
inline std::int64_t gate_order(GateKind kind, std::int64_t q) {
  switch (kind) {
    case GateKind::F: return q == 2 ? 2 : 4;
    case GateKind::S: return q == 2 ? 4 : q;
    default: return q;
  }
}

class CliffordCircuit {
 public:
  CliffordCircuit(std::size_t n, std::int64_t q) : n_(n), q_(q) {
    require_prime(q);
    if (n == 0) throw InvalidArgument("a circuit needs at least one qudit");
  }

  CliffordCircuit(std::size_t n, std::int64_t q, std::vector<Gate> gates)
      : CliffordCircuit(n, q) {
    for (const auto& g : gates) append(g);
  }

  std::size_t n() const { return n_; }
  std::int64_t q() const { return q_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  CliffordCircuit& append(const Gate& g) {
    if (g.target >= n_ || (g.kind == GateKind::CNOT && g.control >= n_)) {
      throw InvalidArgument("gate wire out of range");
    }
    if (g.kind == GateKind::CNOT && g.control == g.target) {
      throw InvalidArgument("CNOT control equals target");
    }
    gates_.push_back(g);
    return *this;
  }

  /** Appends `other` after this circuit (other acts later in time). */
  CliffordCircuit& append(const CliffordCircuit& other) {
    if (other.n_ != n_ || other.q_ != q_) {
      throw DimensionMismatch("concatenating circuits of different shape");
    }
    for (const auto& g : other.gates_) gates_.push_back(g);
    return *this;
  }

  /** Appends `other` with every wire shifted by `offset`. */
  CliffordCircuit& append_shifted(const CliffordCircuit& other, std::size_t offset) {
    if (other.q_ != q_) throw DimensionMismatch("arity mismatch");
    for (auto g : other.gates_) {
      g.target += offset;
      g.control += offset;
      append(g);
    }
    return *this;
  }

  friend bool operator==(const CliffordCircuit&, const CliffordCircuit&) = default;

 private:
  std::size_t n_;
  std::int64_t q_;
  std::vector<Gate> gates_;
};

/** Inverse circuit: reversed order, each gate g replaced by g^{order-1}. */
inline CliffordCircuit dagger(const CliffordCircuit& c) {
  CliffordCircuit out(c.n(), c.q());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    for (std::int64_t k = 1; k < gate_order(it->kind, c.q()); ++k) out.append(*it);
  }
  return out;
}

/** Gates realizing X^x Z^z up to its phase (Z block first in time). */
inline CliffordCircuit pauli_circuit(const PauliOperator& p) {
  CliffordCircuit out(p.n(), p.q());
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (Residue k = 0; k < p.z()[i]; ++k) out.append(Gate::z(i));
  }
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (Residue k = 0; k < p.x()[i]; ++k) out.append(Gate::x(i));
  }
  return out;
}

/*******************************************************************************
 * CONJUGATION TABLEAU
 ******************************************************************************/

/**
 * Images C·X_i·C† (entry i) and C·Z_i·C† (entry n+i) of the single-wire
 * generators. By linearity these determine C·X^a Z^b·C† for all a, b.
 */
class ConjugationTableau {
 public:
  /** Identity tableau. */
  ConjugationTableau(std::size_t n, std::int64_t q) : n_(n), q_(q) {
    images_.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) images_.push_back(PauliOperator::x_on(n, q, i));
    for (std::size_t i = 0; i < n; ++i) images_.push_back(PauliOperator::z_on(n, q, i));
  }

  ConjugationTableau(std::size_t n, std::int64_t q, std::vector<PauliOperator> images)
      : n_(n), q_(q), images_(std::move(images)) {
    if (images_.size() != 2 * n) throw DimensionMismatch("tableau needs 2n images");
    for (const auto& p : images_) {
      if (p.n() != n || p.q() != q) throw DimensionMismatch("tableau image shape");
    }
  }

  std::size_t n() const { return n_; }
  std::int64_t q() const { return q_; }
  const PauliOperator& x_image(std::size_t i) const { return images_[i]; }
  const PauliOperator& z_image(std::size_t i) const { return images_[n_ + i]; }
  const std::vector<PauliOperator>& images() const { return images_; }
  std::vector<PauliOperator>& mutable_images() { return images_; }

  friend bool operator==(const ConjugationTableau&, const ConjugationTableau&) = default;

 private:
  std::size_t n_;
  std::int64_t q_;
  std::vector<PauliOperator> images_;
};

/**
 * Image of P under the tableau: ω^{p} Π_i img(X_i)^{x_i} Π_i img(Z_i)^{z_i}.
 */
inline PauliOperator conjugate_pauli(const ConjugationTableau& t, const PauliOperator& p) {
  if (p.n() != t.n() || p.q() != t.q()) {
    throw DimensionMismatch("Pauli does not match tableau");
  }
  PauliOperator out(t.n(), t.q());
  out.add_phase(p.phase_exp());
  for (std::size_t i = 0; i < t.n(); ++i) {
    for (Residue k = 0; k < p.x()[i]; ++k) out = out * t.x_image(i);
  }
  for (std::size_t i = 0; i < t.n(); ++i) {
    for (Residue k = 0; k < p.z()[i]; ++k) out = out * t.z_image(i);
  }
  return out;
}

/**
 * Local conjugation rules g·P·g† on the gate's own wires (wire 0 = control for
 * CNOT). Checked against dense conjugation in the test suite.
 */
inline ConjugationTableau gate_tableau(GateKind kind, std::int64_t q) {
  const std::int64_t u = omega_q_unit(q);
  auto local = [q](std::int64_t phase, std::vector<std::int64_t> x,
                   std::vector<std::int64_t> z) {
    return PauliOperator(q, phase, ModVector(q, std::move(x)), ModVector(q, std::move(z)));
  };
  switch (kind) {
    case GateKind::F:  // X ↦ Z, Z ↦ X^{-1}
      return ConjugationTableau(1, q, {local(0, {0}, {1}), local(0, {q - 1}, {0})});
    case GateKind::S:  // X ↦ XZ (times ω_4 for qubits), Z ↦ Z
      return ConjugationTableau(
          1, q, {local(q == 2 ? 1 : 0, {1}, {1}), local(0, {0}, {1})});
    case GateKind::X:  // Z ↦ ω_q^{-1} Z
      return ConjugationTableau(1, q, {local(0, {1}, {0}), local(-u, {0}, {1})});
    case GateKind::Z:  // X ↦ ω_q X
      return ConjugationTableau(1, q, {local(u, {1}, {0}), local(0, {0}, {1})});
    case GateKind::CNOT:  // X_c ↦ X_c X_t, Z_t ↦ Z_c^{-1} Z_t
      return ConjugationTableau(
          2, q,
          {local(0, {1, 1}, {0, 0}), local(0, {0, 1}, {0, 0}),
           local(0, {0, 0}, {1, 0}), local(0, {0, 0}, {q - 1, 1})});
  }
  throw InvalidArgument("unknown gate");
}

namespace detail {

// Precomputed local rules for one arity.
struct GateRules {
  explicit GateRules(std::int64_t q)
      : f(gate_tableau(GateKind::F, q)), s(gate_tableau(GateKind::S, q)),
        x(gate_tableau(GateKind::X, q)), z(gate_tableau(GateKind::Z, q)),
        cnot(gate_tableau(GateKind::CNOT, q)) {}

  const ConjugationTableau& of(GateKind kind) const {
    switch (kind) {
      case GateKind::F: return f;
      case GateKind::S: return s;
      case GateKind::X: return x;
      case GateKind::Z: return z;
      default: return cnot;
    }
  }

  ConjugationTableau f, s, x, z, cnot;
};

// p ← g·p·g†, touching only the gate's wires.
inline void conjugate_in_place(const GateRules& rules, const Gate& g, PauliOperator& p) {
  const std::int64_t q = p.q();
  if (g.kind == GateKind::CNOT) {
    PauliOperator local(
        q, 0, ModVector(q, {p.x()[g.control], p.x()[g.target]}),
        ModVector(q, {p.z()[g.control], p.z()[g.target]}));
    const auto img = conjugate_pauli(rules.cnot, local);
    p.set_x(g.control, img.x()[0]);
    p.set_x(g.target, img.x()[1]);
    p.set_z(g.control, img.z()[0]);
    p.set_z(g.target, img.z()[1]);
    p.add_phase(img.phase_exp());
    return;
  }
  PauliOperator local(q, 0, ModVector(q, {p.x()[g.target]}), ModVector(q, {p.z()[g.target]}));
  const auto img = conjugate_pauli(rules.of(g.kind), local);
  p.set_x(g.target, img.x()[0]);
  p.set_z(g.target, img.z()[0]);
  p.add_phase(img.phase_exp());
}

}  // namespace detail

/** Tableau of the whole circuit, folded gate by gate. O(n·|C|). */
inline ConjugationTableau conjugation_tableau(const CliffordCircuit& c) {
  ConjugationTableau t(c.n(), c.q());
  const detail::GateRules rules(c.q());
  for (const auto& g : c.gates()) {
    for (auto& img : t.mutable_images()) detail::conjugate_in_place(rules, g, img);
  }
  return t;
}

/**
 * White-box identity test: accept iff every generator is its own image with
 * phase 0, i.e. C ∈ 𝓘. Perfect completeness and soundness.
 */
inline bool wb_identity_test(const CliffordCircuit& c) {
  const auto t = conjugation_tableau(c);
  const ConjugationTableau identity(c.n(), c.q());
  return t == identity;
}

/**
 * White-box Pauli test: accept iff each generator is fixed up to phase. A
 * Clifford with that property is, up to global phase, the Pauli whose
 * commutation phases match.
 */
inline bool wb_pauli_test(const CliffordCircuit& c) {
  const auto t = conjugation_tableau(c);
  const ConjugationTableau identity(c.n(), c.q());
  for (std::size_t i = 0; i < t.images().size(); ++i) {
    if (!t.images()[i].equal_up_to_phase(identity.images()[i])) return false;
  }
  return true;
}

/*******************************************************************************
 * REDUCTION CIRCUITS
 ******************************************************************************/

/**
 * Circuit on 2n blocks of n wires whose unitary is
 * ⊗_i (C·X_i·C†) ⊗ ⊗_i (C·Z_i·C†). It is Pauli iff C normalizes the
 * generators.
 */
inline CliffordCircuit build_ctp_to_ptp_circuit(const CliffordCircuit& c) {
  const std::size_t n = c.n();
  CliffordCircuit out(2 * n * n, c.q());
  const auto inverse = dagger(c);
  for (std::size_t b = 0; b < 2 * n; ++b) out.append_shifted(inverse, b * n);
  for (std::size_t i = 0; i < n; ++i) out.append(Gate::x(i * n + i));
  for (std::size_t i = 0; i < n; ++i) out.append(Gate::z((n + i) * n + i));
  for (std::size_t b = 0; b < 2 * n; ++b) out.append_shifted(c, b * n);
  return out;
}

/** Circuit whose unitary is C·P·C†·P† up to global phase. */
inline CliffordCircuit build_commutator_circuit(const CliffordCircuit& c, const PauliOperator& p) {
  if (p.n() != c.n() || p.q() != c.q()) {
    throw DimensionMismatch("Pauli does not match circuit");
  }
  const auto pc = pauli_circuit(p);
  CliffordCircuit out(c.n(), c.q());
  out.append(dagger(pc));
  out.append(dagger(c));
  out.append(pc);
  out.append(c);
  return out;
}

/** depth gates drawn uniformly from {F(i), S(i), CNOT(c,t)}; no CNOT when n = 1. */
inline CliffordCircuit random_clifford_circuit(
    std::size_t n, std::int64_t q, std::size_t depth, std::uint64_t seed) {
  CliffordCircuit out(n, q);
  Rng rng(seed);
  const std::int64_t kinds = n >= 2 ? 3 : 2;
  const auto wires = static_cast<std::int64_t>(n);
  for (std::size_t k = 0; k < depth; ++k) {
    switch (uniform_below(rng, kinds)) {
      case 0: out.append(Gate::f(uniform_below(rng, wires))); break;
      case 1: out.append(Gate::s(uniform_below(rng, wires))); break;
      default: {
        const auto c = uniform_below(rng, wires);
        auto t = uniform_below(rng, wires - 1);
        if (t >= c) ++t;
        out.append(Gate::cnot(c, t));
      }
    }
  }
  return out;
}

/*******************************************************************************
 * TEXT FORMAT
 *
 *   qudits <n> <q>
 *   F <i> | S <i> | X <i> | Z <i> | CNOT <c> <t>
 *
 * One directive per line; '#' starts a comment.
 ******************************************************************************/

inline std::string format_circuit(const CliffordCircuit& c) {
  std::ostringstream out;
  out << "qudits " << c.n() << ' ' << c.q() << '\n';
  for (const auto& g : c.gates()) {
    out << gate_name(g.kind) << ' ';
    if (g.kind == GateKind::CNOT) out << g.control << ' ';
    out << g.target << '\n';
  }
  return out.str();
}

namespace detail {

inline std::size_t parse_index(const std::string& s, std::size_t line) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("expected a non-negative integer, got '" + s + "'", line);
  }
  return static_cast<std::size_t>(std::stoul(s));
}

}  // namespace detail

inline CliffordCircuit parse_circuit(std::istream& in) {
  std::optional<CliffordCircuit> circuit;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!circuit) {
      if (tok[0] != "qudits" || tok.size() != 3) {
        throw ParseError("first directive must be 'qudits <n> <q>'", line);
      }
      const auto n = detail::parse_index(tok[1], line);
      const auto q = static_cast<std::int64_t>(detail::parse_index(tok[2], line));
      if (n == 0) throw ParseError("qudit count must be positive", line);
      if (!is_prime(q)) throw ParseError("arity " + tok[2] + " is not prime", line);
      circuit.emplace(n, q);
      continue;
    }

    const std::string& op = tok[0];
    const std::size_t arity = op == "CNOT" ? 2 : 1;
    if (op != "F" && op != "S" && op != "X" && op != "Z" && op != "CNOT") {
      throw ParseError("unknown gate '" + op + "'", line);
    }
    if (tok.size() != arity + 1) {
      throw ParseError("gate '" + op + "' takes " + std::to_string(arity) + " wire(s)", line);
    }
    std::vector<std::size_t> wires;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      wires.push_back(detail::parse_index(tok[i], line));
      if (wires.back() >= circuit->n()) throw ParseError("wire out of range", line);
    }
    if (op == "CNOT") {
      if (wires[0] == wires[1]) throw ParseError("CNOT control equals target", line);
      circuit->append(Gate::cnot(wires[0], wires[1]));
    } else if (op == "F") {
      circuit->append(Gate::f(wires[0]));
    } else if (op == "S") {
      circuit->append(Gate::s(wires[0]));
    } else if (op == "X") {
      circuit->append(Gate::x(wires[0]));
    } else {
      circuit->append(Gate::z(wires[0]));
    }
  }
  if (!circuit) throw ParseError("missing 'qudits <n> <q>' header", line);
  return *circuit;
}

inline CliffordCircuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  return parse_circuit(in);
}

}  // namespace qsub
