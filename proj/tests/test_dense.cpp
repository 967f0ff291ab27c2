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

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "qsub/dense.hpp"

namespace qsub {
namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

ModVector vec(std::int64_t q, std::initializer_list<std::int64_t> v) { return ModVector(q, std::vector<std::int64_t>(v)); }

TEST(DenseCircuit, EmptyCircuitIsIdentity) {
  const auto u = circuit_to_dense(CliffordCircuit(2, 3));
  EXPECT_TRUE(u.matrix().isApprox(ComplexMatrix::Identity(9, 9)));
}

TEST(DenseCircuit, QubitFourierIsHadamard) {
  ComplexMatrix h(2, 2);
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  EXPECT_TRUE(circuit_to_dense(CliffordCircuit(1, 2, {Gate::f(0)})).matrix().isApprox(h));
}

TEST(DenseCircuit, QutritPhaseGate) {
  ComplexMatrix s = ComplexMatrix::Zero(3, 3);
  s(0, 0) = 1;
  s(1, 1) = 1;
  s(2, 2) = root_of_unity(1, 3);
  EXPECT_TRUE(circuit_to_dense(CliffordCircuit(1, 3, {Gate::s(0)})).matrix().isApprox(s));
}

TEST(DenseCircuit, CnotPermutesBasis) {
  const auto u = circuit_to_dense(CliffordCircuit(2, 3, {Gate::cnot(0, 1)})).matrix();
  for (std::int64_t a = 0; a < 3; ++a) {
    for (std::int64_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(std::abs(u(a * 3 + (a + b) % 3, a * 3 + b)), 1.0, 1e-12);
    }
  }
}

TEST(DenseCircuit, OutputIsUnitary) {
  for (std::int64_t q : {2, 3, 5}) {
    const auto u = circuit_to_dense(random_clifford_circuit(2, q, 25, 7)).matrix();
    EXPECT_TRUE((u.adjoint() * u).isIdentity(1e-9));
  }
}

TEST(DenseUnitaryTest, RejectsNonUnitaryInput) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_THROW(DenseUnitary(1, 2, m), InvalidArgument);
  EXPECT_THROW(DenseUnitary(1, 2, ComplexMatrix::Identity(3, 3)), Error);
}

TEST(NormalizedTrace, Examples) {
  EXPECT_NEAR(std::abs(normalized_trace(DenseUnitary::identity(2, 3)) - Complex(1, 0)), 0, 1e-12);
  EXPECT_NEAR(std::abs(normalized_trace(circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)}))) - Complex(0.5, 0.5)),
              0, 1e-12);
  EXPECT_NEAR(std::abs(normalized_trace(circuit_to_dense(CliffordCircuit(1, 2, {Gate::x(0)})))), 0, 1e-12);
}

TEST(NormalizedTrace, BoundedAndMaximalOnlyForScalars) {
  for (std::int64_t q : {2, 3}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto u = random_unitary(2, q, s);
      EXPECT_LT(std::abs(normalized_trace(u)), 1.0 - 1e-6);
    }
    const auto phased = DenseUnitary::trusted(2, q, ComplexMatrix::Identity(q * q, q * q) * root_of_unity(1, 7));
    EXPECT_NEAR(std::abs(normalized_trace(phased)), 1.0, 1e-12);
    EXPECT_TRUE(is_identity_up_to_phase(phased));
  }
}

TEST(GlobalPhase, Examples) {
  const auto s = circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)}));
  const auto phased = DenseUnitary::trusted(1, 2, s.matrix() * Complex(0, 1));
  EXPECT_TRUE(equal_up_to_global_phase(s, phased));
  EXPECT_FALSE(equal_up_to_global_phase(s, DenseUnitary::identity(1, 2)));
  const auto x = circuit_to_dense(CliffordCircuit(1, 2, {Gate::x(0)}));
  EXPECT_FALSE(equal_up_to_global_phase(x, DenseUnitary::identity(1, 2)));
  EXPECT_FALSE(is_identity_up_to_phase(x));
}

TEST(Epr, ModesAgreeOnExamples) {
  const auto id = DenseUnitary::identity(2, 2);
  const auto s = circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)}));
  const auto x = circuit_to_dense(CliffordCircuit(1, 2, {Gate::x(0)}));
  for (auto mode : {EprMode::Analytic, EprMode::Statevector}) {
    EprOptions opt;
    opt.mode = mode;
    EXPECT_NEAR(epr_acceptance(id, opt), 1.0, 1e-12);
    EXPECT_NEAR(epr_acceptance(s, opt), 0.5, 1e-12);
    EXPECT_NEAR(epr_acceptance(x, opt), 0.0, 1e-12);
  }
}

TEST(Epr, StatevectorEqualsSquaredTrace) {
  for (std::int64_t q : {2, 3, 5}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto u = circuit_to_dense(random_clifford_circuit(q == 5 ? 1 : 2, q, 15, s));
      EprOptions opt;
      opt.mode = EprMode::Statevector;
      EXPECT_NEAR(epr_acceptance(u, opt), std::norm(normalized_trace(u)), 1e-9);
    }
    const auto r = random_unitary(1, q, 11);
    EprOptions opt;
    opt.mode = EprMode::Statevector;
    EXPECT_NEAR(epr_acceptance(r, opt), std::norm(normalized_trace(r)), 1e-9);
  }
}

TEST(Epr, SampledRateWithinFourSigma) {
  const auto s = circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)}));
  EprOptions opt;
  opt.mode = EprMode::Sample;
  opt.shots = 20000;
  opt.seed = 5;
  const double sigma = std::sqrt(0.25 / static_cast<double>(opt.shots));
  EXPECT_NEAR(epr_acceptance(s, opt), 0.5, 4 * sigma);
  opt.seed = 6;
  EXPECT_EQ(epr_acceptance(circuit_to_dense(CliffordCircuit(1, 2, {Gate::x(0)})), opt), 0.0);
  EXPECT_EQ(epr_acceptance(DenseUnitary::identity(1, 3), opt), 1.0);
}

TEST(Epr, SamplingIsDeterministicPerSeed) {
  EXPECT_EQ(sample_acceptance(0.3, 1000, 9), sample_acceptance(0.3, 1000, 9));
  EXPECT_THROW(sample_acceptance(0.3, 0, 9), InvalidArgument);
}

TEST(Epr, StatevectorRespectsSquaredDimensionCap) {
  EXPECT_THROW(epr_statevector_probability(3, 3, [](ComplexMatrix&) {}, 100), CapExceeded);
  EXPECT_NO_THROW(epr_statevector_probability(2, 3, [](ComplexMatrix&) {}, 100));
}

TEST(PauliDecompositionTest, Identity) {
  const auto dec = pauli_decompose(DenseUnitary::identity(1, 3));
  EXPECT_EQ(dec.support_size(), 1U);
  EXPECT_NEAR(std::abs(dec.at(vec(3, {0}), vec(3, {0})) - Complex(1, 0)), 0, 1e-12);
}

TEST(PauliDecompositionTest, Hadamard) {
  const auto dec = pauli_decompose(circuit_to_dense(CliffordCircuit(1, 2, {Gate::f(0)})));
  EXPECT_EQ(dec.support_size(), 2U);
  EXPECT_NEAR(std::abs(dec.at(vec(2, {1}), vec(2, {0})) - kInvSqrt2), 0, 1e-12);
  EXPECT_NEAR(std::abs(dec.at(vec(2, {0}), vec(2, {1})) - kInvSqrt2), 0, 1e-12);
}

TEST(PauliDecompositionTest, QubitPhaseGate) {
  const auto dec = pauli_decompose(circuit_to_dense(CliffordCircuit(1, 2, {Gate::s(0)})));
  EXPECT_EQ(dec.support_size(), 2U);
  EXPECT_NEAR(std::abs(dec.at(vec(2, {0}), vec(2, {0})) - Complex(0.5, 0.5)), 0, 1e-12);
  EXPECT_NEAR(std::abs(dec.at(vec(2, {0}), vec(2, {1})) - Complex(0.5, -0.5)), 0, 1e-12);
}

TEST(PauliDecompositionTest, ReconstructionAndParseval) {
  for (std::int64_t q : {2, 3, 5}) {
    const std::size_t n = q == 5 ? 1 : 2;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto u = random_unitary(n, q, s);
      const auto dec = pauli_decompose(u);
      EXPECT_LT((reconstruct(dec) - u.matrix()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_NEAR(dec.squared_norm(), 1.0, 1e-9);
      EXPECT_FALSE(is_pauli_up_to_phase(u));
    }
  }
}

TEST(PauliDecompositionTest, EncodeDecodeRoundTrip) {
  const auto dec = pauli_decompose(DenseUnitary::identity(2, 3));
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(dec.encode(dec.decode(i)), i);
}

TEST(PauliDecompositionTest, PauliOperatorsAreDetected) {
  for (std::int64_t q : {2, 3}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      EXPECT_TRUE(is_pauli_up_to_phase(pauli_to_dense(sample_basis_pauli(2, q, s))));
    }
  }
  EXPECT_FALSE(is_pauli_up_to_phase(circuit_to_dense(CliffordCircuit(1, 3, {Gate::s(0)}))));
}

TEST(Commutator, Examples) {
  EXPECT_EQ(commutator_identity_probability(pauli_to_dense(PauliOperator::x_on(1, 3, 0))), (Fraction{1, 1}));
  EXPECT_EQ(commutator_identity_probability(t_gate()), (Fraction{1, 2}));
  EXPECT_EQ(commutator_identity_probability(circuit_to_dense(CliffordCircuit(1, 2, {Gate::f(0)}))), (Fraction{1, 2}));
  EXPECT_EQ(commutator_identity_probability(circuit_to_dense(CliffordCircuit(1, 3, {Gate::f(0)}))), (Fraction{1, 9}));
}

// P†UP ∝ U exactly when U P U† ∝ P, so the dense count must match a count
// over tableau images.
TEST(Commutator, MatchesTableauFixedPoints) {
  for (std::int64_t q : {2, 3}) {
    for (std::uint64_t s = 0; s < 15; ++s) {
      const auto c = random_clifford_circuit(2, q, 12, s);
      const auto tab = conjugation_tableau(c);
      std::uint64_t fixed = 0;
      const std::size_t d = static_cast<std::size_t>(q * q);
      for (std::size_t i = 0; i < d * d; ++i) {
        std::size_t r = i;
        std::vector<std::int64_t> xs(2), zs(2);
        for (auto& v : xs) { v = static_cast<std::int64_t>(r % static_cast<std::size_t>(q)); r /= static_cast<std::size_t>(q); }
        for (auto& v : zs) { v = static_cast<std::int64_t>(r % static_cast<std::size_t>(q)); r /= static_cast<std::size_t>(q); }
        const PauliOperator basis(q, 0, ModVector(q, xs), ModVector(q, zs));
        const auto image = conjugate_pauli(tab, basis);
        fixed += (image.x() == basis.x() && image.z() == basis.z()) ? 1 : 0;
      }
      EXPECT_EQ(commutator_identity_probability(circuit_to_dense(c)), (Fraction{fixed, d * d}));
    }
  }
}

TEST(Special, TGateAndKron) {
  const auto t = t_gate();
  EXPECT_NEAR(std::abs(t.matrix()(1, 1) - std::polar(1.0, std::numbers::pi / 4)), 0, 1e-12);
  const auto k = kron(t, DenseUnitary::identity(1, 2));
  EXPECT_EQ(k.n(), 2U);
  EXPECT_NEAR(std::abs(k.matrix()(2, 2) - t.matrix()(1, 1)), 0, 1e-12);
  EXPECT_THROW(diagonal_phase_gate(3, {0.1}), DimensionMismatch);
}

TEST(MatrixJson, RoundTrip) {
  const auto u = random_unitary(1, 3, 4);
  std::stringstream ss(unitary_to_json(u).dump());
  const auto back = load_unitary(ss);
  EXPECT_EQ(back.n(), 1U);
  EXPECT_EQ(back.q(), 3);
  EXPECT_LT((back.matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MatrixJson, RejectsMalformedInput) {
  std::stringstream garbage("{not json");
  EXPECT_THROW(load_unitary(garbage), ParseError);
  EXPECT_THROW(unitary_from_json(nlohmann::json::parse(R"({"n":1,"q":2,"re":[[1,0]],"im":[[0,0]]})")), ParseError);
  EXPECT_THROW(unitary_from_json(nlohmann::json::parse(R"({"n":1,"q":4,"re":[],"im":[]})")), ParseError);
  EXPECT_THROW(unitary_from_json(nlohmann::json::parse(R"({"n":1,"q":2,"re":[[1,1],[0,1]],"im":[[0,0],[0,0]]})")),
               InvalidArgument);
}

TEST(DimensionCap, ExceededRaisesCapExceeded) {
  EXPECT_THROW(circuit_to_dense(CliffordCircuit(13, 2), 4096), CapExceeded);
  EXPECT_NO_THROW(circuit_to_dense(CliffordCircuit(12, 2), 4096));
  try {
    checked_dimension(3, 5, 100);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.requested(), 125U);
    EXPECT_EQ(e.cap(), 100U);
  }
}

TEST(DimensionCap, EnvironmentOverridesDefault) {
  EXPECT_EQ(default_dim_cap(), kDefaultDimCap);
  ::setenv("QSUB_DIM_CAP", "8", 1);
  EXPECT_EQ(default_dim_cap(), 8U);
  EXPECT_THROW(circuit_to_dense(CliffordCircuit(4, 2)), CapExceeded);
  ::unsetenv("QSUB_DIM_CAP");
  EXPECT_NO_THROW(circuit_to_dense(CliffordCircuit(4, 2)));
}

}  // namespace
}  // namespace qsub
