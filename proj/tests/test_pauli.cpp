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

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qsub/dense.hpp"
#include "qsub/pauli.hpp"

namespace qsub {
namespace {

PauliOperator single(std::int64_t q, std::int64_t phase, std::int64_t x, std::int64_t z) {
  return PauliOperator(q, phase, ModVector(q, {x}), ModVector(q, {z}));
}

// Every ω^p X^x Z^z on n wires.
std::vector<PauliOperator> all_paulis(std::size_t n, std::int64_t q, bool with_phases) {
  std::vector<PauliOperator> out;
  std::size_t count = 1;
  for (std::size_t i = 0; i < 2 * n; ++i) count *= static_cast<std::size_t>(q);
  const std::int64_t phases = with_phases ? phase_modulus(q) : 1;
  for (std::int64_t p = 0; p < phases; ++p) {
    for (std::size_t idx = 0; idx < count; ++idx) {
      PauliOperator op(n, q);
      op.add_phase(p);
      std::size_t rest = idx;
      for (std::size_t w = 0; w < n; ++w, rest /= static_cast<std::size_t>(q)) {
        op.set_x(w, static_cast<std::int64_t>(rest % static_cast<std::size_t>(q)));
      }
      for (std::size_t w = 0; w < n; ++w, rest /= static_cast<std::size_t>(q)) {
        op.set_z(w, static_cast<std::int64_t>(rest % static_cast<std::size_t>(q)));
      }
      out.push_back(op);
    }
  }
  return out;
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Multiply, QubitXZOrdering) {
  const auto x = single(2, 0, 1, 0);
  const auto z = single(2, 0, 0, 1);
  const auto xz = x * z;
  EXPECT_EQ(xz, single(2, 0, 1, 1));
  const auto zx = z * x;
  EXPECT_EQ(zx, single(2, 2, 1, 1));
}

// From X·Z = ω^{-1}·Z·X it follows that Z·X = ω·X·Z, so the phase exponent
// of Z·X in normal form is +1 for q = 3.
TEST(Multiply, QutritZXPicksUpOmega) {
  const auto x = single(3, 0, 1, 0);
  const auto z = single(3, 0, 0, 1);
  const auto zx = z * x;
  EXPECT_EQ(zx, single(3, 1, 1, 1));

  const auto dz = pauli_to_dense(z).matrix();
  const auto dx = pauli_to_dense(x).matrix();
  const Complex w = root_of_unity(1, 3);
  EXPECT_LT(max_diff(dz * dx, w * dx * dz), 1e-12);
  EXPECT_LT(max_diff(dx * dz, std::conj(w) * dz * dx), 1e-12);
  EXPECT_LT(max_diff(pauli_to_dense(zx).matrix(), dz * dx), 1e-12);
}

TEST(Multiply, InverseGivesIdentity) {
  for (std::int64_t q : {2, 3, 5}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto p = sample_basis_pauli(2, q, seed);
      p.add_phase(static_cast<std::int64_t>(seed));
      const auto prod = p * p.dagger();
      EXPECT_TRUE(prod.is_identity_up_to_phase());
      EXPECT_EQ(prod.phase_exp(), 0);
    }
  }
}

TEST(Multiply, ShapeMismatchThrows) {
  EXPECT_THROW(PauliOperator(1, 3) * PauliOperator(2, 3), DimensionMismatch);
  EXPECT_THROW(PauliOperator(1, 3) * PauliOperator(1, 5), DimensionMismatch);
}

TEST(Multiply, DenseHomomorphismSingleQudit) {
  for (std::int64_t q : {2, 3, 5}) {
    const auto ops = all_paulis(1, q, true);
    for (const auto& a : ops) {
      for (const auto& b : ops) {
        ASSERT_LT(max_diff(pauli_to_dense(a * b).matrix(), pauli_to_dense(a).matrix() * pauli_to_dense(b).matrix()),
                  1e-12);
      }
    }
  }
}

TEST(Multiply, DenseHomomorphismTwoQudits) {
  for (std::int64_t q : {2, 3, 5}) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      auto a = sample_basis_pauli(2, q, 2 * s);
      auto b = sample_basis_pauli(2, q, 2 * s + 1);
      a.add_phase(static_cast<std::int64_t>(s));
      b.add_phase(static_cast<std::int64_t>(3 * s));
      ASSERT_LT(max_diff(pauli_to_dense(a * b).matrix(), pauli_to_dense(a).matrix() * pauli_to_dense(b).matrix()),
                1e-12);
    }
  }
}

TEST(Dagger, MatchesDenseAdjoint) {
  for (std::int64_t q : {2, 3, 5}) {
    for (const auto& p : all_paulis(1, q, true)) {
      EXPECT_LT(max_diff(pauli_to_dense(p.dagger()).matrix(), pauli_to_dense(p).matrix().adjoint()), 1e-12);
    }
  }
}

TEST(Order, PowerOfArityIsPhaseless) {
  for (std::int64_t q : {2, 3, 5}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto p = sample_basis_pauli(3, q, s);
      EXPECT_TRUE(power(p, q == 2 ? 4 : q).is_identity_up_to_phase());
    }
  }
}

TEST(CommutationExponent, ZeroCoefficientIndex) {
  const auto p = sample_basis_pauli(2, 5, 3);
  EXPECT_EQ(commutation_exponent(p, ModVector(5, 2), ModVector(5, 2)), 0);
}

TEST(CommutationExponent, QubitXAgainstZ) {
  EXPECT_EQ(commutation_exponent(ModVector(2, {0}), ModVector(2, {1}), ModVector(2, {1}), ModVector(2, {0})), 1);
}

TEST(CommutationExponent, QutritTwoWires) {
  EXPECT_EQ(commutation_exponent(ModVector(3, {0, 2}), ModVector(3, {1, 0}), ModVector(3, {1, 0}),
                                 ModVector(3, {0, 1})),
            1);
}

// P†·(X^a Z^b)·P = ω_q^e·X^a Z^b, checked densely.
TEST(CommutationExponent, MatchesDenseConjugation) {
  for (std::int64_t q : {2, 3}) {
    const auto ops = all_paulis(2, q, false);
    for (const auto& p : ops) {
      const auto dp = pauli_to_dense(p).matrix();
      for (const auto& m : ops) {
        const auto dm = pauli_to_dense(m).matrix();
        const auto e = commutation_exponent(p, m.x(), m.z());
        ASSERT_LT(max_diff(dp.adjoint() * dm * dp, root_of_unity(e, q) * dm), 1e-12);
      }
    }
  }
}

TEST(CommutationExponent, WidthMismatchThrows) {
  EXPECT_THROW(commutation_exponent(ModVector(3, 1), ModVector(3, 1), ModVector(3, 2), ModVector(3, 2)),
               DimensionMismatch);
}

TEST(ExactTracePauli, Identity) { EXPECT_EQ(exact_trace_pauli(PauliOperator(3, 5)), ExactScaledRoot(5)); }

TEST(ExactTracePauli, NonzeroXIsZero) {
  EXPECT_TRUE(exact_trace_pauli(PauliOperator::x_on(2, 3, 1)).is_zero());
}

TEST(ExactTracePauli, QutritZIsZero) { EXPECT_TRUE(exact_trace_pauli(single(3, 0, 0, 1)).is_zero()); }

TEST(ExactTracePauli, AgreesWithDenseTrace) {
  for (std::int64_t q : {2, 3, 5}) {
    for (const auto& p : all_paulis(1, q, true)) {
      EXPECT_LT(std::abs(exact_trace_pauli(p).to_complex() - normalized_trace(pauli_to_dense(p))), 1e-12);
    }
    for (std::uint64_t s = 0; s < 100; ++s) {
      auto p = sample_basis_pauli(2, q, s);
      if (s % 3 == 0) p = PauliOperator(2, q);
      p.add_phase(static_cast<std::int64_t>(s));
      EXPECT_LT(std::abs(exact_trace_pauli(p).to_complex() - normalized_trace(pauli_to_dense(p))), 1e-12);
    }
  }
}

TEST(SampleBasisPauli, RoughlyUniformOverSeeds) {
  std::array<int, 4> counts{};
  for (std::uint64_t seed = 0; seed < 4096; ++seed) {
    const auto p = sample_basis_pauli(1, 2, seed);
    EXPECT_EQ(p.phase_exp(), 0);
    ++counts[static_cast<std::size_t>(2 * p.x()[0] + p.z()[0])];
  }
  for (int c : counts) EXPECT_NEAR(c, 1024, 150);
}

TEST(SampleBasisPauli, DeterministicPerSeed) {
  EXPECT_EQ(sample_basis_pauli(3, 5, 42), sample_basis_pauli(3, 5, 42));
}

TEST(SampleBasisPauli, EntriesInRange) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = sample_basis_pauli(2, 3, s);
    ASSERT_EQ(p.n(), 2U);
    for (std::size_t w = 0; w < 2; ++w) {
      EXPECT_LT(p.x()[w], 3);
      EXPECT_LT(p.z()[w], 3);
    }
  }
}

TEST(Literal, RoundTripsCanonicalText) {
  for (std::int64_t q : {2, 3, 5}) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      auto p = sample_basis_pauli(3, q, s);
      p.add_phase(static_cast<std::int64_t>(s));
      const auto text = p.str();
      EXPECT_EQ(parse_pauli(text), p);
      EXPECT_EQ(parse_pauli(text).str(), text);
    }
  }
  EXPECT_EQ(parse_pauli("w^1 X[1,0] Z[2,2] q=3").str(), "w^1 X[1,0] Z[2,2] q=3");
}

TEST(Literal, UnreducedExponentsAreReduced) {
  const auto p = parse_pauli("w^3 X[1,0] Z[2,2] q=3");
  EXPECT_EQ(p.phase_exp(), 0);
  EXPECT_EQ(p.x(), ModVector(3, {1, 0}));
  EXPECT_EQ(p.z(), ModVector(3, {2, 2}));
}

TEST(Literal, RejectsMalformedText) {
  for (const char* bad : {"", "w^1 X[1] Z[0]", "w^1 X[1] Z[0] q=4", "w^x X[1] Z[0] q=3", "w^1 X[1,] Z[0,0] q=3",
                          "w^1 X[1] Z[0,0] q=3", "w^01 X[1] Z[0] q=3", "v^1 X[1] Z[0] q=3", "w^-1 X[1] Z[0] q=3"}) {
    EXPECT_THROW(parse_pauli(bad), ParseError) << bad;
  }
}

}  // namespace
}  // namespace qsub
