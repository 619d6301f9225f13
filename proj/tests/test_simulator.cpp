// Copyright 2026 The CSM Toolbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "csm/lgt_models.hpp"
#include "csm/simulator.hpp"
#include "support/oracles.hpp"

namespace csm {
namespace {

TEST(QuantumState, Validation) {
  EXPECT_THROW(QuantumState::pure(Vector::Ones(4)), InvalidArgument);
  EXPECT_THROW(QuantumState::pure(Vector::Ones(3).normalized()), DimensionMismatch);
  Matrix bad = Matrix::Identity(2, 2);
  EXPECT_THROW(QuantumState::mixed(bad), InvalidArgument);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(QuantumState::mixed(bad), InvalidArgument);
  EXPECT_THROW(QuantumState::basis(2, 4), InvalidArgument);
  EXPECT_THROW(QuantumState::basis(kMaxStateQubits + 1, 0), CapExceeded);
}

TEST(Gates, XFlipsBasisState) {
  Circuit c(1);
  c.x(0);
  const QuantumState s = apply(QuantumState::basis(1, 0), c);
  EXPECT_NEAR(std::abs(s.vector()[1]), 1.0, 1e-15);
}

TEST(Gates, CnotTruthTable) {
  Circuit c(2);
  c.cnot(0, 1);
  const std::uint64_t expect[4] = {0b00, 0b01, 0b11, 0b10};
  for (std::uint64_t b = 0; b < 4; ++b) {
    const QuantumState s = apply(QuantumState::basis(2, b), c);
    EXPECT_NEAR(std::abs(s.vector()[expect[b]]), 1.0, 1e-15) << b;
  }
}

TEST(Gates, RotationsMatchExponentials) {
  for (char p : {'X', 'Y', 'Z'}) {
    Circuit c(2);
    if (p == 'X') c.rx(1, 0.37);
    if (p == 'Y') c.ry(1, 0.37);
    if (p == 'Z') c.rz(1, 0.37);
    const std::string letters = std::string("I") + p;
    EXPECT_LT((circuit_unitary(c) - oracles::pauli_rotation(letters, 0.37)).norm(), 1e-14) << p;
  }
}

TEST(Gates, HadamardAndGlobalPhase) {
  Circuit c(1);
  c.h(0).global_phase(0.3);
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h *= std::exp(Complex(0, -0.3)) / std::sqrt(2.0);
  EXPECT_LT((circuit_unitary(c) - h).norm(), 1e-14);
}

TEST(Gates, RejectsBadTargets) {
  Circuit c(2);
  EXPECT_THROW(c.rx(2, 0.1), InvalidArgument);
  EXPECT_THROW(c.cnot(1, 1), InvalidArgument);
  EXPECT_THROW(c.depolarize(0, 1, 1.5), InvalidArgument);
}

TEST(Decomposition, ThreeBodyRotationsAreExact) {
  for (const char* letters : {"XZX", "YZY", "YZX", "XXY", "ZZZ", "IXY", "XIZ"}) {
    Circuit c(3);
    c.pauli_rotation_decomposed(letters, {0, 1, 2}, -0.4123);
    EXPECT_LT((circuit_unitary(c) - oracles::pauli_rotation(letters, -0.4123)).norm(), 1e-13)
        << letters;
  }
}

TEST(Decomposition, FourBodyOnNonContiguousTargets) {
  Circuit c(5);
  c.pauli_rotation_decomposed("YXZY", {4, 0, 2, 1}, 0.81);
  // Letters placed on qubits 0..4: q0 = X, q1 = Y, q2 = Z, q3 = I, q4 = Y.
  EXPECT_LT((circuit_unitary(c) - oracles::pauli_rotation("XYZIY", 0.81)).norm(), 1e-13);
}

TEST(Decomposition, ThreeBodyUsesThreeTwoQubitGates) {
  Circuit c(3);
  c.pauli_rotation_decomposed("XZX", {0, 1, 2}, 0.1);
  EXPECT_EQ(c.two_qubit_gate_count(), 3);  // CNOT, ZZ, CNOT
}

TEST(Depolarizing, FullStrengthGivesMaximallyMixedPair) {
  std::mt19937_64 rng(1);
  const QuantumState rho = QuantumState::mixed(oracles::random_density(4, rng));
  const QuantumState out = depolarize_two_qubit(rho, 0, 1, 1.0);
  // lambda = 1 leaves rho/16 + (1/16) sum_P P rho P = Tr(rho) I / 4.
  EXPECT_LT((out.matrix() - Matrix::Identity(4, 4) / 4.0).norm(), 1e-14);
}

TEST(Depolarizing, ZeroStrengthIsIdentity) {
  std::mt19937_64 rng(2);
  const QuantumState rho = QuantumState::mixed(oracles::random_density(8, rng));
  EXPECT_LT((depolarize_two_qubit(rho, 0, 2, 0.0).matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(Depolarizing, RejectsPureAndBadQubits) {
  EXPECT_THROW(depolarize_two_qubit(QuantumState::basis(2, 0), 0, 1, 0.1), InvalidArgument);
  const QuantumState m = QuantumState::maximally_mixed(2);
  EXPECT_THROW(depolarize_two_qubit(m, 0, 0, 0.1), InvalidArgument);
  EXPECT_THROW(depolarize_two_qubit(m, 0, 1, -0.1), InvalidArgument);
}

// Kraus form of the channel on qubits (0, 2) of three, built from explicit
// Kronecker products.
TEST(Depolarizing, MatchesKrausOracle) {
  std::mt19937_64 rng(3);
  const oracles::Matrix r = oracles::random_density(8, rng);
  const double lam = 0.37;
  oracles::Matrix ref = (1 - 15 * lam / 16) * r;
  const char letters[] = "IXYZ";
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      const oracles::Matrix p =
          oracles::kron_ops(3, {{0, oracles::pauli(letters[a])}, {2, oracles::pauli(letters[b])}});
      ref += lam / 16 * p * r * p;
    }
  const QuantumState out = depolarize_two_qubit(QuantumState::mixed(r), 0, 2, lam);
  EXPECT_LT((out.matrix() - ref).norm(), 1e-14);
}

TEST(Circuit, WithDepolarizingInsertsAfterTwoQubitGates) {
  Circuit c(3);
  c.h(0).cnot(0, 1).rz(1, 0.2).pauli_rotation("ZZ", {1, 2}, 0.3);
  const Circuit noisy = c.with_depolarizing(0.01);
  ASSERT_EQ(noisy.gates().size(), 6u);
  EXPECT_TRUE(noisy.gates()[2].is_channel());
  EXPECT_TRUE(noisy.gates()[5].is_channel());
  EXPECT_EQ(noisy.gates()[5].targets, (std::vector<int>{1, 2}));
  EXPECT_THROW(circuit_unitary(noisy), InvalidArgument);
}

TEST(Apply, PurePromotedAtFirstChannel) {
  Circuit c(2);
  c.h(0).cnot(0, 1).depolarize(0, 1, 0.2);
  const QuantumState s = apply(QuantumState::basis(2, 0), c);
  EXPECT_FALSE(s.is_pure());
  EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_THROW(apply(QuantumState::basis(3, 0), c), DimensionMismatch);
}

TEST(Apply, MixedEvolutionMatchesUnitaryConjugation) {
  std::mt19937_64 rng(4);
  Circuit c(3);
  c.h(0).ry(1, 0.3).cnot(0, 2).pauli_rotation("XYZ", {0, 1, 2}, 0.7).rx(2, -0.2);
  const oracles::Matrix r = oracles::random_density(8, rng);
  const Matrix u = circuit_unitary(c);
  const QuantumState out = apply(QuantumState::mixed(r), c);
  EXPECT_LT((out.matrix() - u * r * u.adjoint()).norm(), 1e-13);
}

TEST(Expectation, MassTermOnLibraryStates) {
  const ModelSpec spec{Group::SU2, 2, 0.5, 0.5, 0.0};
  const OperatorSum hm = spec.mass * build_component(spec, Component::Mass);
  const auto lib = singlet_library(Group::SU2);
  EXPECT_NEAR(expectation(QuantumState::pure(lib.states.at("vac")), hm), 0.0, 1e-14);
  EXPECT_NEAR(expectation(QuantumState::pure(lib.states.at("M")), hm), 1.0, 1e-14);
}

TEST(Expectation, PureAndMixedAgreeWithDense) {
  std::mt19937_64 rng(5);
  const OperatorSum h = build_hamiltonian({Group::SU2, 2, 0.7, 1.1, 0.3});
  const oracles::Vector v = oracles::random_vector(16, rng);
  const Matrix hd = to_dense(h);
  const double ref = (v.adjoint() * hd * v)(0, 0).real();
  EXPECT_NEAR(expectation(QuantumState::pure(v), h), ref, 1e-13);
  EXPECT_NEAR(expectation(QuantumState::pure(v).to_mixed(), h), ref, 1e-13);
}

TEST(Expectation, RejectsNonHermitian) {
  const OperatorSum a = OperatorSum::single(2, 0, '+');
  EXPECT_THROW(expectation(QuantumState::basis(2, 0), a), NotHermitian);
}

TEST(Sampling, DeterministicStateGivesSingleOutcome) {
  Rng rng(1);
  const Histogram h = sample_bitstrings(QuantumState::basis(3, 5), 100, rng);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h.at(5), 100u);
}

TEST(Sampling, FrequenciesApproachProbabilities) {
  Circuit c(2);
  c.ry(0, 0.6).h(1);
  const QuantumState s = apply(QuantumState::basis(2, 0), c);
  Rng rng(2);
  const std::uint64_t shots = 100000;
  const Histogram h = sample_bitstrings(s, shots, rng);
  const RealVector p = s.probabilities();
  for (int i = 0; i < 4; ++i) {
    const double f = h.count(i) ? double(h.at(i)) / shots : 0.0;
    EXPECT_NEAR(f, p[i], 5 * std::sqrt(p[i] * (1 - p[i]) / shots) + 1e-12) << i;
  }
  std::ostringstream os;
  write_histogram_csv(os, h, 2);
  EXPECT_EQ(os.str().substr(0, 27), "basis_index,bitstring,count");
  EXPECT_THROW(sample_bitstrings(s, 0, rng), InvalidArgument);
}

class ChannelProperties : public ::testing::TestWithParam<std::uint64_t> {};

// Trace preservation, Hermiticity, positivity and complete positivity via
// the Choi matrix.
TEST_P(ChannelProperties, DepolarizingIsCptp) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 5; ++rep) {
    const double lam = u(rng);
    const QuantumState rho = QuantumState::mixed(oracles::random_density(8, rng));
    const Matrix out = depolarize_two_qubit(rho, 1, 2, lam).matrix();
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-13);
    EXPECT_LT((out - out.adjoint()).norm(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(out);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-13);

    // Choi matrix of the two-qubit channel: sum_ij |i><j| (x) E(|i><j|).
    Matrix choi = Matrix::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Matrix e = Matrix::Zero(4, 4);
        e(i, j) = 1;
        const Matrix img = depolarize_two_qubit(QuantumState::mixed_unchecked(e), 0, 1, lam).matrix();
        choi.block(4 * i, 4 * j, 4, 4) = img;
      }
    Eigen::SelfAdjointEigenSolver<Matrix> ce(choi);
    EXPECT_GT(ce.eigenvalues().minCoeff(), -1e-13);
  }
}

TEST_P(ChannelProperties, RandomCircuitsPreserveNorm) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::uniform_int_distribution<int> q(0, 3);
  Circuit c(4);
  for (int g = 0; g < 30; ++g) {
    const int a = q(rng);
    int b = q(rng);
    if (b == a) b = (a + 1) % 4;
    switch (g % 4) {
      case 0: c.rx(a, u(rng)); break;
      case 1: c.ry(a, u(rng)); break;
      case 2: c.cnot(a, b); break;
      default: c.pauli_rotation("XY", {a, b}, u(rng));
    }
  }
  const Matrix w = circuit_unitary(c);
  EXPECT_LT((w.adjoint() * w - Matrix::Identity(16, 16)).norm(), 1e-12);
  const QuantumState s = apply(QuantumState::pure(oracles::random_vector(16, rng)), c);
  EXPECT_NEAR(s.vector().norm(), 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, ChannelProperties, ::testing::Values(11u, 23u, 37u));

}  // namespace
}  // namespace csm
