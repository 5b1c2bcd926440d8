#include <gtest/gtest.h>

#include "helpers.hpp"
#include "pmlab/pauli.hpp"
#include "pmlab/process.hpp"

namespace pmlab {
namespace {

const SubsystemLayout kLayout = SubsystemLayout::bipartite_qubits();

TEST(PauliString, LabelRoundTrip) {
  const auto t = PauliString::from_label("ZIXZ");
  EXPECT_EQ(t.label(), "ZIXZ");
  EXPECT_EQ(t, PauliString({3, 0, 1, 3}));
  EXPECT_FALSE(t.is_identity());
  EXPECT_TRUE(PauliString::from_label("IIII").is_identity());
}

TEST(PauliString, IndexOutsideRangeIsFormatError) {
  EXPECT_THROW(PauliString({0, 4, 0, 0}), FormatError);
  EXPECT_THROW(PauliString::from_label("IQII"), FormatError);
}

TEST(PauliDecompose, WBetaHasThreeTerms) {
  const Real beta = 0.75;
  const auto f = w_beta_weights(beta);
  const auto c = pauli_decompose(w_beta(beta).matrix(), kLayout);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c.at(PauliString({0, 0, 0, 0})), 0.25, 1e-15);
  EXPECT_NEAR(c.at(PauliString({0, 3, 3, 0})), f.a_to_b / 4, 1e-15);
  EXPECT_NEAR(c.at(PauliString({3, 0, 1, 3})), f.b_to_a / 4, 1e-15);
}

TEST(PauliDecompose, IdentityProcess) {
  const auto c = pauli_decompose(ComplexMatrix(ComplexMatrix::Identity(16, 16) / 4.0), kLayout);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c.begin()->second, 0.25);
  EXPECT_TRUE(c.begin()->first.is_identity());
}

TEST(PauliDecompose, RandomSparseRoundTrip) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, 255);
  std::normal_distribution<Real> g;
  for (int trial = 0; trial < 50; ++trial) {
    PauliCoefficients<Real> c;
    for (int k = 0; k < 1 + trial % 8; ++k) c[PauliString::from_ordinal(pick(rng), 4)] = g(rng);
    const auto back = pauli_decompose(pauli_compose(c, kLayout), kLayout);
    ASSERT_EQ(back.size(), c.size());
    for (const auto& [t, v] : c) EXPECT_NEAR(back.at(t), v, 1e-12);
  }
}

TEST(PauliDecompose, NonQubitLayoutUnsupported) {
  const SubsystemLayout l({{"a", 3}, {"b", 2}});
  EXPECT_THROW(pauli_decompose(ComplexMatrix(ComplexMatrix::Identity(6, 6)), l), UnsupportedDimensionError);
  EXPECT_THROW(pauli_compose(PauliCoefficients<Real>{}, l), UnsupportedDimensionError);
}

TEST(PauliDecompose, NonHermitianCoefficientRejected) {
  ComplexMatrix m = ComplexMatrix::Zero(16, 16);
  m(0, 1) = 1.0;
  EXPECT_THROW(pauli_decompose(m, kLayout), ValidationError);
}

TEST(PauliCompose, IdentityCoefficient) {
  const PauliCoefficients<Real> c{{PauliString({0, 0, 0, 0}), 0.25}};
  EXPECT_EQ(testing::max_abs(pauli_compose(c, kLayout) - ComplexMatrix::Identity(16, 16) / 4.0), 0.0);
}

TEST(PauliCompose, WBetaMatchesConstruction) {
  const Real beta = 0.75;
  const auto f = w_beta_weights(beta);
  const PauliCoefficients<Real> c{{PauliString({0, 0, 0, 0}), 0.25},
                                  {PauliString({0, 3, 3, 0}), f.a_to_b / 4},
                                  {PauliString({3, 0, 1, 3}), f.b_to_a / 4}};
  // explicit Kronecker construction
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2), x = pauli_single(1), z = pauli_single(3);
  const ComplexMatrix direct =
      0.25 * (ComplexMatrix::Identity(16, 16) + f.a_to_b * kron(kron(i2, z), kron(z, i2)) +
              f.b_to_a * kron(kron(z, i2), kron(x, z)));
  EXPECT_LE(testing::max_abs(pauli_compose(c, kLayout) - direct), 1e-12);
}

TEST(PauliCompose, EmptyIsZero) {
  EXPECT_EQ(testing::max_abs(pauli_compose(PauliCoefficients<Real>{}, kLayout)), 0.0);
}

TEST(PauliCompose, WrongLengthIsFormatError) {
  const PauliCoefficients<Real> c{{PauliString({0, 3}), 1.0}};
  EXPECT_THROW(pauli_compose(c, kLayout), FormatError);
}

TEST(PauliBasis, Orthogonality) {
  std::vector<ComplexMatrix> basis;
  for (std::size_t k = 0; k < 256; ++k) basis.push_back(pauli_matrix(PauliString::from_ordinal(k, 4)));
  for (std::size_t i = 0; i < 256; ++i)
    for (std::size_t j = 0; j < 256; ++j) {
      const Complex tr = (basis[i] * basis[j]).trace();
      EXPECT_LE(std::abs(tr - Complex(i == j ? 16.0 : 0.0, 0)), 1e-12) << i << "," << j;
    }
}

TEST(PauliBasis, SingleQubitMatrices) {
  const ComplexMatrix y = pauli_single(2);
  EXPECT_EQ(y(0, 1), Complex(0, -1));
  EXPECT_EQ(y(1, 0), Complex(0, 1));
  EXPECT_EQ(pauli_single(3)(1, 1), Complex(-1, 0));
  EXPECT_EQ(pauli_single(1)(0, 1), Complex(1, 0));
}

}  // namespace
}  // namespace pmlab
