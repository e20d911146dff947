#include <gtest/gtest.h>

#include "densecode/orthogonality.hpp"
#include "test_util.hpp"

using namespace densecode;
using namespace densecode::testing;

TEST(LambdaInner, Examples) {
  const CMatrix lambda = lambda_matrix(SchmidtSpectrum::make({0.7, 0.3}));
  const CMatrix id = CMatrix::Identity(2, 2);
  EXPECT_NEAR(std::abs(lambda_inner(id, id, lambda) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(lambda_inner(id, cyclic_shift(2), lambda)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(lambda_inner(id, pauli_z(), lambda) - Complex(0.4)), 0.0, 1e-15);
  EXPECT_THROW(lambda_inner(id, CMatrix::Identity(3, 3), lambda), Error);
}

TEST(LambdaInner, MatchesEncodedStateOverlap) {
  std::mt19937_64 rng(7);
  const auto s = SchmidtSpectrum::make({0.5, 0.3, 0.2});
  const int d = 3;
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_unitary(d, rng);
    const CMatrix b = random_unitary(d, rng);
    // <Psi_i|Psi_j> with |Psi_j> = sum_n sqrt(l_n) U_j|n>|n>
    Complex ov = 0.0;
    for (int n = 0; n < d; ++n) ov += s[n] * a.col(n).dot(b.col(n));
    EXPECT_NEAR(std::abs(lambda_inner(a, b, lambda_matrix(s)) - ov), 0.0, 1e-13);
  }
}

TEST(Residual, Examples) {
  for (const auto& s : {mes(3), SchmidtSpectrum::make({0.6, 0.3, 0.1}), SchmidtSpectrum::make({1.0, 0.0, 0.0})})
    EXPECT_EQ(residual(shift_set(3, 3), lambda_matrix(s)), 0.0);
  const UnitaryMessageSet twins({CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
  EXPECT_NEAR(residual(twins, lambda_matrix(mes(2))), 1.0, 1e-15);
  const UnitaryMessageSet pauli({CMatrix::Identity(2, 2), pauli_x(), pauli_iy(), pauli_z()});
  EXPECT_NEAR(residual(pauli, lambda_matrix(mes(2))), 0.0, 1e-30);
}

TEST(Gram, Examples) {
  const GramMatrix g = gram(shift_set(2, 2), lambda_matrix(mes(2)));
  EXPECT_TRUE(g.entries.isApprox(CMatrix::Identity(2, 2)));
  const UnitaryMessageSet iz({CMatrix::Identity(2, 2), pauli_z()});
  const GramMatrix h = gram(iz, lambda_matrix(SchmidtSpectrum::make({0.7, 0.3})));
  CMatrix expected(2, 2);
  expected << 1.0, 0.4, 0.4, 1.0;
  EXPECT_LT((h.entries - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(h.max_abs_offdiagonal(), 0.4, 1e-15);
}

TEST(Gram, HermitianWithUnitDiagonal) {
  std::mt19937_64 rng(3);
  const auto s = SchmidtSpectrum::make({0.4, 0.3, 0.2, 0.1});
  std::vector<CMatrix> us;
  for (int j = 0; j < 6; ++j) us.push_back(random_unitary(4, rng));
  const GramMatrix g = gram(UnitaryMessageSet(us), lambda_matrix(s));
  EXPECT_LT(g.hermiticity_defect(), 1e-14);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(g.entries(i, i) - Complex(1.0)), 0.0, 1e-14);
  // Gram residual equals the pairwise residual.
  double sum = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) sum += std::norm(g.entries(i, j));
  EXPECT_NEAR(sum, residual(UnitaryMessageSet(us), lambda_matrix(s)), 1e-13);
}

TEST(Gram, GaugeInvariance) {
  // U_j -> V U_j leaves every overlap unchanged.
  std::mt19937_64 rng(11);
  const auto s = SchmidtSpectrum::make({0.5, 0.3, 0.2});
  std::vector<CMatrix> us;
  for (int j = 0; j < 4; ++j) us.push_back(random_unitary(3, rng));
  const CMatrix v = random_unitary(3, rng);
  std::vector<CMatrix> rotated;
  for (const auto& u : us) rotated.push_back(v * u);
  const CMatrix a = gram(UnitaryMessageSet(us), lambda_matrix(s)).entries;
  const CMatrix b = gram(UnitaryMessageSet(rotated), lambda_matrix(s)).entries;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ShiftSet, Construction) {
  const UnitaryMessageSet four = shift_set(4, 4);
  ASSERT_EQ(four.size(), 4);
  for (const auto& u : four.unitaries()) {
    EXPECT_EQ(unitarity_defect(u), 0.0);
    for (int r = 0; r < 4; ++r) EXPECT_EQ(u.row(r).cwiseAbs().sum(), 1.0);
  }
  for (const auto& s : {mes(4), SchmidtSpectrum::make({0.7, 0.2, 0.1, 0.0})})
    EXPECT_EQ(residual(four, lambda_matrix(s)), 0.0);

  const UnitaryMessageSet two = shift_set(2, 2);
  EXPECT_EQ(two[0], CMatrix::Identity(2, 2));
  EXPECT_EQ(two[1], pauli_x());
  try {
    shift_set(3, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidMessageCount);
  }
}

TEST(MessageSet, Validation) {
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = 1.01;
  EXPECT_THROW(UnitaryMessageSet({bad}), Error);
  EXPECT_THROW(UnitaryMessageSet({CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}), Error);
  EXPECT_THROW(UnitaryMessageSet(std::vector<CMatrix>(5, CMatrix::Identity(2, 2))), Error);
  EXPECT_THROW(UnitaryMessageSet(std::vector<CMatrix>{}), Error);
}
