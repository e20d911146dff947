#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "densecode/theorem.hpp"
#include "test_util.hpp"

using namespace densecode;
using namespace densecode::testing;

namespace {

// Brute-force region test over every index set of size r.
bool covered_by_enumeration(const CMatrix& a, int r, Complex z, double tol) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<double> rows(static_cast<std::size_t>(n));
  bool disk = false;
  for (int i = 0; i < n; ++i) {
    std::vector<double> off;
    for (int j = 0; j < n; ++j)
      if (j != i) off.push_back(std::abs(a(i, j)));
    std::sort(off.rbegin(), off.rend());
    rows[static_cast<std::size_t>(i)] = std::accumulate(off.begin(), off.end(), 0.0);
    dist[static_cast<std::size_t>(i)] = std::abs(z - a(i, i));
    if (dist[static_cast<std::size_t>(i)] <= std::accumulate(off.begin(), off.begin() + (r - 1), 0.0) + tol) disk = true;
  }
  if (disk) return true;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + r, true);
  do {
    double lhs = 0.0;
    double rhs = 0.0;
    for (int i = 0; i < n; ++i)
      if (pick[static_cast<std::size_t>(i)]) {
        lhs += dist[static_cast<std::size_t>(i)];
        rhs += rows[static_cast<std::size_t>(i)];
      }
    if (lhs <= rhs + tol) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

}  // namespace

TEST(ReshapePhi, IdentityColumns) {
  const PhiVectors p = reshape_phi(CMatrix::Identity(3, 3), 2);
  CVector e(6);
  e << 1, 0, 0, 0, 1, 0;
  EXPECT_LT((p.phi0 - e / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_EQ(p.phik.size(), 1u);
  CVector f(3);
  f << 0, 0, 1;
  EXPECT_LT((p.phik[0] - f / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);

  for (int m = 1; m < 4; ++m) {
    const PhiVectors q = reshape_phi(CMatrix::Identity(4, 4), m);
    for (int k = m; k < 4; ++k) {
      const CVector& v = q.phik[static_cast<std::size_t>(k - m)];
      for (int i = 0; i < 4; ++i) EXPECT_EQ(v(i), i == k ? Complex(1.0 / std::sqrt(double(m))) : Complex(0.0));
    }
  }
}

TEST(ReshapePhi, Norms) {
  std::mt19937_64 rng(1);
  for (int m : {1, 2, 3}) {
    const PhiVectors p = reshape_phi(random_unitary(4, rng), m);
    EXPECT_NEAR(p.phi0.norm(), 1.0, 1e-13);
    for (const auto& v : p.phik) EXPECT_NEAR(v.squaredNorm(), 1.0 / m, 1e-13);
  }
  EXPECT_THROW(reshape_phi(CMatrix::Identity(3, 3), 3), Error);
  EXPECT_THROW(reshape_phi(CMatrix::Identity(3, 3), 0), Error);
}

TEST(ReshapePhi, LambdaOverlapDecomposes) {
  // With lambda_0 = ... = lambda_{m-1} = l, Tr(U_j Lambda U_i^dagger) = m l <phi0_i|phi0_j> + sum_k lambda_k m <phik_i|phik_j>.
  std::mt19937_64 rng(2);
  const int d = 4;
  const int m = 2;
  const auto s = theorem1_spectrum(d, m, {0.7, 0.3});
  const CMatrix a = random_unitary(d, rng);
  const CMatrix b = random_unitary(d, rng);
  const PhiVectors pa = reshape_phi(a, m);
  const PhiVectors pb = reshape_phi(b, m);
  Complex sum = m * s[0] * pa.phi0.dot(pb.phi0);
  for (int k = m; k < d; ++k) sum += m * s[k] * pa.phik[static_cast<std::size_t>(k - m)].dot(pb.phik[static_cast<std::size_t>(k - m)]);
  EXPECT_NEAR(std::abs(sum - lambda_inner(a, b, lambda_matrix(s))), 0.0, 1e-13);
}

TEST(OverlapBound, Examples) {
  for (int d = 2; d <= 5; ++d)
    for (int m = 1; m < d; ++m)
      EXPECT_NEAR(overlap_bound(m, static_cast<double>(d) / (m * d + 1)), 1.0 / (m * d), 1e-14);
  EXPECT_DOUBLE_EQ(overlap_bound(1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(overlap_bound(2, 0.5), 0.0);
  EXPECT_THROW(overlap_bound(2, 0.6), Error);
  EXPECT_THROW(overlap_bound(1, 0.0), Error);
}

TEST(LemmaOverlaps, SingleMessage) {
  const LemmaOverlaps l = lemma_overlaps(UnitaryMessageSet({CMatrix::Identity(3, 3)}), 2);
  ASSERT_EQ(l.gram.size(), 1);
  EXPECT_NEAR(std::abs(l.gram.entries(0, 0) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(l.target, 1.0 / 6);
  EXPECT_EQ(l.rank, 1);
}

TEST(LemmaOverlaps, MoreVectorsThanDimensionAreDependent) {
  std::mt19937_64 rng(3);
  for (auto [d, m] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
    std::vector<CMatrix> us;
    for (int j = 0; j < m * d + 1; ++j) us.push_back(random_unitary(d, rng));
    const LemmaOverlaps l = lemma_overlaps(UnitaryMessageSet(us), m);
    EXPECT_LE(l.rank, m * d);
    EXPECT_NEAR(l.smallest_eigenvalue, 0.0, 1e-12);
    EXPECT_LT(l.gram.hermiticity_defect(), 1e-14);
  }
}

TEST(Brualdi, IdentityExcludesZero) {
  for (int n : {1, 3, 7}) {
    for (int r = 1; r <= n; ++r) {
      const BrualdiVerdict v = brualdi_covers(CMatrix::Identity(n, n), r, 0.0);
      EXPECT_FALSE(v.covered()) << "n " << n << " r " << r;
      EXPECT_LT(v.margin, 0.0);
      EXPECT_FALSE(v.witness_set);
    }
  }
}

TEST(Brualdi, EqualOverlapMatrixIsCoveredWithZeroMargin) {
  for (auto [d, m] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{4, 3}}) {
    const int n = m * d + 1;
    const double c = 1.0 / (m * d);
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    CMatrix a = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a(i, j) = std::polar(c, ang(rng));
        a(j, i) = std::conj(a(i, j));
      }
    const BrualdiVerdict v = brualdi_covers(a, n - 1, 0.0, 1e-12);
    EXPECT_TRUE(v.covered_by_region);
    EXPECT_NEAR(v.region_margin, 0.0, 1e-12);
    ASSERT_TRUE(v.witness_set);
    EXPECT_EQ(static_cast<int>(v.witness_set->size()), n - 1);
  }
}

TEST(Brualdi, EveryEigenvalueIsCovered) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_hermitian(6, rng);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    for (int r = 1; r <= 6; ++r)
      for (int k = 0; k < 6; ++k) {
        const BrualdiVerdict v = brualdi_covers(h, r, es.eigenvalues()(k), 1e-12);
        EXPECT_TRUE(v.covered()) << "r " << r << " eigenvalue " << k;
      }
  }
}

TEST(Brualdi, AgreesWithSubsetEnumeration) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    const Complex z(2.0 * g(rng), 2.0 * g(rng));
    const int r = 1 + trial % n;
    EXPECT_EQ(brualdi_covers(a, r, z, 1e-12).covered(), covered_by_enumeration(a, r, z, 1e-12));
  }
  EXPECT_THROW(brualdi_covers(CMatrix::Identity(3, 3), 4, 0.0), Error);
  EXPECT_THROW(brualdi_covers(CMatrix::Identity(3, 3), 0, 0.0), Error);
}

TEST(BlockForm, Deviation) {
  std::mt19937_64 rng(7);
  CMatrix u = CMatrix::Identity(4, 4);
  u.topLeftCorner(2, 2) = random_unitary(2, rng);
  EXPECT_LT(block_form_deviation(u, 2), 1e-12);
  u.bottomRightCorner(2, 2) *= std::polar(1.0, 1.234);
  EXPECT_LT(block_form_deviation(u, 2), 1e-12);
  EXPECT_GT(block_form_deviation(cyclic_shift(3), 1), 0.5);
  EXPECT_THROW(block_form_deviation(u, 4), Error);
}

TEST(Theorem1Spectrum, Values) {
  const auto s = theorem1_spectrum(4, 2);
  EXPECT_DOUBLE_EQ(s[0], 4.0 / 9);
  EXPECT_DOUBLE_EQ(s[1], 4.0 / 9);
  EXPECT_NEAR(s[2], 1.0 / 18, 1e-15);
  const auto t = theorem1_spectrum(4, 1, {2, 1, 1});
  EXPECT_DOUBLE_EQ(t[0], 0.8);
  EXPECT_NEAR(t[1], 0.1, 1e-15);
  EXPECT_THROW(theorem1_spectrum(2, 2), Error);
  EXPECT_THROW(theorem1_spectrum(4, 1, {1, 1}), Error);
}

TEST(Theorem1Audit, CornersAreInfeasible) {
  SolverConfig cfg;
  cfg.restarts = 10;
  for (auto [d, m] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const Theorem1Audit a = theorem1_audit(d, m, cfg);
    EXPECT_EQ(a.n, m * d + 1);
    EXPECT_FALSE(a.search.feasible);
    EXPECT_GT(a.search.best_residual, 100 * cfg.feasibility_threshold);
    EXPECT_EQ(static_cast<int>(a.block_deviations.size()), a.n);
    EXPECT_EQ(a.overlap_histogram.size(), 17u);
    EXPECT_EQ(std::accumulate(a.overlap_histogram.begin(), a.overlap_histogram.end(), 0), a.n * (a.n - 1) / 2);
    // Off-block parts cannot all vanish, else N <= m^2 + 1.
    EXPECT_GT(*std::max_element(a.block_deviations.begin(), a.block_deviations.end()), 1e-3);
  }
  EXPECT_THROW(theorem1_audit(2, 2, cfg), Error);
}
