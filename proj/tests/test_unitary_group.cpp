#include <gtest/gtest.h>

#include "densecode/unitary_group.hpp"
#include "test_util.hpp"

using namespace densecode;
using namespace densecode::testing;

namespace {

double re_inner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

}  // namespace

TEST(HermitianParams, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int n : {1, 2, 3, 5}) {
    EXPECT_EQ(hermitian_param_count(n), n * n);
    const CMatrix h = random_hermitian(n, rng);
    std::vector<double> p(static_cast<std::size_t>(n * n));
    params_from_hermitian(h, p);
    const CMatrix back = hermitian_from_params(p, n);
    EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((back - back.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(UnitaryExp, MatchesEigenOracle) {
  std::mt19937_64 rng(2);
  for (int n : {1, 2, 4}) {
    const CMatrix h = random_hermitian(n, rng);
    const UnitaryExp e(h);
    EXPECT_LT((e.value() - expi(h)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(UnitaryExp, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const int n = 4;
  const CMatrix h = random_hermitian(n, rng);
  const CMatrix dh = random_hermitian(n, rng);
  const UnitaryExp e(h);
  const double step = 1e-5;
  const CMatrix fd = (expi(h + step * dh) - expi(h - step * dh)) / (2.0 * step);
  const CMatrix an = e.derivative(Complex(0.0, 1.0) * dh);
  EXPECT_LT((fd - an).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(UnitaryExp, AdjointIsTheTranspose) {
  std::mt19937_64 rng(4);
  const int n = 3;
  const UnitaryExp e(random_hermitian(n, rng));
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix g = CMatrix::Random(n, n);
    CMatrix x = CMatrix::Random(n, n);
    EXPECT_NEAR(re_inner(g, e.derivative(x)), re_inner(e.adjoint_derivative(g), x), 1e-12);
  }
}

TEST(UnitaryExp, DegenerateSpectrum) {
  // Repeated eigenvalues take the limit of the divided difference.
  const CMatrix h = 0.7 * CMatrix::Identity(3, 3);
  const UnitaryExp e(h);
  const CMatrix x = CMatrix::Random(3, 3);
  EXPECT_LT((e.derivative(x) - std::polar(1.0, 0.7) * x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HermitianParams, GradientMatchesFiniteDifferences) {
  // f(p) = Re Tr(C^dagger exp(i H(p)) B) has df = Re Tr(C^dagger Dexp[i dH] B).
  std::mt19937_64 rng(5);
  const int n = 3;
  const CMatrix b = random_unitary(n, rng);
  const CMatrix c = CMatrix::Random(n, n);
  const CMatrix h0 = random_hermitian(n, rng);
  std::vector<double> p(static_cast<std::size_t>(n * n));
  params_from_hermitian(h0, p);
  auto f = [&](const std::vector<double>& q) {
    return (c.adjoint() * expi(hermitian_from_params(q, n)) * b).trace().real();
  };
  const UnitaryExp e(h0);
  // df = Re Tr(C^dagger Dexp[dA] B) = 2 Re Tr(M^dagger dA) with M = adj(C B^dagger) / 2.
  const CMatrix m = 0.5 * e.adjoint_derivative(c * b.adjoint());
  std::vector<double> grad(p.size());
  hermitian_param_gradient(m, grad);
  const double step = 1e-5;
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto hi = p;
    auto lo = p;
    hi[k] += step;
    lo[k] -= step;
    EXPECT_NEAR(grad[k], (f(hi) - f(lo)) / (2.0 * step), 1e-8) << "coordinate " << k;
  }
}

TEST(Haar, UnitaryAndIsometry) {
  std::mt19937_64 rng(6);
  const CMatrix u = haar_unitary(5, rng);
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-13);
  const CMatrix w = haar_isometry(6, 3, rng);
  ASSERT_EQ(w.rows(), 6);
  ASSERT_EQ(w.cols(), 3);
  EXPECT_LT((w.adjoint() * w - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Polar, NearestIsometry) {
  std::mt19937_64 rng(8);
  const CMatrix w = haar_isometry(4, 2, rng);
  const CMatrix noisy = w + 1e-3 * CMatrix::Random(4, 2);
  const CMatrix p = polar_isometry(noisy);
  EXPECT_LT((p.adjoint() * p - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((p - w).cwiseAbs().maxCoeff(), 5e-3);
  EXPECT_LT((polar_isometry(w) - w).cwiseAbs().maxCoeff(), 1e-13);
}
