#include "densecode/unitary_group.hpp"

#include <cmath>

namespace densecode {

int hermitian_param_count(int n) { return n * n; }

CMatrix hermitian_from_params(std::span<const double> p, int n) {
  if (static_cast<int>(p.size()) != n * n) throw Error(ErrorKind::DimensionMismatch, "hermitian parameter count");
  CMatrix h(n, n);
  std::size_t idx = 0;
  for (int k = 0; k < n; ++k) h(k, k) = p[idx++];
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const Complex v(p[idx], p[idx + 1]);
      idx += 2;
      h(k, l) = v;
      h(l, k) = std::conj(v);
    }
  }
  return h;
}

void params_from_hermitian(const CMatrix& h, std::span<double> out) {
  const int n = static_cast<int>(h.rows());
  std::size_t idx = 0;
  for (int k = 0; k < n; ++k) out[idx++] = h(k, k).real();
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      out[idx++] = h(k, l).real();
      out[idx++] = h(k, l).imag();
    }
  }
}

void hermitian_param_gradient(const CMatrix& m, std::span<double> out) {
  // dA = i dH. Diagonal: dA = i e_kk. Off-diagonal real part: dA = i(e_kl + e_lk);
  // imaginary part: dA = i(i e_kl - i e_lk) = e_lk - e_kl.
  const int n = static_cast<int>(m.rows());
  std::size_t idx = 0;
  for (int k = 0; k < n; ++k) out[idx++] = 2.0 * m(k, k).imag();
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      out[idx++] = 2.0 * (m(k, l).imag() + m(l, k).imag());
      out[idx++] = 2.0 * (m(l, k).real() - m(k, l).real());
    }
  }
}

UnitaryExp::UnitaryExp(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
  vecs_ = es.eigenvectors();
  theta_ = es.eigenvalues();
  const Eigen::VectorXcd phases = theta_.unaryExpr([](double t) { return std::polar(1.0, t); });
  value_ = vecs_ * phases.asDiagonal() * vecs_.adjoint();
}

CMatrix UnitaryExp::divided_differences() const {
  // (e^{i a} - e^{i b}) / (i (a - b)) = e^{i (a+b)/2} sinc((a-b)/2), stable at a = b.
  const Eigen::Index n = theta_.size();
  CMatrix f(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double half = 0.5 * (theta_(k) - theta_(l));
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      f(k, l) = std::polar(sinc, 0.5 * (theta_(k) + theta_(l)));
    }
  }
  return f;
}

CMatrix UnitaryExp::derivative(const CMatrix& e) const {
  const CMatrix f = divided_differences();
  return vecs_ * f.cwiseProduct(vecs_.adjoint() * e * vecs_) * vecs_.adjoint();
}

CMatrix UnitaryExp::adjoint_derivative(const CMatrix& g) const {
  const CMatrix f = divided_differences();
  return vecs_ * f.conjugate().cwiseProduct(vecs_.adjoint() * g * vecs_) * vecs_.adjoint();
}

CMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) z(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

CMatrix haar_isometry(int rows, int cols, std::mt19937_64& rng) {
  return haar_unitary(rows, rng).leftCols(cols);
}

CMatrix polar_isometry(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace densecode
