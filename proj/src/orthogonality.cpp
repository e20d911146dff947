#include "densecode/orthogonality.hpp"

#include <cmath>

namespace densecode {

UnitaryMessageSet::UnitaryMessageSet(std::vector<CMatrix> unitaries) : unitaries_(std::move(unitaries)) {
  if (unitaries_.empty()) throw Error(ErrorKind::InvalidMessageCount, "empty message set");
  d_ = static_cast<int>(unitaries_.front().rows());
  if (d_ < 1) throw Error(ErrorKind::InvalidDimension, "zero-dimensional unitary");
  for (std::size_t j = 0; j < unitaries_.size(); ++j) {
    const CMatrix& u = unitaries_[j];
    if (u.rows() != d_ || u.cols() != d_) {
      throw Error(ErrorKind::DimensionMismatch, "message " + std::to_string(j) + " is not " +
                                                    std::to_string(d_) + "x" + std::to_string(d_));
    }
    if (unitarity_defect(u) > kUnitarityTolerance) {
      throw Error(ErrorKind::NotUnitary, "message " + std::to_string(j));
    }
  }
  if (size() > d_ * d_) {
    throw Error(ErrorKind::InvalidMessageCount,
                std::to_string(size()) + " messages exceed d^2 = " + std::to_string(d_ * d_));
  }
}

double GramMatrix::max_abs_offdiagonal() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = 0; j < entries.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(entries(i, j)));
  return m;
}

double GramMatrix::hermiticity_defect() const {
  if (entries.size() == 0) return 0.0;
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Complex lambda_inner(const CMatrix& u_i, const CMatrix& u_j, const CMatrix& lambda) {
  if (u_i.rows() != u_j.rows() || u_i.cols() != u_j.cols() || u_j.cols() != lambda.rows() ||
      lambda.rows() != lambda.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "lambda_inner operands");
  }
  // Tr(U_j L U_i^dagger) = sum_{ab} (U_j)_{ab} L_{bb'} conj(U_i)_{ab'}
  return (u_j * lambda).cwiseProduct(u_i.conjugate()).sum();
}

GramMatrix gram(const UnitaryMessageSet& set, const CMatrix& lambda) {
  const int n = set.size();
  GramMatrix g{CMatrix(n, n), GramKind::LambdaOverlap};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Complex v = lambda_inner(set[i], set[j], lambda);
      g.entries(i, j) = v;
      g.entries(j, i) = std::conj(v);
    }
  }
  return g;
}

double residual(const UnitaryMessageSet& set, const CMatrix& lambda) {
  double r = 0.0;
  for (int i = 0; i < set.size(); ++i)
    for (int j = i + 1; j < set.size(); ++j) r += std::norm(lambda_inner(set[i], set[j], lambda));
  return r;
}

CMatrix cyclic_shift(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "shift dimension");
  CMatrix x = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) x((n + 1) % d, n) = 1.0;
  return x;
}

UnitaryMessageSet shift_set(int d, int n) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "shift_set needs d >= 1");
  if (n < 1 || n > d) {
    throw Error(ErrorKind::InvalidMessageCount,
                "shift_set needs 1 <= N <= d, got N = " + std::to_string(n) + ", d = " + std::to_string(d));
  }
  const CMatrix x = cyclic_shift(d);
  std::vector<CMatrix> us;
  CMatrix p = CMatrix::Identity(d, d);
  for (int k = 0; k < n; ++k) {
    us.push_back(p);
    p = x * p;
  }
  return UnitaryMessageSet(std::move(us));
}

}  // namespace densecode
