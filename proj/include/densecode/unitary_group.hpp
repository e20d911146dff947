#pragma once

#include <random>
#include <span>

#include "densecode/types.hpp"

namespace densecode {

// Real coordinates of an n x n Hermitian matrix H (n^2 of them): the n
// diagonal entries followed by (Re H_kl, Im H_kl) for k < l in row-major order.
// Anti-Hermitian generators are A = iH.
int hermitian_param_count(int n);
CMatrix hermitian_from_params(std::span<const double> p, int n);
void params_from_hermitian(const CMatrix& h, std::span<double> out);

// exp(iH) for Hermitian H, with the spectral data needed to differentiate it.
class UnitaryExp {
 public:
  explicit UnitaryExp(const CMatrix& hermitian);

  const CMatrix& value() const noexcept { return value_; }

  // Adjoint of the Frechet derivative E -> D exp(A)[E] under <X,Y> = Re Tr(X^dagger Y).
  // Computed with the Daleckii-Krein divided differences of exp on the spectrum.
  CMatrix adjoint_derivative(const CMatrix& g) const;

  // Directional derivative D exp(A)[E].
  CMatrix derivative(const CMatrix& e) const;

 private:
  CMatrix divided_differences() const;

  CMatrix vecs_;
  RVector theta_;
  CMatrix value_;
};

// Gradient with respect to Hermitian coordinates p of a real function f whose
// differential is df = 2 Re Tr(M^dagger dA), dA = i dH(p).
void hermitian_param_gradient(const CMatrix& m, std::span<double> out);

// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix haar_unitary(int n, std::mt19937_64& rng);

// First `cols` columns of a Haar-random rows x rows unitary.
CMatrix haar_isometry(int rows, int cols, std::mt19937_64& rng);

// Nearest isometry M (M^dagger M)^{-1/2} via the SVD.
CMatrix polar_isometry(const CMatrix& m);

}  // namespace densecode
