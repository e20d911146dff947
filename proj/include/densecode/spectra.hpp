#pragma once

#include <span>
#include <vector>

#include "densecode/types.hpp"

namespace densecode {

inline constexpr double kNormalizationTolerance = 1e-12;

// Ordered, normalized Schmidt coefficients lambda_0 >= ... >= lambda_{d-1} >= 0
// of a d x d bipartite pure state. Immutable once constructed.
class SchmidtSpectrum {
 public:
  // Validates ordering, sign and normalization. A sum off by less than the
  // normalization tolerance is renormalized; anything larger is rejected.
  static SchmidtSpectrum make(std::span<const double> values);
  static SchmidtSpectrum make(std::initializer_list<double> values) {
    return make(std::span<const double>(values.begin(), values.size()));
  }

  int dim() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](int n) const { return values_[static_cast<std::size_t>(n)]; }
  double largest() const noexcept { return values_.front(); }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const SchmidtSpectrum&, const SchmidtSpectrum&) = default;

 private:
  explicit SchmidtSpectrum(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

// Maximally entangled spectrum, all coefficients 1/d.
SchmidtSpectrum mes(int d);

// Diagonal reduced density matrix Lambda = Tr_A |Psi0><Psi0|.
CMatrix lambda_matrix(const SchmidtSpectrum& s);

// Coefficient matrix c with |Psi0> = sum_{ab} c_ab |a>|b>; diagonal sqrt(lambda_n).
CMatrix state_coefficients(const SchmidtSpectrum& s);

// Convex combination (1-t)*a + t*b, which stays inside the ordered simplex.
SchmidtSpectrum interpolate(const SchmidtSpectrum& a, const SchmidtSpectrum& b, double t);

}  // namespace densecode
