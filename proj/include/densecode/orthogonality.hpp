#pragma once

#include <vector>

#include "densecode/spectra.hpp"
#include "densecode/types.hpp"

namespace densecode {

inline constexpr double kUnitarityTolerance = 1e-10;

// N unitary encodings U_j of a d x d system. The solvers always produce
// unitaries[0] = I; the container itself does not insist on it so that
// gauge-transformed sets can be represented.
class UnitaryMessageSet {
 public:
  // Throws NotUnitary, DimensionMismatch or InvalidMessageCount (N > d^2).
  explicit UnitaryMessageSet(std::vector<CMatrix> unitaries);

  int dim() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(unitaries_.size()); }
  const CMatrix& operator[](int j) const { return unitaries_[static_cast<std::size_t>(j)]; }
  const std::vector<CMatrix>& unitaries() const noexcept { return unitaries_; }

 private:
  std::vector<CMatrix> unitaries_;
  int d_ = 0;
};

enum class GramKind { LambdaOverlap, PhiOverlap };

struct GramMatrix {
  CMatrix entries;
  GramKind kind = GramKind::LambdaOverlap;

  int size() const { return static_cast<int>(entries.rows()); }
  double max_abs_offdiagonal() const;
  double hermiticity_defect() const;
};

// max |(U^dagger U - I)_{ab}|
double unitarity_defect(const CMatrix& u);

// Tr(U_j Lambda U_i^dagger); the argument order follows the message indices.
Complex lambda_inner(const CMatrix& u_i, const CMatrix& u_j, const CMatrix& lambda);

// sum_{i<j} |Tr(U_j Lambda U_i^dagger)|^2
double residual(const UnitaryMessageSet& set, const CMatrix& lambda);

// G_ij = Tr(U_j Lambda U_i^dagger), Hermitian with unit diagonal when Tr Lambda = 1.
GramMatrix gram(const UnitaryMessageSet& set, const CMatrix& lambda);

// Cyclic shift X|n> = |n+1 mod d>.
CMatrix cyclic_shift(int d);

// {X^0, ..., X^{N-1}}: Lambda-orthogonal for every diagonal Lambda since
// X^k has zero diagonal for 0 < k < d.
UnitaryMessageSet shift_set(int d, int n);

}  // namespace densecode
