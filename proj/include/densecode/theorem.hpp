#pragma once

#include <optional>
#include <vector>

#include "densecode/orthogonality.hpp"
#include "densecode/solver.hpp"

namespace densecode {

// Columns of a unitary regrouped for the top-m analysis: phi0 stacks the
// first m columns (column-major) and phik[k - m] is column k, all scaled by
// 1/sqrt(m), so |phi0| = 1 and |phik|^2 = 1/m.
struct PhiVectors {
  int m = 0;
  CVector phi0;
  std::vector<CVector> phik;
};

PhiVectors reshape_phi(const CMatrix& u, int m);

// (1 - m lambda0) / (m lambda0): the largest |<phi0_i|phi0_j>| compatible with
// Lambda-orthogonality when the top m coefficients equal lambda0.
double overlap_bound(int m, double lambda0);

struct LemmaOverlaps {
  GramMatrix gram;  // of the phi0 vectors
  double target = 0.0;  // 1/(md)
  double min_offdiagonal = 0.0;
  double max_offdiagonal = 0.0;
  double max_deviation = 0.0;  // max |(|G_ij| - 1/(md))|
  int rank = 0;  // singular values above 1e-8
  double smallest_eigenvalue = 0.0;
  std::vector<double> offdiagonal_magnitudes;  // i < j, row-major
};

LemmaOverlaps lemma_overlaps(const UnitaryMessageSet& set, int m);

struct BrualdiVerdict {
  int r = 0;
  bool covered_by_disks = false;
  bool covered_by_region = false;
  std::optional<std::vector<int>> witness_set;  // minimizing P for the region test
  double disk_margin = 0.0;    // max_i S_i^{(r-1)} - |z - a_ii|
  double region_margin = 0.0;  // -(min over |P| = r of sum_{i in P} |z - a_ii| - R_i)
  double margin = 0.0;         // max of the two; >= 0 iff z lies in the inclusion set

  bool covered() const { return covered_by_disks || covered_by_region; }
};

// Tests whether z lies in the union of the disks |z - a_ii| <= S_i^{(r-1)}
// (sum of the r-1 largest off-diagonal magnitudes of row i) and the regions
// sum_{i in P} |z - a_ii| <= sum_{i in P} R_i over index sets |P| = r.
// Flags are set when the margin is >= -tolerance.
BrualdiVerdict brualdi_covers(const CMatrix& a, int r, Complex z, double tolerance = 1e-12);

// Max-norm distance of U from block-diag(v, e^{i theta} I_{d-m}), minimized
// over theta, with v the top-left block of U (unitary whenever the off-block
// parts vanish).
double block_form_deviation(const CMatrix& u, int m);

// lambda_0 = ... = lambda_{m-1} = d/(md+1). The tail (d - m values) is
// rescaled to the remaining weight; empty means an equal split.
SchmidtSpectrum theorem1_spectrum(int d, int m, const std::vector<double>& tail = {});

struct Theorem1Audit {
  int d = 0;
  int m = 0;
  int n = 0;
  SchmidtSpectrum spectrum = mes(2);
  FeasibilityReport search;
  LemmaOverlaps lemma;
  std::vector<double> block_deviations;
  std::vector<int> overlap_histogram;  // |<phi0_i|phi0_j>| in bins of width 1/(md) / 8 up to 2/(md)
  BrualdiVerdict brualdi;  // phi0 Gram, r = N - 1, z = its smallest eigenvalue
};

Theorem1Audit theorem1_audit(int d, int m, const SolverConfig& cfg = {}, const std::vector<double>& tail = {});

}  // namespace densecode
