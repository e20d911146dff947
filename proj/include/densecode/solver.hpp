#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "densecode/orthogonality.hpp"
#include "densecode/search.hpp"
#include "densecode/spectra.hpp"

namespace densecode {

struct FeasibilityReport {
  int d = 0;
  int n = 0;
  SchmidtSpectrum spectrum = mes(2);
  bool feasible = false;
  // Residual of the witness when feasible, otherwise the floor over all restarts.
  double best_residual = 0.0;
  double max_abs_overlap = 0.0;
  int restarts_used = 0;
  std::uint64_t best_seed = 0;
  bool escalated = false;
  // Set by max_alphabet when N was ruled out by lambda_0 > d/N without a search.
  bool bound_pruned = false;
  SolverConfig config;
  std::optional<UnitaryMessageSet> witness;
  // Lowest-residual set seen; equals the witness when feasible.
  std::optional<UnitaryMessageSet> best_candidate;
};

// Searches for N Lambda-orthogonal unitaries with U_0 = I. Throws
// InvalidMessageCount unless 1 <= N <= d^2.
FeasibilityReport find_messages(const SchmidtSpectrum& s, int n, const SolverConfig& cfg = {});

struct AlphabetResult {
  int max_n = 0;
  std::vector<FeasibilityReport> reports;
};

// Largest feasible N, scanning upward from N = d (certified by shift_set).
// N with lambda_0 > d/N are infeasible by the operator bound and are not searched.
AlphabetResult max_alphabet(const SchmidtSpectrum& s, const SolverConfig& cfg = {});

// Residual and gradient at U_0 = I, U_j = exp(i H(x_j)) for j >= 1, where x
// holds (N-1) blocks of d^2 Hermitian coordinates (see hermitian_from_params).
std::pair<double, std::vector<double>> cost_and_gradient(std::span<const double> params, const SchmidtSpectrum& s,
                                                          int n);

// Unitaries U_0 = I, U_j = exp(i H(x_j)).
UnitaryMessageSet unitaries_from_params(std::span<const double> params, int d, int n);

struct PolishResult {
  UnitaryMessageSet set;
  double residual = 0.0;
  bool converged = false;
};

// Levenberg-Marquardt refinement keeping set[0] fixed. Sets above the coarse
// threshold are returned unchanged with converged = false.
PolishResult polish(const UnitaryMessageSet& set, const SchmidtSpectrum& s, const SolverConfig& cfg = {});

}  // namespace densecode
