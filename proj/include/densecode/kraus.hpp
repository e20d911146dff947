#pragma once

#include <optional>
#include <vector>

#include "densecode/search.hpp"
#include "densecode/solver.hpp"
#include "densecode/spectra.hpp"

namespace densecode {

inline constexpr double kCompletenessTolerance = 1e-10;
inline constexpr double kSupportCutoff = 1e-10;

// One message encoded by a general operation: Kraus operators K_k with
// sum_k K_k^dagger K_k = I.
class KrausMessage {
 public:
  // Throws CompletenessViolation, or LinearDependence when require_independent
  // is set and the operators are numerically dependent.
  static KrausMessage make(std::vector<CMatrix> ops, bool require_independent = true);
  static KrausMessage from_unitary(const CMatrix& u) { return make({u}); }

  int dim() const noexcept { return static_cast<int>(ops_.front().rows()); }
  int kraus_rank() const noexcept { return static_cast<int>(ops_.size()); }
  const std::vector<CMatrix>& operators() const noexcept { return ops_; }
  const CMatrix& operator[](int k) const { return ops_[static_cast<std::size_t>(k)]; }

  // Stacked (kappa d) x d isometry.
  CMatrix isometry() const;
  static KrausMessage from_isometry(const CMatrix& w, int d);

 private:
  explicit KrausMessage(std::vector<CMatrix> ops) : ops_(std::move(ops)) {}
  std::vector<CMatrix> ops_;
};

class KrausMessageSet {
 public:
  explicit KrausMessageSet(std::vector<KrausMessage> messages);

  int dim() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(messages_.size()); }
  const KrausMessage& operator[](int j) const { return messages_[static_cast<std::size_t>(j)]; }
  const std::vector<KrausMessage>& messages() const noexcept { return messages_; }

 private:
  std::vector<KrausMessage> messages_;
  int d_ = 0;
};

// rho_j on C^d (A) x C^d (B), basis index a*d + b.
struct MessageDensity {
  CMatrix matrix;
  std::vector<double> probabilities;
};

// Unnormalized encoded state (K x I)|Psi0>, basis index a*d + b.
CVector encoded_state(const CMatrix& k, const SchmidtSpectrum& s);

MessageDensity message_density(const KrausMessage& m, const SchmidtSpectrum& s);

// Tr_A of a d^2 x d^2 operator.
CMatrix partial_trace_a(const CMatrix& rho, int d);

// Tr(rho^2)
double purity(const MessageDensity& rho);

// sum over ordered message pairs j != j' and all k, k' of |Tr(K_{j'k'} Lambda K_{jk}^dagger)|^2
double cross_orthogonality_residual(const KrausMessageSet& set, const SchmidtSpectrum& s);

struct KrausFeasibilityReport {
  int d = 0;
  int n = 0;
  int kappa = 0;
  SchmidtSpectrum spectrum = mes(2);
  bool feasible = false;
  double best_residual = 0.0;
  double max_abs_overlap = 0.0;
  int restarts_used = 0;
  std::uint64_t best_seed = 0;
  bool escalated = false;
  SolverConfig config;
  std::optional<KrausMessageSet> witness;
  std::optional<KrausMessageSet> best_candidate;
  // Per-message purity of the best candidate.
  std::vector<double> purities;
};

// Optimizes N stacked isometries; kappa = 1 delegates to find_messages.
KrausFeasibilityReport find_kraus_messages(const SchmidtSpectrum& s, int n, int kappa, const SolverConfig& cfg = {});

struct OperatorBoundReport {
  // smallest eigenvalue of I - sum_j P_j
  double projector_margin = 0.0;
  // smallest eigenvalue of sum_j P_j - sum_j rho_j
  double density_margin = 0.0;
  // d - N lambda_0
  double spectral_margin = 0.0;
  bool projector_ok = false;
  bool spectral_ok = false;
  std::vector<int> support_ranks;
};

OperatorBoundReport operator_bound_check(const KrausMessageSet& set, const SchmidtSpectrum& s);

// Unitary V with (K_k x I)|Psi0> proportional to (V x I)|Psi0> for all k, when
// the message density is pure. Columns at vanishing Schmidt coefficients are
// completed arbitrarily. Phase chosen so that Tr(K_0^dagger V) >= 0.
std::optional<CMatrix> effective_unitary(const KrausMessage& m, const SchmidtSpectrum& s);

struct Theorem2Audit {
  KrausFeasibilityReport search;
  std::optional<OperatorBoundReport> bound;
  double min_purity = 0.0;
  bool all_pure = false;  // every purity >= 1 - purity_tolerance
  double purity_tolerance = 1e-6;
};

// Default spectrum for the audit: lambda_0 = d/N with the remaining weight split equally.
SchmidtSpectrum bound_spectrum(int d, int n);

Theorem2Audit theorem2_audit(const SchmidtSpectrum& s, int n, int kappa, const SolverConfig& cfg = {},
                             double purity_tolerance = 1e-6);

}  // namespace densecode
