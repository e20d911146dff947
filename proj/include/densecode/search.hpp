#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "densecode/spectra.hpp"
#include "densecode/types.hpp"

namespace densecode {

struct SolverConfig {
  int restarts = 50;
  int max_iterations = 2000;
  // on the max-abs cross overlap
  double feasibility_threshold = 1e-8;
  // on the sum-of-squares residual
  double polish_threshold = 1e-12;
  // polish is only attempted below this residual
  double coarse_threshold = 1e-4;
  int polish_iterations = 200;
  int lbfgs_memory = 12;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  // relative residual decrease below which a restart is considered stalled
  double stall_tolerance = 1e-7;
  int stall_window = 100;
  // restarts are multiplied when the best infeasible overlap is within
  // near_boundary_factor x feasibility_threshold
  double near_boundary_factor = 2.0;
  int escalation_multiplier = 4;
  std::uint64_t seed = 20240611;
  // 0 = DENSECODE_THREADS or hardware concurrency
  int threads = 0;

  // Throws InvalidParameter.
  void validate() const;
};

int resolve_threads(const SolverConfig& cfg);

// Seed for restart `index` of a run seeded with `base` (splitmix64 mixing).
std::uint64_t restart_seed(std::uint64_t base, std::uint64_t index);

// N messages, each a stack of kappa Kraus operators forming a (kappa d) x d
// isometry W_j. kappa = 1 is unitary encoding. Cross-message overlaps
// Tr(K_{j'k'} Lambda K_{jk}^dagger) are the inner products of the vectors
// vec(K Lambda^{1/2}), so the whole overlap table is one Gram product.
class MessageProblem {
 public:
  MessageProblem(const SchmidtSpectrum& s, int messages, int kappa, bool fix_first);

  int dim() const noexcept { return d_; }
  int messages() const noexcept { return n_; }
  int kappa() const noexcept { return kappa_; }
  bool fix_first() const noexcept { return fix_first_; }
  int rows() const noexcept { return kappa_ * d_; }
  int free_messages() const noexcept { return fix_first_ ? n_ - 1 : n_; }
  int params_per_message() const noexcept { return rows() * rows(); }
  int param_count() const noexcept { return free_messages() * params_per_message(); }
  int cross_pairs() const noexcept;
  const RVector& sqrt_lambda() const noexcept { return sqrt_lambda_; }

  // Overlap vectors, one column per Kraus operator, message-major.
  CMatrix overlap_vectors(std::span<const CMatrix> isometries) const;

  // sum over unordered cross-message pairs of |overlap|^2
  double residual(std::span<const CMatrix> isometries) const;
  double max_abs_overlap(std::span<const CMatrix> isometries) const;

  // Residual and Euclidean gradient with respect to every isometry W_j,
  // normalized so that d(residual) = 2 Re Tr(G_j^dagger dW_j).
  double residual_and_euclidean_gradient(std::span<const CMatrix> isometries, std::vector<CMatrix>& grads) const;

  // Residual at W_j = exp(i H(x_j)) B_j for the free messages (fixed ones stay B_j),
  // plus the gradient in x when `grad` is non-null.
  double chart_cost(std::span<const CMatrix> bases, std::span<const double> x, std::vector<double>* grad) const;

  // W_j = exp(i H(x_j)) B_j
  std::vector<CMatrix> chart_point(std::span<const CMatrix> bases, std::span<const double> x) const;

  // Real residual vector (Re, Im of each cross overlap) and its Jacobian in
  // the chart coordinates at x = 0.
  void residual_vector_and_jacobian(std::span<const CMatrix> bases, RVector& r, RMatrix& jac) const;

  // Random starting point; the fixed first message (if any) is the identity.
  std::vector<CMatrix> random_start(std::mt19937_64& rng) const;

  int message_of_column(int col) const noexcept { return col / kappa_; }

 private:
  int d_;
  int n_;
  int kappa_;
  bool fix_first_;
  RVector sqrt_lambda_;
  std::vector<CMatrix> generators_;  // i * (Hermitian basis element), rows() x rows()
};

struct LocalRun {
  std::vector<CMatrix> isometries;
  double residual = 0.0;
  double max_abs_overlap = 0.0;
  int iterations = 0;
  bool polished = false;
  bool polish_converged = false;
};

// Riemannian L-BFGS on the product of unitary groups (left-trivialized, exp
// retraction), from the given start.
LocalRun descend(const MessageProblem& prob, std::vector<CMatrix> start, const SolverConfig& cfg);

// Levenberg-Marquardt refinement on the same chart. Converged when the
// residual drops to cfg.polish_threshold.
LocalRun polish_run(const MessageProblem& prob, std::vector<CMatrix> start, const SolverConfig& cfg);

struct SearchOutcome {
  bool feasible = false;
  double best_residual = 0.0;
  double max_abs_overlap = 0.0;
  int restarts_used = 0;
  std::uint64_t best_seed = 0;
  bool escalated = false;
  std::vector<CMatrix> best;  // best isometries found (witness when feasible)
};

// Seeded restarts: descend, then polish whatever lands below the coarse threshold.
// Stops at the first feasible restart in index order, so the outcome does not
// depend on the thread count.
SearchOutcome run_search(const MessageProblem& prob, const SolverConfig& cfg);

}  // namespace densecode
