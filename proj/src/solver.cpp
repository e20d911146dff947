#include "densecode/solver.hpp"

#include <cmath>

namespace densecode {

namespace {

void check_message_count(int d, int n) {
  if (n < 1 || n > d * d) {
    throw Error(ErrorKind::InvalidMessageCount,
                "N = " + std::to_string(n) + " outside [1, d^2 = " + std::to_string(d * d) + "]");
  }
}

}  // namespace

FeasibilityReport find_messages(const SchmidtSpectrum& s, int n, const SolverConfig& cfg) {
  cfg.validate();
  const int d = s.dim();
  check_message_count(d, n);

  FeasibilityReport rep;
  rep.d = d;
  rep.n = n;
  rep.spectrum = s;
  rep.config = cfg;

  if (n == 1) {
    UnitaryMessageSet single({CMatrix::Identity(d, d)});
    rep.feasible = true;
    rep.witness = single;
    rep.best_candidate = single;
    return rep;
  }

  const MessageProblem prob(s, n, 1, true);
  SearchOutcome out = run_search(prob, cfg);
  rep.feasible = out.feasible;
  rep.best_residual = out.best_residual;
  rep.max_abs_overlap = out.max_abs_overlap;
  rep.restarts_used = out.restarts_used;
  rep.best_seed = out.best_seed;
  rep.escalated = out.escalated;
  rep.best_candidate = UnitaryMessageSet(std::move(out.best));
  if (rep.feasible) rep.witness = rep.best_candidate;
  return rep;
}

AlphabetResult max_alphabet(const SchmidtSpectrum& s, const SolverConfig& cfg) {
  cfg.validate();
  const int d = s.dim();
  AlphabetResult res;
  res.max_n = d;
  for (int n = d + 1; n <= d * d; ++n) {
    if (s.largest() * n > d * (1.0 + 1e-12)) {
      FeasibilityReport rep;
      rep.d = d;
      rep.n = n;
      rep.spectrum = s;
      rep.config = cfg;
      rep.bound_pruned = true;
      rep.best_residual = INFINITY;
      rep.max_abs_overlap = INFINITY;
      res.reports.push_back(std::move(rep));
      break;
    }
    FeasibilityReport rep = find_messages(s, n, cfg);
    const bool ok = rep.feasible;
    res.reports.push_back(std::move(rep));
    if (!ok) break;
    res.max_n = n;
  }
  return res;
}

std::pair<double, std::vector<double>> cost_and_gradient(std::span<const double> params, const SchmidtSpectrum& s,
                                                          int n) {
  const int d = s.dim();
  check_message_count(d, n);
  if (n == 1) return {0.0, {}};
  const MessageProblem prob(s, n, 1, true);
  if (static_cast<int>(params.size()) != prob.param_count()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(prob.param_count()) + " parameters");
  }
  const std::vector<CMatrix> bases(static_cast<std::size_t>(n), CMatrix::Identity(d, d));
  std::vector<double> grad;
  const double c = prob.chart_cost(bases, params, &grad);
  return {c, std::move(grad)};
}

UnitaryMessageSet unitaries_from_params(std::span<const double> params, int d, int n) {
  const MessageProblem prob(mes(d), n, 1, true);
  if (static_cast<int>(params.size()) != prob.param_count()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(prob.param_count()) + " parameters");
  }
  const std::vector<CMatrix> bases(static_cast<std::size_t>(n), CMatrix::Identity(d, d));
  return UnitaryMessageSet(prob.chart_point(bases, params));
}

PolishResult polish(const UnitaryMessageSet& set, const SchmidtSpectrum& s, const SolverConfig& cfg) {
  cfg.validate();
  if (set.dim() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "set and spectrum dimensions differ");
  const CMatrix lambda = lambda_matrix(s);
  const double start = residual(set, lambda);
  if (set.size() < 2 || start <= cfg.polish_threshold) return {set, start, start <= cfg.polish_threshold};
  if (start > cfg.coarse_threshold) return {set, start, false};
  const MessageProblem prob(s, set.size(), 1, true);
  LocalRun run = polish_run(prob, set.unitaries(), cfg);
  if (run.residual >= start) return {set, start, false};
  return {UnitaryMessageSet(std::move(run.isometries)), run.residual, run.polish_converged};
}

}  // namespace densecode
