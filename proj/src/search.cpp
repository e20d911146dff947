#include "densecode/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "densecode/unitary_group.hpp"

namespace densecode {

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (restarts < 1) fail("restarts must be >= 1");
  if (max_iterations < 0) fail("max_iterations must be >= 0");
  if (!(feasibility_threshold > 0.0)) fail("feasibility_threshold must be positive");
  if (!(polish_threshold > 0.0)) fail("polish_threshold must be positive");
  if (polish_threshold > feasibility_threshold) fail("polish_threshold must not exceed feasibility_threshold");
  if (!(coarse_threshold > 0.0)) fail("coarse_threshold must be positive");
  if (polish_iterations < 0) fail("polish_iterations must be >= 0");
  if (lbfgs_memory < 1) fail("lbfgs_memory must be >= 1");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) fail("armijo_c1 must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) fail("backtrack must lie in (0, 1)");
  if (stall_window < 1) fail("stall_window must be >= 1");
  if (escalation_multiplier < 1) fail("escalation_multiplier must be >= 1");
  if (threads < 0) fail("threads must be >= 0");
}

int resolve_threads(const SolverConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("DENSECODE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t restart_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MessageProblem::MessageProblem(const SchmidtSpectrum& s, int messages, int kappa, bool fix_first)
    : d_(s.dim()), n_(messages), kappa_(kappa), fix_first_(fix_first) {
  if (messages < 1) throw Error(ErrorKind::InvalidMessageCount, "need at least one message");
  if (kappa < 1) throw Error(ErrorKind::InvalidParameter, "kraus rank must be >= 1");
  if (fix_first && kappa != 1) throw Error(ErrorKind::InvalidParameter, "only unitary sets fix the first message");
  sqrt_lambda_.resize(d_);
  for (int n = 0; n < d_; ++n) sqrt_lambda_(n) = std::sqrt(s[n]);
  const int r = rows();
  const int p = r * r;
  std::vector<double> unit(static_cast<std::size_t>(p), 0.0);
  generators_.reserve(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    unit[static_cast<std::size_t>(k)] = 1.0;
    generators_.push_back(Complex(0.0, 1.0) * hermitian_from_params(unit, r));
    unit[static_cast<std::size_t>(k)] = 0.0;
  }
}

int MessageProblem::cross_pairs() const noexcept { return kappa_ * kappa_ * n_ * (n_ - 1) / 2; }

CMatrix MessageProblem::overlap_vectors(std::span<const CMatrix> isometries) const {
  CMatrix y(d_ * d_, n_ * kappa_);
  for (int j = 0; j < n_; ++j) {
    const CMatrix& w = isometries[static_cast<std::size_t>(j)];
    for (int k = 0; k < kappa_; ++k) {
      const CMatrix ks = w.middleRows(k * d_, d_) * sqrt_lambda_.asDiagonal();
      y.col(j * kappa_ + k) = Eigen::Map<const CVector>(ks.data(), d_ * d_);
    }
  }
  return y;
}

double MessageProblem::residual(std::span<const CMatrix> isometries) const {
  const CMatrix y = overlap_vectors(isometries);
  const CMatrix g = y.adjoint() * y;
  double r = 0.0;
  const int cols = n_ * kappa_;
  for (int b = 0; b < cols; ++b)
    for (int a = 0; a < b; ++a)
      if (message_of_column(a) != message_of_column(b)) r += std::norm(g(a, b));
  return r;
}

double MessageProblem::max_abs_overlap(std::span<const CMatrix> isometries) const {
  const CMatrix y = overlap_vectors(isometries);
  const CMatrix g = y.adjoint() * y;
  double m = 0.0;
  const int cols = n_ * kappa_;
  for (int b = 0; b < cols; ++b)
    for (int a = 0; a < b; ++a)
      if (message_of_column(a) != message_of_column(b)) m = std::max(m, std::abs(g(a, b)));
  return m;
}

double MessageProblem::residual_and_euclidean_gradient(std::span<const CMatrix> isometries,
                                                       std::vector<CMatrix>& grads) const {
  const CMatrix y = overlap_vectors(isometries);
  CMatrix g = y.adjoint() * y;
  const int cols = n_ * kappa_;
  double r = 0.0;
  for (int b = 0; b < cols; ++b) {
    for (int a = 0; a < cols; ++a) {
      if (message_of_column(a) == message_of_column(b)) {
        g(a, b) = 0.0;
      } else if (a < b) {
        r += std::norm(g(a, b));
      }
    }
  }
  const CMatrix gy = y * g;
  grads.assign(static_cast<std::size_t>(n_), CMatrix());
  for (int j = 0; j < n_; ++j) {
    CMatrix gw(rows(), d_);
    for (int k = 0; k < kappa_; ++k) {
      const Eigen::Map<const CMatrix> block(gy.col(j * kappa_ + k).data(), d_, d_);
      gw.middleRows(k * d_, d_) = block * sqrt_lambda_.asDiagonal();
    }
    grads[static_cast<std::size_t>(j)] = std::move(gw);
  }
  return r;
}

std::vector<CMatrix> MessageProblem::chart_point(std::span<const CMatrix> bases, std::span<const double> x) const {
  const int pp = params_per_message();
  std::vector<CMatrix> w(bases.begin(), bases.end());
  const int first = fix_first_ ? 1 : 0;
  for (int j = first; j < n_; ++j) {
    const auto xj = x.subspan(static_cast<std::size_t>((j - first) * pp), static_cast<std::size_t>(pp));
    w[static_cast<std::size_t>(j)] = UnitaryExp(hermitian_from_params(xj, rows())).value() * bases[static_cast<std::size_t>(j)];
  }
  return w;
}

double MessageProblem::chart_cost(std::span<const CMatrix> bases, std::span<const double> x,
                                  std::vector<double>* grad) const {
  if (static_cast<int>(x.size()) != param_count()) throw Error(ErrorKind::DimensionMismatch, "chart parameter count");
  if (static_cast<int>(bases.size()) != n_) throw Error(ErrorKind::DimensionMismatch, "chart base count");
  const int pp = params_per_message();
  const int first = fix_first_ ? 1 : 0;
  std::vector<CMatrix> w(bases.begin(), bases.end());
  std::vector<std::optional<UnitaryExp>> exps(static_cast<std::size_t>(n_));
  for (int j = first; j < n_; ++j) {
    const auto xj = x.subspan(static_cast<std::size_t>((j - first) * pp), static_cast<std::size_t>(pp));
    exps[static_cast<std::size_t>(j)].emplace(hermitian_from_params(xj, rows()));
    w[static_cast<std::size_t>(j)] = exps[static_cast<std::size_t>(j)]->value() * bases[static_cast<std::size_t>(j)];
  }
  if (grad == nullptr) return residual(w);
  std::vector<CMatrix> gw;
  const double r = residual_and_euclidean_gradient(w, gw);
  grad->assign(x.size(), 0.0);
  for (int j = first; j < n_; ++j) {
    const CMatrix m = exps[static_cast<std::size_t>(j)]->adjoint_derivative(
        gw[static_cast<std::size_t>(j)] * bases[static_cast<std::size_t>(j)].adjoint());
    hermitian_param_gradient(m, std::span<double>(*grad).subspan(static_cast<std::size_t>((j - first) * pp),
                                                                  static_cast<std::size_t>(pp)));
  }
  return r;
}

void MessageProblem::residual_vector_and_jacobian(std::span<const CMatrix> bases, RVector& r, RMatrix& jac) const {
  const CMatrix y = overlap_vectors(bases);
  const CMatrix g = y.adjoint() * y;
  const int cols = n_ * kappa_;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(cross_pairs()));
  for (int b = 0; b < cols; ++b)
    for (int a = 0; a < b; ++a)
      if (message_of_column(a) != message_of_column(b)) pairs.emplace_back(a, b);

  r.resize(2 * static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const Complex v = g(pairs[q].first, pairs[q].second);
    r(2 * static_cast<Eigen::Index>(q)) = v.real();
    r(2 * static_cast<Eigen::Index>(q) + 1) = v.imag();
  }

  jac.setZero(r.size(), param_count());
  const int pp = params_per_message();
  const int first = fix_first_ ? 1 : 0;
  CMatrix dyj(d_ * d_, kappa_);
  for (int j = first; j < n_; ++j) {
    std::vector<std::size_t> involved;
    for (std::size_t q = 0; q < pairs.size(); ++q)
      if (message_of_column(pairs[q].first) == j || message_of_column(pairs[q].second) == j) involved.push_back(q);
    const CMatrix& bj = bases[static_cast<std::size_t>(j)];
    for (int p = 0; p < pp; ++p) {
      const CMatrix dw = generators_[static_cast<std::size_t>(p)] * bj;
      for (int k = 0; k < kappa_; ++k) {
        const CMatrix ks = dw.middleRows(k * d_, d_) * sqrt_lambda_.asDiagonal();
        dyj.col(k) = Eigen::Map<const CVector>(ks.data(), d_ * d_);
      }
      const CMatrix left = dyj.adjoint() * y;   // dy_{jk}^dagger y_b
      const CMatrix right = y.adjoint() * dyj;  // y_a^dagger dy_{jk}
      const Eigen::Index col = static_cast<Eigen::Index>((j - first) * pp + p);
      for (std::size_t q : involved) {
        const auto [a, b] = pairs[q];
        const Complex dv = message_of_column(a) == j ? left(a - j * kappa_, b) : right(a, b - j * kappa_);
        jac(2 * static_cast<Eigen::Index>(q), col) = dv.real();
        jac(2 * static_cast<Eigen::Index>(q) + 1, col) = dv.imag();
      }
    }
  }
}

std::vector<CMatrix> MessageProblem::random_start(std::mt19937_64& rng) const {
  std::vector<CMatrix> w;
  w.reserve(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    if (j == 0 && fix_first_) {
      w.push_back(CMatrix::Identity(d_, d_));
    } else {
      w.push_back(haar_isometry(rows(), d_, rng));
    }
  }
  return w;
}

namespace {

// Gradient in left-trivialized coordinates at the current point (chart x = 0).
double trivialized_gradient(const MessageProblem& prob, std::span<const CMatrix> w, RVector& grad) {
  std::vector<CMatrix> gw;
  const double r = prob.residual_and_euclidean_gradient(w, gw);
  const int pp = prob.params_per_message();
  const int first = prob.fix_first() ? 1 : 0;
  grad.resize(prob.param_count());
  for (int j = first; j < prob.messages(); ++j) {
    const CMatrix m = gw[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)].adjoint();
    hermitian_param_gradient(m, std::span<double>(grad.data() + static_cast<std::ptrdiff_t>((j - first) * pp),
                                                  static_cast<std::size_t>(pp)));
  }
  return r;
}

std::vector<CMatrix> step(const MessageProblem& prob, std::span<const CMatrix> w, const RVector& x) {
  return prob.chart_point(w, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

void reorthonormalize(std::vector<CMatrix>& w, bool fix_first) {
  for (std::size_t j = fix_first ? 1 : 0; j < w.size(); ++j) w[j] = polar_isometry(w[j]);
}

}  // namespace

LocalRun descend(const MessageProblem& prob, std::vector<CMatrix> start, const SolverConfig& cfg) {
  LocalRun run;
  run.isometries = std::move(start);
  std::vector<CMatrix>& w = run.isometries;

  RVector grad;
  double cost = trivialized_gradient(prob, w, grad);
  std::deque<std::pair<RVector, RVector>> memory;
  std::deque<double> history{cost};
  double initial_step = 1.0;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (cost <= cfg.coarse_threshold || grad.norm() < 1e-14) break;

    // Two-loop recursion.
    RVector q = grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    } else {
      q *= initial_step / std::max(grad.norm(), 1e-300);
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    RVector dir = -q;
    double slope = grad.dot(dir);
    if (slope >= 0.0) {
      memory.clear();
      dir = -grad / std::max(grad.norm(), 1e-300);
      slope = grad.dot(dir);
    }

    double t = 1.0;
    std::vector<CMatrix> trial;
    double trial_cost = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = step(prob, w, t * dir);
      trial_cost = prob.residual(trial);
      if (trial_cost <= cost + cfg.armijo_c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack;
    }
    if (!accepted) break;

    RVector new_grad;
    w = std::move(trial);
    if ((it + 1) % 50 == 0) reorthonormalize(w, prob.fix_first());
    const double new_cost = trivialized_gradient(prob, w, new_grad);
    RVector s = t * dir;
    RVector y = new_grad - grad;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(memory.size()) > cfg.lbfgs_memory) memory.pop_front();
    }
    initial_step = t * dir.norm();
    cost = new_cost;
    grad = std::move(new_grad);
    run.iterations = it + 1;

    history.push_back(cost);
    if (static_cast<int>(history.size()) > cfg.stall_window) {
      const double old = history.front();
      history.pop_front();
      if (old - cost < cfg.stall_tolerance * old) break;
    }
  }
  reorthonormalize(w, prob.fix_first());
  run.residual = prob.residual(w);
  run.max_abs_overlap = prob.max_abs_overlap(w);
  return run;
}

LocalRun polish_run(const MessageProblem& prob, std::vector<CMatrix> start, const SolverConfig& cfg) {
  LocalRun run;
  run.isometries = std::move(start);
  run.polished = true;
  std::vector<CMatrix>& w = run.isometries;

  RVector r;
  RMatrix jac;
  prob.residual_vector_and_jacobian(w, r, jac);
  double cost = r.squaredNorm();
  // Damping mu = m |r| (Fan-Yuan); keeps fast local convergence on the
  // non-isolated solution sets found at phase boundaries.
  double m = 1e-2;
  constexpr double kTarget = 1e-28;
  constexpr double kMinM = 1e-8;

  for (int it = 0; it < cfg.polish_iterations && cost > kTarget; ++it) {
    const RVector g = jac.transpose() * r;
    const bool wide = jac.rows() < jac.cols();
    RMatrix normal = wide ? RMatrix(jac * jac.transpose()) : RMatrix(jac.transpose() * jac);
    const double mu = m * std::sqrt(cost);
    normal.diagonal().array() += mu;
    const Eigen::LDLT<RMatrix> ldlt(normal);
    // (J^T J + mu I)^{-1} J^T = J^T (J J^T + mu I)^{-1}
    const RVector delta = wide ? RVector(-(jac.transpose() * ldlt.solve(r))) : RVector(-ldlt.solve(g));
    if (!delta.allFinite()) break;
    const RVector jd = jac * delta;
    const double predicted = -(2.0 * g.dot(delta) + jd.squaredNorm());
    std::vector<CMatrix> trial = step(prob, w, delta);
    const double trial_cost = prob.residual(trial);
    const double rho = predicted > 0.0 ? (cost - trial_cost) / predicted : -1.0;
    run.iterations = it + 1;
    if (rho < 0.25) {
      m *= 4.0;
    } else if (rho > 0.75) {
      m = std::max(m / 4.0, kMinM);
    }
    if (rho > 1e-4 && trial_cost < cost) {
      w = std::move(trial);
      prob.residual_vector_and_jacobian(w, r, jac);
      cost = r.squaredNorm();
    } else if (m > 1e16) {
      break;
    }
  }
  reorthonormalize(w, prob.fix_first());
  run.residual = prob.residual(w);
  run.max_abs_overlap = prob.max_abs_overlap(w);
  run.polish_converged = run.residual <= cfg.polish_threshold;
  return run;
}

namespace {

struct RestartResult {
  LocalRun run;
  std::uint64_t seed = 0;
  bool done = false;
};

LocalRun one_restart(const MessageProblem& prob, const SolverConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LocalRun run = descend(prob, prob.random_start(rng), cfg);
  if (run.residual <= cfg.coarse_threshold) {
    const int iters = run.iterations;
    run = polish_run(prob, std::move(run.isometries), cfg);
    run.iterations += iters;
  }
  return run;
}

// Runs restart indices [begin, end), stopping at the first feasible index.
// Returns the index of that restart or `end`.
int run_range(const MessageProblem& prob, const SolverConfig& cfg, int begin, int end,
              std::vector<RestartResult>& results) {
  results.resize(static_cast<std::size_t>(end));
  std::atomic<int> next{begin};
  std::atomic<int> first_feasible{end};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= end || i > first_feasible.load()) return;
      auto& slot = results[static_cast<std::size_t>(i)];
      slot.seed = restart_seed(cfg.seed, static_cast<std::uint64_t>(i));
      slot.run = one_restart(prob, cfg, slot.seed);
      slot.done = true;
      if (slot.run.max_abs_overlap <= cfg.feasibility_threshold) {
        int cur = first_feasible.load();
        while (i < cur && !first_feasible.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const int nthreads = std::min(resolve_threads(cfg), end - begin);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  return first_feasible.load();
}

}  // namespace

SearchOutcome run_search(const MessageProblem& prob, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<RestartResult> results;
  int limit = cfg.restarts;
  int found = run_range(prob, cfg, 0, limit, results);
  bool escalated = false;

  auto best_index = [&](int upto) {
    int best = -1;
    for (int i = 0; i < upto; ++i) {
      const auto& r = results[static_cast<std::size_t>(i)];
      if (!r.done) continue;
      if (best < 0) {
        best = i;
        continue;
      }
      const auto& b = results[static_cast<std::size_t>(best)];
      if (r.run.residual < b.run.residual || (r.run.residual == b.run.residual && r.seed < b.seed)) best = i;
    }
    return best;
  };

  if (found == limit && cfg.escalation_multiplier > 1) {
    const int b = best_index(limit);
    if (b >= 0 && results[static_cast<std::size_t>(b)].run.max_abs_overlap <=
                      cfg.near_boundary_factor * cfg.feasibility_threshold) {
      escalated = true;
      const int extended = cfg.restarts * cfg.escalation_multiplier;
      found = run_range(prob, cfg, limit, extended, results);
      limit = extended;
    }
  }

  SearchOutcome out;
  out.escalated = escalated;
  const int pick = found < limit ? found : best_index(limit);
  const auto& chosen = results[static_cast<std::size_t>(pick)];
  out.feasible = found < limit;
  out.restarts_used = found < limit ? found + 1 : limit;
  out.best_residual = chosen.run.residual;
  out.max_abs_overlap = chosen.run.max_abs_overlap;
  out.best_seed = chosen.seed;
  out.best = chosen.run.isometries;
  if (!out.feasible) {
    // Floor over every restart that ran.
    for (int i = 0; i < limit; ++i) {
      const auto& r = results[static_cast<std::size_t>(i)];
      if (r.done) out.best_residual = std::min(out.best_residual, r.run.residual);
    }
  }
  return out;
}

}  // namespace densecode
