#include "densecode/kraus.hpp"

#include <cmath>

#include "densecode/unitary_group.hpp"

namespace densecode {

KrausMessage KrausMessage::make(std::vector<CMatrix> ops, bool require_independent) {
  if (ops.empty()) throw Error(ErrorKind::InvalidParameter, "a message needs at least one Kraus operator");
  const Eigen::Index d = ops.front().rows();
  CMatrix completeness = CMatrix::Zero(d, d);
  for (const CMatrix& k : ops) {
    if (k.rows() != d || k.cols() != d) throw Error(ErrorKind::DimensionMismatch, "Kraus operators must be d x d");
    completeness += k.adjoint() * k;
  }
  const double defect = (completeness - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > kCompletenessTolerance) {
    throw Error(ErrorKind::CompletenessViolation, "max |sum K^dagger K - I| = " + std::to_string(defect));
  }
  if (require_independent && ops.size() > 1) {
    CMatrix stacked(d * d, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k)
      stacked.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const CVector>(ops[k].data(), d * d);
    Eigen::JacobiSVD<CMatrix> svd(stacked);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) throw Error(ErrorKind::LinearDependence, "Kraus operators are dependent");
  }
  return KrausMessage(std::move(ops));
}

CMatrix KrausMessage::isometry() const {
  const int d = dim();
  CMatrix w(kraus_rank() * d, d);
  for (int k = 0; k < kraus_rank(); ++k) w.middleRows(k * d, d) = ops_[static_cast<std::size_t>(k)];
  return w;
}

KrausMessage KrausMessage::from_isometry(const CMatrix& w, int d) {
  if (d < 1 || w.cols() != d || w.rows() % d != 0) throw Error(ErrorKind::DimensionMismatch, "isometry shape");
  std::vector<CMatrix> ops;
  for (Eigen::Index k = 0; k < w.rows() / d; ++k) ops.emplace_back(w.middleRows(k * d, d));
  return make(std::move(ops), false);
}

KrausMessageSet::KrausMessageSet(std::vector<KrausMessage> messages) : messages_(std::move(messages)) {
  if (messages_.empty()) throw Error(ErrorKind::InvalidMessageCount, "empty Kraus message set");
  d_ = messages_.front().dim();
  for (const auto& m : messages_)
    if (m.dim() != d_) throw Error(ErrorKind::DimensionMismatch, "Kraus messages of different dimension");
}

CVector encoded_state(const CMatrix& k, const SchmidtSpectrum& s) {
  const int d = s.dim();
  if (k.rows() != d || k.cols() != d) throw Error(ErrorKind::DimensionMismatch, "operator vs spectrum");
  // sum_n sqrt(lambda_n) K|n>|n>: amplitude of |a>|b> is K_ab sqrt(lambda_b).
  CVector psi(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) psi(a * d + b) = k(a, b) * std::sqrt(s[b]);
  return psi;
}

MessageDensity message_density(const KrausMessage& m, const SchmidtSpectrum& s) {
  const int d = s.dim();
  if (m.dim() != d) throw Error(ErrorKind::DimensionMismatch, "message vs spectrum");
  MessageDensity out{CMatrix::Zero(d * d, d * d), {}};
  for (const CMatrix& k : m.operators()) {
    const CVector psi = encoded_state(k, s);
    out.probabilities.push_back(psi.squaredNorm());
    out.matrix += psi * psi.adjoint();
  }
  return out;
}

CMatrix partial_trace_a(const CMatrix& rho, int d) {
  if (rho.rows() != d * d || rho.cols() != d * d) throw Error(ErrorKind::DimensionMismatch, "partial trace");
  CMatrix out = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int b2 = 0; b2 < d; ++b2) out(b, b2) += rho(a * d + b, a * d + b2);
  return out;
}

double purity(const MessageDensity& rho) { return rho.matrix.squaredNorm(); }

double cross_orthogonality_residual(const KrausMessageSet& set, const SchmidtSpectrum& s) {
  if (set.dim() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "set vs spectrum");
  const CMatrix lambda = lambda_matrix(s);
  double r = 0.0;
  for (int j = 0; j < set.size(); ++j) {
    for (int jp = 0; jp < set.size(); ++jp) {
      if (j == jp) continue;
      for (const CMatrix& k : set[j].operators())
        for (const CMatrix& kp : set[jp].operators()) r += std::norm(lambda_inner(k, kp, lambda));
    }
  }
  return r;
}

namespace {

std::vector<double> purities_of(const KrausMessageSet& set, const SchmidtSpectrum& s) {
  std::vector<double> p;
  for (const auto& m : set.messages()) p.push_back(purity(message_density(m, s)));
  return p;
}

KrausMessageSet from_unitaries(const UnitaryMessageSet& us) {
  std::vector<KrausMessage> ms;
  for (const CMatrix& u : us.unitaries()) ms.push_back(KrausMessage::from_unitary(u));
  return KrausMessageSet(std::move(ms));
}

}  // namespace

KrausFeasibilityReport find_kraus_messages(const SchmidtSpectrum& s, int n, int kappa, const SolverConfig& cfg) {
  cfg.validate();
  const int d = s.dim();
  if (n < 1 || n > d * d) {
    throw Error(ErrorKind::InvalidMessageCount,
                "N = " + std::to_string(n) + " outside [1, d^2 = " + std::to_string(d * d) + "]");
  }
  if (kappa < 1) throw Error(ErrorKind::InvalidParameter, "kappa must be >= 1");

  KrausFeasibilityReport rep;
  rep.d = d;
  rep.n = n;
  rep.kappa = kappa;
  rep.spectrum = s;
  rep.config = cfg;

  if (kappa == 1) {
    const FeasibilityReport u = find_messages(s, n, cfg);
    rep.feasible = u.feasible;
    rep.best_residual = u.best_residual;
    rep.max_abs_overlap = u.max_abs_overlap;
    rep.restarts_used = u.restarts_used;
    rep.best_seed = u.best_seed;
    rep.escalated = u.escalated;
    rep.best_candidate = from_unitaries(*u.best_candidate);
  } else {
    const MessageProblem prob(s, n, kappa, false);
    const SearchOutcome out = run_search(prob, cfg);
    rep.feasible = out.feasible;
    rep.best_residual = out.best_residual;
    rep.max_abs_overlap = out.max_abs_overlap;
    rep.restarts_used = out.restarts_used;
    rep.best_seed = out.best_seed;
    rep.escalated = out.escalated;
    std::vector<KrausMessage> ms;
    for (const CMatrix& w : out.best) ms.push_back(KrausMessage::from_isometry(w, d));
    rep.best_candidate = KrausMessageSet(std::move(ms));
  }
  if (rep.feasible) rep.witness = rep.best_candidate;
  rep.purities = purities_of(*rep.best_candidate, s);
  return rep;
}

namespace {

CMatrix support_projector(const CMatrix& rho, int& rank) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CMatrix p = CMatrix::Zero(rho.rows(), rho.cols());
  rank = 0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    if (es.eigenvalues()(k) > kSupportCutoff) {
      p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
      ++rank;
    }
  }
  return p;
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

OperatorBoundReport operator_bound_check(const KrausMessageSet& set, const SchmidtSpectrum& s) {
  const int d = s.dim();
  if (set.dim() != d) throw Error(ErrorKind::DimensionMismatch, "set vs spectrum");
  const Eigen::Index dd = d * d;
  CMatrix sum_rho = CMatrix::Zero(dd, dd);
  CMatrix sum_p = CMatrix::Zero(dd, dd);
  OperatorBoundReport rep;
  for (const auto& m : set.messages()) {
    const MessageDensity rho = message_density(m, s);
    int rank = 0;
    sum_p += support_projector(rho.matrix, rank);
    sum_rho += rho.matrix;
    rep.support_ranks.push_back(rank);
  }
  rep.projector_margin = min_eigenvalue(CMatrix::Identity(dd, dd) - sum_p);
  rep.density_margin = min_eigenvalue(sum_p - sum_rho);
  rep.spectral_margin = d - set.size() * s.largest();
  rep.projector_ok = rep.projector_margin >= -1e-8;
  rep.spectral_ok = rep.spectral_margin >= -1e-9;
  return rep;
}

std::optional<CMatrix> effective_unitary(const KrausMessage& m, const SchmidtSpectrum& s) {
  const int d = s.dim();
  const MessageDensity rho = message_density(m, s);
  if (purity(rho) < 1.0 - 1e-8) return std::nullopt;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix);
  const CVector psi = es.eigenvectors().col(d * d - 1);
  // psi_{a d + b} = V_ab sqrt(lambda_b)
  std::vector<int> support;
  CMatrix cols(d, 0);
  for (int b = 0; b < d; ++b) {
    if (s[b] <= kSupportCutoff) continue;
    CVector v(d);
    for (int a = 0; a < d; ++a) v(a) = psi(a * d + b) / std::sqrt(s[b]);
    cols.conservativeResize(d, cols.cols() + 1);
    cols.col(cols.cols() - 1) = v;
    support.push_back(b);
  }
  const CMatrix orth = polar_isometry(cols);

  CMatrix v = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < support.size(); ++i) v.col(support[i]) = orth.col(static_cast<Eigen::Index>(i));
  // Complete the free columns from the orthogonal complement of the fixed ones.
  CMatrix basis = orth;
  for (int b = 0; b < d; ++b) {
    if (s[b] > kSupportCutoff) continue;
    CVector best;
    for (int e = 0; e < d; ++e) {
      CVector cand = CVector::Unit(d, (b + e) % d);
      cand -= basis * (basis.adjoint() * cand);
      cand -= basis * (basis.adjoint() * cand);
      if (cand.norm() > 0.5) {
        best = cand.normalized();
        break;
      }
    }
    v.col(b) = best;
    basis.conservativeResize(d, basis.cols() + 1);
    basis.col(basis.cols() - 1) = best;
  }

  const Complex t = (m[0].adjoint() * v).trace();
  if (std::abs(t) > 1e-12) v *= std::conj(t) / std::abs(t);
  return v;
}

SchmidtSpectrum bound_spectrum(int d, int n) {
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "d >= 2 required");
  if (n < d || n > d * d) throw Error(ErrorKind::InvalidMessageCount, "bound spectrum needs d <= N <= d^2");
  std::vector<double> v(static_cast<std::size_t>(d), (1.0 - static_cast<double>(d) / n) / (d - 1));
  v[0] = static_cast<double>(d) / n;
  return SchmidtSpectrum::make(v);
}

Theorem2Audit theorem2_audit(const SchmidtSpectrum& s, int n, int kappa, const SolverConfig& cfg,
                             double purity_tolerance) {
  Theorem2Audit audit;
  audit.purity_tolerance = purity_tolerance;
  audit.search = find_kraus_messages(s, n, kappa, cfg);
  if (audit.search.feasible) audit.bound = operator_bound_check(*audit.search.witness, s);
  audit.min_purity = 1.0;
  for (double p : audit.search.purities) audit.min_purity = std::min(audit.min_purity, p);
  audit.all_pure = audit.search.feasible && audit.min_purity >= 1.0 - purity_tolerance;
  return audit;
}

}  // namespace densecode
