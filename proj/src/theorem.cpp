#include "densecode/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace densecode {

PhiVectors reshape_phi(const CMatrix& u, int m) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d) throw Error(ErrorKind::DimensionMismatch, "reshape_phi needs a square matrix");
  if (m < 1 || m >= d) {
    throw Error(ErrorKind::InvalidParameter, "m = " + std::to_string(m) + " outside [1, d)");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  PhiVectors out;
  out.m = m;
  out.phi0.resize(m * d);
  for (int c = 0; c < m; ++c) out.phi0.segment(c * d, d) = u.col(c) * scale;
  for (int k = m; k < d; ++k) out.phik.push_back(u.col(k) * scale);
  return out;
}

double overlap_bound(int m, double lambda0) {
  const double ml = m * lambda0;
  if (!(ml > 0.0) || ml > 1.0 + 1e-15) {
    throw Error(ErrorKind::InvalidParameter, "overlap_bound needs 0 < m lambda0 <= 1");
  }
  return (1.0 - ml) / ml;
}

LemmaOverlaps lemma_overlaps(const UnitaryMessageSet& set, int m) {
  const int d = set.dim();
  const int n = set.size();
  CMatrix phis(m * d, n);
  for (int j = 0; j < n; ++j) phis.col(j) = reshape_phi(set[j], m).phi0;

  LemmaOverlaps out;
  out.gram = GramMatrix{phis.adjoint() * phis, GramKind::PhiOverlap};
  out.target = 1.0 / (m * d);
  out.min_offdiagonal = n > 1 ? INFINITY : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = std::abs(out.gram.entries(i, j));
      out.offdiagonal_magnitudes.push_back(a);
      out.min_offdiagonal = std::min(out.min_offdiagonal, a);
      out.max_offdiagonal = std::max(out.max_offdiagonal, a);
      out.max_deviation = std::max(out.max_deviation, std::abs(a - out.target));
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(out.gram.entries);
  out.rank = static_cast<int>((svd.singularValues().array() > 1e-8).count());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(out.gram.entries, Eigen::EigenvaluesOnly);
  out.smallest_eigenvalue = es.eigenvalues()(0);
  return out;
}

BrualdiVerdict brualdi_covers(const CMatrix& a, int r, Complex z, double tolerance) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || n < 1) throw Error(ErrorKind::DimensionMismatch, "brualdi_covers needs a square matrix");
  if (r < 1 || r > n) throw Error(ErrorKind::InvalidParameter, "r = " + std::to_string(r) + " outside [1, N]");

  BrualdiVerdict v;
  v.r = r;
  std::vector<double> excess(static_cast<std::size_t>(n));  // |z - a_ii| - R_i
  v.disk_margin = -INFINITY;
  for (int i = 0; i < n; ++i) {
    std::vector<double> off;
    for (int j = 0; j < n; ++j)
      if (j != i) off.push_back(std::abs(a(i, j)));
    std::sort(off.begin(), off.end(), std::greater<>());
    const double row_sum = std::accumulate(off.begin(), off.end(), 0.0);
    const double s_partial = std::accumulate(off.begin(), off.begin() + (r - 1), 0.0);
    const double dist = std::abs(z - a(i, i));
    v.disk_margin = std::max(v.disk_margin, s_partial - dist);
    excess[static_cast<std::size_t>(i)] = dist - row_sum;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return excess[static_cast<std::size_t>(x)] < excess[static_cast<std::size_t>(y)]; });
  double best = 0.0;
  for (int k = 0; k < r; ++k) best += excess[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
  v.region_margin = -best;

  v.covered_by_disks = v.disk_margin >= -tolerance;
  v.covered_by_region = v.region_margin >= -tolerance;
  if (v.covered_by_region) {
    std::vector<int> p(order.begin(), order.begin() + r);
    std::sort(p.begin(), p.end());
    v.witness_set = std::move(p);
  }
  v.margin = std::max(v.disk_margin, v.region_margin);
  return v;
}

double block_form_deviation(const CMatrix& u, int m) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d) throw Error(ErrorKind::DimensionMismatch, "block_form_deviation needs a square matrix");
  if (m < 1 || m >= d) throw Error(ErrorKind::InvalidParameter, "m outside [1, d)");

  double off = 0.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const bool top_left = r < m && c < m;
      const bool diag_tail = r >= m && r == c;
      if (!top_left && !diag_tail) off = std::max(off, std::abs(u(r, c)));
    }
  }
  auto tail_dev = [&](double theta) {
    const Complex ph = std::polar(1.0, theta);
    double dev = 0.0;
    for (int k = m; k < d; ++k) dev = std::max(dev, std::abs(u(k, k) - ph));
    return dev;
  };
  // Coarse scan, then golden-section refinement around the best sample.
  constexpr int kSamples = 720;
  double best_theta = 0.0;
  double best = INFINITY;
  for (int s = 0; s < kSamples; ++s) {
    const double theta = 2.0 * M_PI * s / kSamples;
    const double v = tail_dev(theta);
    if (v < best) {
      best = v;
      best_theta = theta;
    }
  }
  double lo = best_theta - 2.0 * M_PI / kSamples;
  double hi = best_theta + 2.0 * M_PI / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double x1 = hi - g * (hi - lo);
    const double x2 = lo + g * (hi - lo);
    if (tail_dev(x1) < tail_dev(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  best = std::min(best, tail_dev(0.5 * (lo + hi)));
  return std::max(off, best);
}

SchmidtSpectrum theorem1_spectrum(int d, int m, const std::vector<double>& tail) {
  if (d < 2) throw Error(ErrorKind::InvalidDimension, "d >= 2 required");
  if (m < 1 || m >= d) throw Error(ErrorKind::InvalidParameter, "m = " + std::to_string(m) + " outside [1, d)");
  const int n = m * d + 1;
  const double top = static_cast<double>(d) / n;
  const double rest = 1.0 - m * top;
  std::vector<double> v(static_cast<std::size_t>(m), top);
  if (tail.empty()) {
    v.insert(v.end(), static_cast<std::size_t>(d - m), rest / (d - m));
  } else {
    if (static_cast<int>(tail.size()) != d - m) throw Error(ErrorKind::DimensionMismatch, "tail needs d - m values");
    const double sum = std::accumulate(tail.begin(), tail.end(), 0.0);
    if (!(sum > 0.0)) throw Error(ErrorKind::InvalidParameter, "tail must have positive weight");
    for (double t : tail) v.push_back(t / sum * rest);
  }
  return SchmidtSpectrum::make(v);
}

Theorem1Audit theorem1_audit(int d, int m, const SolverConfig& cfg, const std::vector<double>& tail) {
  Theorem1Audit audit;
  audit.d = d;
  audit.m = m;
  audit.n = m * d + 1;
  audit.spectrum = theorem1_spectrum(d, m, tail);
  audit.search = find_messages(audit.spectrum, audit.n, cfg);
  const UnitaryMessageSet& cand = *audit.search.best_candidate;
  audit.lemma = lemma_overlaps(cand, m);
  for (const CMatrix& u : cand.unitaries()) audit.block_deviations.push_back(block_form_deviation(u, m));

  const double width = audit.lemma.target / 8.0;
  audit.overlap_histogram.assign(17, 0);
  for (double a : audit.lemma.offdiagonal_magnitudes) {
    const int bin = std::min(16, static_cast<int>(a / width));
    ++audit.overlap_histogram[static_cast<std::size_t>(bin)];
  }
  audit.brualdi = brualdi_covers(audit.lemma.gram.entries, audit.n - 1, audit.lemma.smallest_eigenvalue);
  return audit;
}

}  // namespace densecode
