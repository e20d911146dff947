#include "densecode/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "densecode/io.hpp"

namespace densecode {

namespace {

void partitions(int remaining, int max_part, int slots, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (slots == 0) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  // Remaining slots can absorb at most slots * max_part.
  if (remaining > slots * max_part) return;
  for (int k = std::min(remaining, max_part); k >= 0; --k) {
    cur.push_back(k);
    partitions(remaining - k, k, slots - 1, cur, out);
    cur.pop_back();
  }
}

FeasibilityReport pruned_report(const SchmidtSpectrum& s, int n, const SolverConfig& cfg) {
  FeasibilityReport rep;
  rep.d = s.dim();
  rep.n = n;
  rep.spectrum = s;
  rep.config = cfg;
  rep.bound_pruned = true;
  rep.best_residual = INFINITY;
  rep.max_abs_overlap = INFINITY;
  return rep;
}

bool violates_bound(const SchmidtSpectrum& s, int n) { return s.largest() * n > s.dim() * (1.0 + 1e-12); }

FeasibilityReport verdict(const SchmidtSpectrum& s, int n, const SolverConfig& cfg) {
  if (violates_bound(s, n)) return pruned_report(s, n, cfg);
  return find_messages(s, n, cfg);
}

double l1(const SchmidtSpectrum& a, const SchmidtSpectrum& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// alpha in (0, 1) with q - c = alpha (p - c), or a negative value when q is not strictly between.
double between_factor(const SchmidtSpectrum& c, const SchmidtSpectrum& p, const SchmidtSpectrum& q) {
  const int d = c.dim();
  double uu = 0.0;
  double uv = 0.0;
  for (int i = 0; i < d; ++i) {
    uu += (p[i] - c[i]) * (p[i] - c[i]);
    uv += (p[i] - c[i]) * (q[i] - c[i]);
  }
  if (uu < 1e-24) return -1.0;
  const double alpha = uv / uu;
  if (alpha <= 1e-12 || alpha >= 1.0 - 1e-12) return -1.0;
  double off = 0.0;
  for (int i = 0; i < d; ++i) off = std::max(off, std::abs(q[i] - c[i] - alpha * (p[i] - c[i])));
  return off <= 1e-12 ? alpha : -1.0;
}

PhasePoint evaluate_point(const SchmidtSpectrum& s, const SolverConfig& cfg) {
  AlphabetResult res = max_alphabet(s, cfg);
  PhasePoint pt{s, res.max_n, {}};
  for (const auto& rep : res.reports)
    if (!rep.bound_pruned) pt.residuals[rep.n] = rep.best_residual;
  return pt;
}

}  // namespace

std::vector<SchmidtSpectrum> ordered_simplex_grid(int d, int resolution) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "grid needs d >= 1");
  if (resolution < 2) throw Error(ErrorKind::InvalidParameter, "grid resolution must be >= 2");
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(resolution, resolution, d, cur, parts);
  std::vector<SchmidtSpectrum> grid;
  grid.reserve(parts.size());
  for (const auto& p : parts) {
    std::vector<double> v;
    for (int k : p) v.push_back(static_cast<double>(k) / resolution);
    grid.push_back(SchmidtSpectrum::make(v));
  }
  return grid;
}

Ray ray_from_mes(const SchmidtSpectrum& end) { return Ray{mes(end.dim()), end}; }

BoundaryResult boundary_bisect(const Ray& ray, int n, double tol, const SolverConfig& cfg) {
  cfg.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
  const int d = ray.start.dim();
  if (ray.end.dim() != d) throw Error(ErrorKind::DimensionMismatch, "ray endpoints differ in d");

  BoundaryResult out{ray.start, 0.0, 1.0, 0.0, 0.0, 0, {}, {}, {}};
  auto evaluate = [&](double t) {
    FeasibilityReport rep = verdict(ray.at(t), n, cfg);
    out.steps.push_back(BisectStep{t, rep.spectrum.largest(), rep.feasible, rep.bound_pruned});
    ++out.evaluations;
    return rep;
  };
  out.feasible_side = evaluate(0.0);
  out.infeasible_side = evaluate(1.0);
  if (!out.feasible_side.feasible) {
    throw Error(ErrorKind::BracketViolated, "ray start is not feasible for N = " + std::to_string(n));
  }
  if (out.infeasible_side.feasible) {
    throw Error(ErrorKind::BracketViolated, "ray end is feasible for N = " + std::to_string(n));
  }

  const bool flat = std::abs(ray.end.largest() - ray.start.largest()) < 1e-12;
  auto width = [&] {
    return flat ? out.t_infeasible - out.t_feasible
                : std::abs(ray.lambda0_at(out.t_infeasible) - ray.lambda0_at(out.t_feasible));
  };
  while (width() > tol && out.t_infeasible - out.t_feasible > 1e-14) {
    const double mid = 0.5 * (out.t_feasible + out.t_infeasible);
    FeasibilityReport rep = evaluate(mid);
    if (rep.feasible) {
      out.t_feasible = mid;
      out.feasible_side = std::move(rep);
    } else {
      out.t_infeasible = mid;
      out.infeasible_side = std::move(rep);
    }
  }
  out.lambda0_feasible = ray.lambda0_at(out.t_feasible);
  out.lambda0_infeasible = ray.lambda0_at(out.t_infeasible);
  out.spectrum = ray.at(0.5 * (out.t_feasible + out.t_infeasible));
  return out;
}

void extract_boundaries(PhaseDiagram& pd) {
  pd.boundaries.clear();
  const auto& pts = pd.points;
  double step = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dist = l1(pts[i].spectrum, pts[j].spectrum);
      if (dist > 1e-12) step = std::min(step, dist);
    }
  if (!std::isfinite(step)) return;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool edge = false;
    for (std::size_t j = 0; j < pts.size() && !edge; ++j) {
      if (i == j) continue;
      if (l1(pts[i].spectrum, pts[j].spectrum) <= step * (1.0 + 1e-9) && pts[j].max_n < pts[i].max_n) edge = true;
    }
    if (edge) pd.boundaries[pts[i].max_n].push_back(pts[i].spectrum);
  }
  for (auto& [n, list] : pd.boundaries) {
    std::sort(list.begin(), list.end(), [](const SchmidtSpectrum& a, const SchmidtSpectrum& b) {
      return a.values() < b.values();
    });
  }
}

PhaseDiagram map_diagram(int d, const std::vector<SchmidtSpectrum>& grid, const SolverConfig& cfg, int resolution) {
  cfg.validate();
  PhaseDiagram pd;
  pd.d = d;
  pd.resolution = resolution;
  pd.config = cfg;
  for (const auto& s : grid) {
    if (s.dim() != d) throw Error(ErrorKind::DimensionMismatch, "grid point of the wrong dimension");
    pd.points.push_back(evaluate_point(s, cfg));
  }

  // Along rays from MES max N must not increase outward; the inner point of a
  // violation is re-run once with escalated restarts.
  SolverConfig escalated = cfg;
  escalated.restarts = cfg.restarts * cfg.escalation_multiplier;
  const SchmidtSpectrum centre = mes(std::max(d, 2));
  if (d >= 2) {
    std::vector<bool> rerun(pd.points.size(), false);
    for (std::size_t i = 0; i < pd.points.size(); ++i) {
      for (std::size_t j = 0; j < pd.points.size(); ++j) {
        if (i == j) continue;
        const auto& outer = pd.points[i];
        auto& inner = pd.points[j];
        if (inner.max_n >= outer.max_n) continue;
        if (between_factor(centre, outer.spectrum, inner.spectrum) < 0.0) continue;
        if (!rerun[j]) {
          rerun[j] = true;
          ++pd.reruns;
          PhasePoint again = evaluate_point(inner.spectrum, escalated);
          if (again.max_n > inner.max_n) inner = std::move(again);
        }
        if (inner.max_n < outer.max_n) {
          pd.anomalies.push_back(Anomaly{inner.spectrum, outer.spectrum, inner.max_n, outer.max_n});
        }
      }
    }
  }
  extract_boundaries(pd);
  return pd;
}

std::string diagram_csv(const PhaseDiagram& pd) {
  std::ostringstream os;
  for (int i = 0; i < pd.d; ++i) os << "lambda_" << i << ",";
  os << "max_n\n";
  char buf[32];
  for (const auto& p : pd.points) {
    for (double v : p.spectrum.values()) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf << ",";
    }
    os << p.max_n << "\n";
  }
  return os.str();
}

void export_diagram(const PhaseDiagram& pd, DiagramFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  if (format == DiagramFormat::Csv) {
    out << diagram_csv(pd);
  } else {
    out << to_json(pd).dump(2) << "\n";
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

PhaseDiagram parse_diagram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty diagram file");
  PhaseDiagram pd;
  pd.d = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (pd.d < 1 || line.rfind("max_n") == std::string::npos) throw Error(ErrorKind::Parse, "bad CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      vals.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw Error(ErrorKind::Parse, "bad CSV cell '" + cell + "'");
    }
    if (static_cast<int>(vals.size()) != pd.d + 1) throw Error(ErrorKind::Parse, "bad CSV row width");
    const int max_n = static_cast<int>(vals.back());
    vals.pop_back();
    pd.points.push_back(PhasePoint{SchmidtSpectrum::make(vals), max_n, {}});
  }
  extract_boundaries(pd);
  return pd;
}

PhaseDiagram import_diagram_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_diagram_csv(ss.str());
}

}  // namespace densecode
