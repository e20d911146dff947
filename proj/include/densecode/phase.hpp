#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "densecode/solver.hpp"

namespace densecode {

// All spectra k/resolution with integer k_0 >= ... >= k_{d-1} >= 0 summing
// to resolution, i.e. partitions of `resolution` into at most d parts.
std::vector<SchmidtSpectrum> ordered_simplex_grid(int d, int resolution);

// Segment start + t (end - start), t in [0, 1]. Both ends are ordered
// spectra, so every point on it is one as well.
struct Ray {
  SchmidtSpectrum start;
  SchmidtSpectrum end;

  SchmidtSpectrum at(double t) const { return interpolate(start, end, t); }
  double lambda0_at(double t) const { return (1.0 - t) * start.largest() + t * end.largest(); }
};

Ray ray_from_mes(const SchmidtSpectrum& end);

struct BisectStep {
  double t = 0.0;
  double lambda0 = 0.0;
  bool feasible = false;
  bool bound_pruned = false;
};

struct BoundaryResult {
  SchmidtSpectrum spectrum;  // bracket midpoint
  double t_feasible = 0.0;
  double t_infeasible = 1.0;
  double lambda0_feasible = 0.0;
  double lambda0_infeasible = 0.0;
  int evaluations = 0;
  FeasibilityReport feasible_side;
  FeasibilityReport infeasible_side;
  std::vector<BisectStep> steps;  // every verdict, in evaluation order

  double lambda0() const { return spectrum.largest(); }
};

// Bisects t until the bracket spans at most `tol` in lambda_0. Points with
// lambda_0 > d/N are infeasible by the operator bound and skip the search.
// Throws BracketViolated when the start is not feasible or the end is not infeasible.
BoundaryResult boundary_bisect(const Ray& ray, int n, double tol, const SolverConfig& cfg = {});

struct PhasePoint {
  SchmidtSpectrum spectrum;
  int max_n = 0;
  std::map<int, double> residuals;  // best residual per N searched
};

struct Anomaly {
  SchmidtSpectrum inner;  // closer to MES
  SchmidtSpectrum outer;
  int inner_max_n = 0;
  int outer_max_n = 0;
};

struct PhaseDiagram {
  int d = 0;
  int resolution = 0;
  SolverConfig config;
  std::vector<PhasePoint> points;
  // Region N -> grid points with max N whose grid neighbour has a smaller max N.
  std::map<int, std::vector<SchmidtSpectrum>> boundaries;
  // Rays from MES along which the recorded max N increases even after re-runs.
  std::vector<Anomaly> anomalies;
  int reruns = 0;
};

// Computes the maximal alphabet at each grid point, re-runs points that break
// monotonicity along rays from MES with escalated restarts, and extracts
// boundary points.
PhaseDiagram map_diagram(int d, const std::vector<SchmidtSpectrum>& grid, const SolverConfig& cfg = {},
                         int resolution = 0);

enum class DiagramFormat { Csv, Json };

// CSV: lambda_0..lambda_{d-1}, max_n with round-trip precision. Throws Io.
void export_diagram(const PhaseDiagram& pd, DiagramFormat format, const std::filesystem::path& path);
std::string diagram_csv(const PhaseDiagram& pd);
// Points only (boundaries are recomputed from them).
PhaseDiagram import_diagram_csv(const std::filesystem::path& path);
PhaseDiagram parse_diagram_csv(const std::string& text);

// Recomputes PhaseDiagram::boundaries from the points (grid-neighbour drops).
void extract_boundaries(PhaseDiagram& pd);

}  // namespace densecode
