#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "densecode/io.hpp"

using namespace densecode;

namespace {

constexpr int kFeasible = 0;
constexpr int kInfeasible = 1;
constexpr int kError = 2;

struct Options {
  int d = 0;
  int n = 0;
  int m = 0;
  int kappa = 1;
  int theorem = 0;
  int resolution = 0;
  std::string spectrum = "mes";
  std::string end;
  std::string output;
  std::string format = "json";
  double bisect_tol = 1e-3;
  double purity_tol = 1e-6;
  int verbose = 0;
  SolverConfig cfg;
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw Error(ErrorKind::Parse, "bad spectrum value '" + cell + "'");
    v.push_back(x);
  }
  return v;
}

// Explicit values, or one of mes, corner (lambda_0 = d/N, equal tail), product.
SchmidtSpectrum resolve_spectrum(const std::string& text, int d, int n) {
  if (text == "mes") return mes(d);
  if (text == "corner") {
    if (n < 1) throw Error(ErrorKind::InvalidParameter, "'corner' needs -N");
    return bound_spectrum(d, n);
  }
  if (text == "product") {
    if (d < 1) throw Error(ErrorKind::InvalidDimension, "d >= 1 required");
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[0] = 1.0;
    return SchmidtSpectrum::make(v);
  }
  SchmidtSpectrum s = SchmidtSpectrum::make(parse_values(text));
  if (s.dim() != d) throw Error(ErrorKind::DimensionMismatch, "spectrum has " + std::to_string(s.dim()) + " values, d = " + std::to_string(d));
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + o.output);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + o.output);
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

void note(const Options& o, const std::string& msg) {
  if (o.verbose > 0) std::cerr << msg << "\n";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int cmd_solve(const Options& o) {
  const SchmidtSpectrum s = resolve_spectrum(o.spectrum, o.d, o.n);
  if (o.kappa > 1) {
    const KrausFeasibilityReport rep = find_kraus_messages(s, o.n, o.kappa, o.cfg);
    note(o, std::string(rep.feasible ? "feasible" : "infeasible") + ", max overlap " + fmt(rep.max_abs_overlap));
    emit_json(o, to_json(rep));
    return rep.feasible ? kFeasible : kInfeasible;
  }
  const FeasibilityReport rep = find_messages(s, o.n, o.cfg);
  note(o, std::string(rep.feasible ? "feasible" : "infeasible") + ", max overlap " + fmt(rep.max_abs_overlap));
  emit_json(o, to_json(rep));
  return rep.feasible ? kFeasible : kInfeasible;
}

int cmd_maxn(const Options& o) {
  const SchmidtSpectrum s = resolve_spectrum(o.spectrum, o.d, o.n);
  const AlphabetResult res = max_alphabet(s, o.cfg);
  if (o.output.empty()) {
    std::cout << res.max_n << "\n";
  } else {
    Json j = to_json(res);
    j["spectrum"] = to_json(s);
    j["config"] = to_json(o.cfg);
    emit_json(o, j);
    std::cout << res.max_n << "\n";
  }
  return kFeasible;
}

int cmd_map(const Options& o) {
  if (o.d < 1) throw Error(ErrorKind::InvalidDimension, "d >= 1 required");
  const int r = o.resolution > 0 ? o.resolution : (o.d >= 4 ? 20 : 40);
  const PhaseDiagram pd = map_diagram(o.d, ordered_simplex_grid(o.d, r), o.cfg, r);
  note(o, std::to_string(pd.points.size()) + " points, " + std::to_string(pd.anomalies.size()) + " anomalies");
  if (o.format == "csv") {
    emit(o, diagram_csv(pd));
  } else {
    emit_json(o, to_json(pd));
  }
  return kFeasible;
}

int cmd_bisect(const Options& o) {
  const SchmidtSpectrum end = resolve_spectrum(o.end, o.d, o.n);
  const BoundaryResult res = boundary_bisect(ray_from_mes(end), o.n, o.bisect_tol, o.cfg);
  note(o, "boundary lambda_0 in [" + fmt(res.lambda0_feasible) + ", " + fmt(res.lambda0_infeasible) + "]");
  emit_json(o, to_json(res));
  return kFeasible;
}

int cmd_audit(const Options& o) {
  if (o.theorem == 1) {
    std::vector<double> tail;
    if (o.spectrum != "mes") tail = parse_values(o.spectrum);
    const Theorem1Audit audit = theorem1_audit(o.d, o.m, o.cfg, tail);
    note(o, std::string(audit.search.feasible ? "feasible" : "infeasible") + ", residual floor " +
                fmt(audit.search.best_residual));
    emit_json(o, to_json(audit));
    return audit.search.feasible ? kInfeasible : kFeasible;
  }
  if (o.n < 1) throw Error(ErrorKind::InvalidParameter, "theorem 2 audit needs -N");
  const SchmidtSpectrum s = o.spectrum == "mes" ? bound_spectrum(o.d, o.n) : resolve_spectrum(o.spectrum, o.d, o.n);
  const Theorem2Audit audit = theorem2_audit(s, o.n, std::max(o.kappa, 2), o.cfg, o.purity_tol);
  note(o, "min purity " + fmt(audit.min_purity));
  emit_json(o, to_json(audit));
  return audit.search.feasible && audit.all_pure ? kFeasible : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic dense coding: message feasibility, alphabets and phase diagrams"};
  app.require_subcommand(1);
  // Separate storage per subcommand.
  Options so;
  Options mo;
  Options po;
  Options bo;
  Options ao;

  auto common = [](CLI::App* sub, Options& o) {
    sub->add_option("--restarts", o.cfg.restarts, "random restarts")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.cfg.seed, "base seed");
    sub->add_option("--tol", o.cfg.feasibility_threshold, "feasibility threshold on the max cross overlap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", o.cfg.max_iterations, "descent iterations per restart")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.cfg.threads, "worker threads (0 = DENSECODE_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--output", o.output, "report file (default stdout)");
    sub->add_flag("-v,--verbose", o.verbose, "summary on stderr");
  };

  auto* solve = app.add_subcommand("solve", "search for N Lambda-orthogonal messages");
  solve->add_option("-d", so.d, "local dimension")->required();
  solve->add_option("-N", so.n, "number of messages")->required();
  solve->add_option("--spectrum", so.spectrum, "comma-separated values, mes, corner or product");
  solve->add_option("--kappa,--kraus-rank", so.kappa, "Kraus operators per message")->check(CLI::PositiveNumber);
  common(solve, so);

  auto* maxn = app.add_subcommand("maxn", "largest feasible alphabet");
  maxn->add_option("-d", mo.d, "local dimension")->required();
  maxn->add_option("-N", mo.n, "N used by the corner spectrum");
  maxn->add_option("--spectrum", mo.spectrum, "comma-separated values, mes, corner or product");
  common(maxn, mo);

  auto* map = app.add_subcommand("map", "maximal alphabet over the ordered simplex");
  map->add_option("-d", po.d, "local dimension")->required();
  map->add_option("-r,--resolution", po.resolution, "grid denominator (default 40, or 20 for d >= 4)")
      ->check(CLI::PositiveNumber);
  map->add_option("--format", po.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  common(map, po);

  auto* bisect = app.add_subcommand("bisect", "boundary of the N region along a ray from MES");
  bisect->add_option("-d", bo.d, "local dimension")->required();
  bisect->add_option("-N", bo.n, "number of messages")->required();
  bisect->add_option("--end", bo.end, "ray end point")->required();
  bisect->add_option("--bisect-tol", bo.bisect_tol, "bracket width in lambda_0")->check(CLI::PositiveNumber);
  common(bisect, bo);

  auto* audit = app.add_subcommand("audit", "numerical audit of the lambda_0 = d/N bound");
  audit->add_option("--theorem", ao.theorem, "1 (equal top-m block) or 2 (Kraus purity)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  audit->add_option("-d", ao.d, "local dimension")->required();
  audit->add_option("-m", ao.m, "size of the equal top block (theorem 1)");
  audit->add_option("-N", ao.n, "number of messages (theorem 2)");
  audit->add_option("--kappa,--kraus-rank", ao.kappa, "Kraus operators per message (theorem 2, >= 2)")
      ->check(CLI::PositiveNumber);
  audit->add_option("--spectrum", ao.spectrum, "theorem 1: tail weights; theorem 2: spectrum (default corner)");
  audit->add_option("--purity-tol", ao.purity_tol, "purity tolerance (theorem 2)")->check(CLI::PositiveNumber);
  common(audit, ao);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*solve) return cmd_solve(so);
    if (*maxn) return cmd_maxn(mo);
    if (*map) return cmd_map(po);
    if (*bisect) return cmd_bisect(bo);
    return cmd_audit(ao);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
