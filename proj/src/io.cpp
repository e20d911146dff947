#include "densecode/io.hpp"

#include <cmath>

namespace densecode {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json residual_map(const std::map<int, double>& m) {
  Json o = Json::object();
  for (const auto& [n, r] : m) o[std::to_string(n)] = num(r);
  return o;
}

template <class F>
auto parse(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bad ") + what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const SchmidtSpectrum& s) { return reals(s.values()); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const UnitaryMessageSet& set) {
  Json a = Json::array();
  for (const CMatrix& u : set.unitaries()) a.push_back(to_json(u));
  return a;
}

Json to_json(const KrausMessageSet& set) {
  Json a = Json::array();
  for (const KrausMessage& msg : set.messages()) {
    Json ops = Json::array();
    for (const CMatrix& k : msg.operators()) ops.push_back(to_json(k));
    a.push_back(std::move(ops));
  }
  return a;
}

Json to_json(const SolverConfig& cfg) {
  return Json{{"restarts", cfg.restarts},
              {"max_iterations", cfg.max_iterations},
              {"feasibility_threshold", cfg.feasibility_threshold},
              {"polish_threshold", cfg.polish_threshold},
              {"coarse_threshold", cfg.coarse_threshold},
              {"polish_iterations", cfg.polish_iterations},
              {"lbfgs_memory", cfg.lbfgs_memory},
              {"armijo_c1", cfg.armijo_c1},
              {"backtrack", cfg.backtrack},
              {"stall_tolerance", cfg.stall_tolerance},
              {"stall_window", cfg.stall_window},
              {"near_boundary_factor", cfg.near_boundary_factor},
              {"escalation_multiplier", cfg.escalation_multiplier},
              {"seed", cfg.seed}};
}

Json to_json(const FeasibilityReport& rep) {
  Json j{{"d", rep.d},
         {"n", rep.n},
         {"spectrum", to_json(rep.spectrum)},
         {"feasible", rep.feasible},
         {"bound_pruned", rep.bound_pruned},
         {"best_residual", num(rep.best_residual)},
         {"max_abs_overlap", num(rep.max_abs_overlap)},
         {"restarts_used", rep.restarts_used},
         {"best_seed", rep.best_seed},
         {"escalated", rep.escalated},
         {"config", to_json(rep.config)}};
  j["witness"] = rep.witness ? to_json(*rep.witness) : Json(nullptr);
  if (!rep.feasible) j["best_candidate"] = rep.best_candidate ? to_json(*rep.best_candidate) : Json(nullptr);
  return j;
}

Json to_json(const AlphabetResult& res) {
  Json reps = Json::array();
  for (const auto& r : res.reports) reps.push_back(to_json(r));
  return Json{{"max_n", res.max_n}, {"reports", std::move(reps)}};
}

Json to_json(const KrausFeasibilityReport& rep) {
  Json j{{"d", rep.d},
         {"n", rep.n},
         {"kappa", rep.kappa},
         {"spectrum", to_json(rep.spectrum)},
         {"feasible", rep.feasible},
         {"best_residual", num(rep.best_residual)},
         {"max_abs_overlap", num(rep.max_abs_overlap)},
         {"restarts_used", rep.restarts_used},
         {"best_seed", rep.best_seed},
         {"escalated", rep.escalated},
         {"purities", reals(rep.purities)},
         {"config", to_json(rep.config)}};
  j["witness"] = rep.witness ? to_json(*rep.witness) : Json(nullptr);
  if (!rep.feasible) j["best_candidate"] = rep.best_candidate ? to_json(*rep.best_candidate) : Json(nullptr);
  return j;
}

Json to_json(const OperatorBoundReport& rep) {
  return Json{{"projector_margin", num(rep.projector_margin)},
              {"density_margin", num(rep.density_margin)},
              {"spectral_margin", num(rep.spectral_margin)},
              {"projector_ok", rep.projector_ok},
              {"spectral_ok", rep.spectral_ok},
              {"support_ranks", rep.support_ranks}};
}

Json to_json(const Theorem1Audit& audit) {
  const auto& lem = audit.lemma;
  const auto& br = audit.brualdi;
  Json j{{"theorem", 1},
         {"d", audit.d},
         {"m", audit.m},
         {"n", audit.n},
         {"spectrum", to_json(audit.spectrum)},
         {"search", to_json(audit.search)},
         {"lemma",
          {{"target", lem.target},
           {"min_offdiagonal", lem.min_offdiagonal},
           {"max_offdiagonal", lem.max_offdiagonal},
           {"max_deviation", lem.max_deviation},
           {"rank", lem.rank},
           {"smallest_eigenvalue", lem.smallest_eigenvalue},
           {"gram", to_json(lem.gram.entries)}}},
         {"block_deviations", reals(audit.block_deviations)},
         {"overlap_histogram",
          {{"bin_width", lem.target / 8.0}, {"counts", audit.overlap_histogram}}},
         {"brualdi",
          {{"r", br.r},
           {"covered", br.covered()},
           {"covered_by_disks", br.covered_by_disks},
           {"covered_by_region", br.covered_by_region},
           {"disk_margin", num(br.disk_margin)},
           {"region_margin", num(br.region_margin)},
           {"margin", num(br.margin)}}}};
  j["brualdi"]["witness_set"] = br.witness_set ? Json(*br.witness_set) : Json(nullptr);
  return j;
}

Json to_json(const Theorem2Audit& audit) {
  Json j{{"theorem", 2},
         {"search", to_json(audit.search)},
         {"min_purity", num(audit.min_purity)},
         {"all_pure", audit.all_pure},
         {"purity_tolerance", audit.purity_tolerance}};
  j["bound"] = audit.bound ? to_json(*audit.bound) : Json(nullptr);
  return j;
}

Json to_json(const BoundaryResult& res) {
  Json steps = Json::array();
  for (const auto& st : res.steps) {
    steps.push_back({{"t", st.t}, {"lambda0", st.lambda0}, {"feasible", st.feasible}, {"bound_pruned", st.bound_pruned}});
  }
  return Json{{"spectrum", to_json(res.spectrum)},
              {"lambda0", res.lambda0()},
              {"t_feasible", res.t_feasible},
              {"t_infeasible", res.t_infeasible},
              {"lambda0_feasible", res.lambda0_feasible},
              {"lambda0_infeasible", res.lambda0_infeasible},
              {"evaluations", res.evaluations},
              {"feasible_side", to_json(res.feasible_side)},
              {"infeasible_side", to_json(res.infeasible_side)},
              {"steps", std::move(steps)}};
}

Json to_json(const PhaseDiagram& pd) {
  Json pts = Json::array();
  for (const auto& p : pd.points) {
    pts.push_back({{"spectrum", to_json(p.spectrum)}, {"max_n", p.max_n}, {"residuals", residual_map(p.residuals)}});
  }
  Json bounds = Json::object();
  for (const auto& [n, list] : pd.boundaries) {
    Json line = Json::array();
    for (const auto& s : list) line.push_back(to_json(s));
    bounds[std::to_string(n)] = std::move(line);
  }
  Json anomalies = Json::array();
  for (const auto& a : pd.anomalies) {
    anomalies.push_back({{"inner", to_json(a.inner)},
                         {"outer", to_json(a.outer)},
                         {"inner_max_n", a.inner_max_n},
                         {"outer_max_n", a.outer_max_n}});
  }
  return Json{{"d", pd.d},
              {"resolution", pd.resolution},
              {"config", to_json(pd.config)},
              {"reruns", pd.reruns},
              {"points", std::move(pts)},
              {"boundaries", std::move(bounds)},
              {"anomalies", std::move(anomalies)}};
}

SchmidtSpectrum spectrum_from_json(const Json& j) {
  return parse("spectrum", [&] { return SchmidtSpectrum::make(j.get<std::vector<double>>()); });
}

CMatrix matrix_from_json(const Json& j) {
  return parse("matrix", [&] {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, "matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorKind::Parse, "ragged matrix");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const Json& e = row.at(static_cast<std::size_t>(c));
        if (e.is_number()) {
          m(r, c) = Complex(e.get<double>(), 0.0);
        } else {
          if (e.size() != 2) throw Error(ErrorKind::Parse, "entry must be [re, im]");
          m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
    }
    return m;
  });
}

UnitaryMessageSet unitary_set_from_json(const Json& j) {
  return parse("unitary set", [&] {
    std::vector<CMatrix> us;
    for (const Json& m : j) us.push_back(matrix_from_json(m));
    return UnitaryMessageSet(std::move(us));
  });
}

KrausMessageSet kraus_set_from_json(const Json& j) {
  return parse("Kraus set", [&] {
    std::vector<KrausMessage> msgs;
    for (const Json& m : j) {
      std::vector<CMatrix> ops;
      for (const Json& k : m) ops.push_back(matrix_from_json(k));
      msgs.push_back(KrausMessage::make(std::move(ops), false));
    }
    return KrausMessageSet(std::move(msgs));
  });
}

SolverConfig config_from_json(const Json& j) {
  return parse("config", [&] {
    SolverConfig c;
    if (!j.is_object()) throw Error(ErrorKind::Parse, "config must be an object");
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("restarts", c.restarts);
    get("max_iterations", c.max_iterations);
    get("feasibility_threshold", c.feasibility_threshold);
    get("polish_threshold", c.polish_threshold);
    get("coarse_threshold", c.coarse_threshold);
    get("polish_iterations", c.polish_iterations);
    get("lbfgs_memory", c.lbfgs_memory);
    get("armijo_c1", c.armijo_c1);
    get("backtrack", c.backtrack);
    get("stall_tolerance", c.stall_tolerance);
    get("stall_window", c.stall_window);
    get("near_boundary_factor", c.near_boundary_factor);
    get("escalation_multiplier", c.escalation_multiplier);
    get("seed", c.seed);
    get("threads", c.threads);
    c.validate();
    return c;
  });
}

}  // namespace densecode
