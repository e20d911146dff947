#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "densecode/io.hpp"
#include "densecode/phase.hpp"

using namespace densecode;

namespace {

SolverConfig quick(int restarts = 10) {
  SolverConfig cfg;
  cfg.restarts = restarts;
  return cfg;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("densecode_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Number of partitions of n into at most k parts.
int partition_count(int n, int k) {
  if (n == 0) return 1;
  if (k == 0) return 0;
  return partition_count(n, k - 1) + (n >= k ? partition_count(n - k, k) : 0);
}

}  // namespace

TEST(Grid, SmallEnumerations) {
  const auto g2 = ordered_simplex_grid(2, 4);
  ASSERT_EQ(g2.size(), 3u);
  EXPECT_EQ(g2[0].values(), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(g2[1].values(), (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(g2[2].values(), (std::vector<double>{0.5, 0.5}));

  const auto g3 = ordered_simplex_grid(3, 3);
  ASSERT_EQ(g3.size(), 3u);
  EXPECT_NEAR(g3[1][0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(g3[1][1], 1.0 / 3, 1e-15);
  EXPECT_EQ(g3[2], mes(3));
}

TEST(Grid, CountIsPartitionCount) {
  for (int d = 2; d <= 4; ++d)
    for (int r : {2, 5, 12, 20}) EXPECT_EQ(static_cast<int>(ordered_simplex_grid(d, r).size()), partition_count(r, d));
  EXPECT_THROW(ordered_simplex_grid(3, 1), Error);
}

TEST(Ray, InteriorPointsAreValidSpectra) {
  const Ray ray = ray_from_mes(SchmidtSpectrum::make({0.6, 0.3, 0.1, 0.0}));
  for (int k = 0; k <= 50; ++k) {
    const double t = k / 50.0;
    const SchmidtSpectrum s = ray.at(t);
    EXPECT_NEAR(s.largest(), ray.lambda0_at(t), 1e-14);
    for (int i = 1; i < 4; ++i) EXPECT_GE(s[i - 1], s[i]);
  }
}

TEST(Bisect, FlatBoundaryForSixMessagesInQutrits) {
  const BoundaryResult r = boundary_bisect(ray_from_mes(SchmidtSpectrum::make({1.0, 0.0, 0.0})), 6, 2e-3, quick());
  EXPECT_NEAR(r.lambda0(), 0.5, 5e-3);
  EXPECT_TRUE(r.feasible_side.feasible);
  EXPECT_FALSE(r.infeasible_side.feasible);
  EXPECT_LE(r.lambda0_infeasible - r.lambda0_feasible, 2e-3 + 1e-15);
}

TEST(Bisect, QubitThreeMessageBoundaryIsBelowTheBound) {
  const BoundaryResult r = boundary_bisect(ray_from_mes(SchmidtSpectrum::make({1.0, 0.0})), 3, 1e-3, quick(50));
  EXPECT_LT(r.lambda0_infeasible, 2.0 / 3 - 0.1);
  EXPECT_NEAR(r.lambda0(), 0.5, 1e-3);
}

TEST(Bisect, BracketViolations) {
  try {
    boundary_bisect(Ray{SchmidtSpectrum::make({0.9, 0.1}), SchmidtSpectrum::make({1.0, 0.0})}, 3, 1e-3, quick(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BracketViolated);
  }
  EXPECT_THROW(boundary_bisect(ray_from_mes(SchmidtSpectrum::make({0.6, 0.4})), 2, 1e-3, quick(2)), Error);
  EXPECT_THROW(boundary_bisect(ray_from_mes(SchmidtSpectrum::make({1.0, 0.0})), 3, 0.0), Error);
}

TEST(MapDiagram, QubitLine) {
  const PhaseDiagram pd = map_diagram(2, ordered_simplex_grid(2, 10), quick(), 10);
  ASSERT_EQ(pd.points.size(), 6u);
  for (const auto& p : pd.points) EXPECT_EQ(p.max_n, p.spectrum == mes(2) ? 4 : 2);
  EXPECT_TRUE(pd.anomalies.empty());
  ASSERT_EQ(pd.boundaries.count(4), 1u);
  EXPECT_EQ(pd.boundaries.at(4).front(), mes(2));
}

TEST(MapDiagram, QutritSixMessageRegionIsFlat) {
  const PhaseDiagram pd = map_diagram(3, ordered_simplex_grid(3, 6), quick(), 6);
  for (const auto& p : pd.points) {
    if (p.spectrum.largest() <= 0.5 + 1e-12) EXPECT_GE(p.max_n, 6);
    if (p.spectrum.largest() > 0.5 + 1e-12) EXPECT_LT(p.max_n, 6);
    EXPECT_LE(p.max_n, static_cast<int>(3.0 / p.spectrum.largest() + 1e-9));
  }
  for (const auto& [n, pts] : pd.boundaries)
    for (const auto& s : pts) EXPECT_LE(s.largest(), 3.0 / n + 1e-9);
}

TEST(Boundaries, GridNeighbourDrops) {
  PhaseDiagram pd;
  pd.d = 2;
  for (auto [a, n] : {std::pair{1.0, 2}, std::pair{0.75, 2}, std::pair{0.5, 4}})
    pd.points.push_back(PhasePoint{SchmidtSpectrum::make({a, 1.0 - a}), n, {}});
  extract_boundaries(pd);
  ASSERT_EQ(pd.boundaries.size(), 1u);
  EXPECT_EQ(pd.boundaries.at(4), std::vector<SchmidtSpectrum>{mes(2)});
}

TEST(Export, CsvColumnsAndRoundTrip) {
  PhaseDiagram pd;
  pd.d = 4;
  for (const auto& s : ordered_simplex_grid(4, 7)) pd.points.push_back(PhasePoint{s, 4, {}});
  pd.points.front().max_n = 5;
  const auto path = temp_file("roundtrip.csv");
  export_diagram(pd, DiagramFormat::Csv, path);
  const std::string text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), "lambda_0,lambda_1,lambda_2,lambda_3,max_n");
  const PhaseDiagram back = import_diagram_csv(path);
  ASSERT_EQ(back.points.size(), pd.points.size());
  for (std::size_t i = 0; i < pd.points.size(); ++i) {
    EXPECT_EQ(back.points[i].spectrum, pd.points[i].spectrum);
    EXPECT_EQ(back.points[i].max_n, pd.points[i].max_n);
  }
  std::filesystem::remove(path);
}

TEST(Export, EmptyDiagramIsHeaderOnly) {
  PhaseDiagram pd;
  pd.d = 3;
  EXPECT_EQ(diagram_csv(pd), "lambda_0,lambda_1,lambda_2,max_n\n");
  EXPECT_TRUE(parse_diagram_csv(diagram_csv(pd)).points.empty());
}

TEST(Export, JsonCarriesPointsAndBoundaries) {
  const PhaseDiagram pd = map_diagram(2, ordered_simplex_grid(2, 4), quick(4), 4);
  const auto path = temp_file("diagram.json");
  export_diagram(pd, DiagramFormat::Json, path);
  const Json j = Json::parse(slurp(path));
  EXPECT_EQ(j.at("d"), 2);
  EXPECT_EQ(j.at("points").size(), 3u);
  EXPECT_EQ(j.at("boundaries").at("4").at(0), Json::array({0.5, 0.5}));
  EXPECT_EQ(j.at("config").at("seed"), pd.config.seed);
  std::filesystem::remove(path);
}

TEST(Export, Failures) {
  EXPECT_THROW(export_diagram(PhaseDiagram{}, DiagramFormat::Csv, "/nonexistent/dir/x.csv"), Error);
  EXPECT_THROW(import_diagram_csv("/nonexistent/x.csv"), Error);
  EXPECT_THROW(parse_diagram_csv("lambda_0,lambda_1,max_n\n0.5,abc,3\n"), Error);
  EXPECT_THROW(parse_diagram_csv("lambda_0,lambda_1,max_n\n0.5,0.5\n"), Error);
}
