#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/flatten.hpp"
#include "oracles.hpp"

using namespace frf;

namespace {

ConstrainedSolution solve(const TriMesh& m, const ConstraintSet& cs, const SolveOptions& opt) {
  const auto rows = oracle::target_vertices(cs.boundary);
  return solve_constrained(modify_laplacian(cotangent_laplacian(m), rows), cs, opt);
}

}  // namespace

TEST_CASE("sparse solve matches the dense KKT oracle on random meshes") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> ring_count(3, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int meshes = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const int rings = ring_count(rng);
    const TriMesh m = disk_mesh(rings, 1.0, 0.3 * unit(rng), 0.6 * unit(rng), rng());
    REQUIRE(m.vertex_count() <= 500);
    const int regional = 1 + static_cast<int>(unit(rng) * std::min(10, m.vertex_count() / 4));
    const ConstraintSet cs = oracle::random_disk_constraints(m, rings, regional, rng);
    for (WeightMode mode : {WeightMode::kBoundaryRows, WeightMode::kUniform}) {
      for (KktBackend backend : {KktBackend::kCondensed, KktBackend::kSparseLu}) {
        const ConstrainedSolution s = solve(m, cs, {1000.0, mode, backend});
        const Eigen::MatrixXd x = oracle::dense_kkt_solve(m, cs, 1000.0, mode);
        for (int i = 0; i < m.vertex_count(); ++i) {
          worst = std::max(worst, std::abs(s.points[static_cast<std::size_t>(i)].x() - x(i, 0)));
          worst = std::max(worst, std::abs(s.points[static_cast<std::size_t>(i)].y() - x(i, 1)));
        }
        CHECK(s.constraint_error <= 1e-9);
      }
    }
    ++meshes;
  }
  MESSAGE("max |sparse - dense| = " << worst);
  CHECK(meshes >= 20);
  CHECK(worst <= 1e-7);
}

TEST_CASE("planar mesh constrained to its own coordinates is a fixed point of both stages") {
  const int rings = 8;
  const TriMesh m = disk_mesh(rings, 1.0, 0.3, 0.0, 17);
  ConstraintSet cs;
  for (int v : disk_rim(rings)) cs.boundary.push_back({v, Vec2(m.vertex(v).x(), m.vertex(v).y())});
  for (int v : {0, 10, 40, 77}) cs.regional.push_back({v, Vec2(m.vertex(v).x(), m.vertex(v).y())});
  for (KktBackend backend : {KktBackend::kCondensed, KktBackend::kSparseLu}) {
    const ConstrainedSolution s = solve(m, cs, {1000.0, WeightMode::kBoundaryRows, backend});
    double err = 0.0;
    for (int i = 0; i < m.vertex_count(); ++i) {
      err = std::max(err, (s.points[static_cast<std::size_t>(i)] - Vec2(m.vertex(i).x(), m.vertex(i).y())).cwiseAbs().maxCoeff());
    }
    CHECK(err <= 1e-8);
    const RefinedSolution r = refine_boundary(s.points, m.faces(), cs.boundary);
    double err2 = 0.0;
    for (int i = 0; i < m.vertex_count(); ++i) {
      err2 = std::max(err2, (r.points[static_cast<std::size_t>(i)] - Vec2(m.vertex(i).x(), m.vertex(i).y())).cwiseAbs().maxCoeff());
    }
    CHECK(err2 <= 1e-8);
  }
}

TEST_CASE("single interior vertex of a symmetric pyramid lands at the square centre") {
  const TriMesh m({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 0.4}},
                  {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
  ConstraintSet cs;
  for (int v = 0; v < 4; ++v) cs.boundary.push_back({v, Vec2(m.vertex(v).x(), m.vertex(v).y())});
  const ConstrainedSolution s = solve(m, cs, {});
  CHECK(std::abs(s.points[4].x() - 0.5) <= 1e-12);
  CHECK(std::abs(s.points[4].y() - 0.5) <= 1e-12);
}

TEST_CASE("uniform weighting makes the solution independent of w") {
  std::mt19937_64 rng(3);
  const TriMesh m = disk_mesh(7, 1.0, 0.25, 0.5, 9);
  const ConstraintSet cs = oracle::random_disk_constraints(m, 7, 6, rng);
  const ConstrainedSolution base = solve(m, cs, {1.0, WeightMode::kUniform, KktBackend::kCondensed});
  for (double w : {0.01, 7.0, 1000.0, 1e5}) {
    const ConstrainedSolution s = solve(m, cs, {w, WeightMode::kUniform, KktBackend::kCondensed});
    for (int i = 0; i < m.vertex_count(); ++i) {
      CHECK((s.points[static_cast<std::size_t>(i)] - base.points[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("boundary-row weighting pulls the rim closer as w grows") {
  std::mt19937_64 rng(4);
  const TriMesh m = disk_mesh(7, 1.0, 0.25, 0.5, 10);
  const ConstraintSet cs = oracle::random_disk_constraints(m, 7, 12, rng);
  double previous = std::numeric_limits<double>::infinity();
  for (double w : {1.0, 10.0, 100.0, 1000.0}) {
    const ConstrainedSolution s = solve(m, cs, {w, WeightMode::kBoundaryRows, KktBackend::kCondensed});
    const double dev = max_deviation(s.points, cs.boundary);
    CHECK(dev < previous);
    previous = dev;
  }
}

TEST_CASE("invalid inputs") {
  const TriMesh m = disk_mesh(3);
  ConstraintSet cs;
  for (int v : disk_rim(3)) cs.boundary.push_back({v, Vec2(m.vertex(v).x(), m.vertex(v).y())});
  const auto rows = oracle::target_vertices(cs.boundary);
  const SparseLaplacian lmod = modify_laplacian(cotangent_laplacian(m), rows);
  try {
    solve_constrained(lmod, cs, {0.0});
    FAIL("w = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.message() == "w must be positive");
  }
  ConstraintSet dup = cs;
  dup.regional = {{0, Vec2(0, 0)}, {0, Vec2(0.1, 0)}};
  CHECK_THROWS_AS(solve_constrained(lmod, dup, {}), Error);
  ConstraintSet overlap = cs;
  overlap.regional = {{cs.boundary[0].vertex, Vec2(0, 0)}};
  try {
    solve_constrained(lmod, overlap, {});
    FAIL("regional constraint on a boundary vertex accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingular);
  }
  ConstraintSet missing = cs;
  missing.boundary.pop_back();
  CHECK_THROWS_AS(solve_constrained(lmod, missing, {}), Error);
}

TEST_CASE("refinement is harmonic in the 2D metric and idempotent") {
  std::mt19937_64 rng(8);
  const TriMesh m = disk_mesh(6, 1.0, 0.2, 0.7, 12);
  const ConstraintSet cs = oracle::random_disk_constraints(m, 6, 8, rng);
  const ConstrainedSolution s = solve(m, cs, {});
  const RefinedSolution r = refine_boundary(s.points, m.faces(), cs.boundary);
  CHECK(max_deviation(r.points, cs.boundary) == 0.0);
  CHECK(r.residual <= 1e-10);
  const SparseMatrix l = cotangent_laplacian(r.points, m.faces()).matrix;
  Eigen::MatrixXd xy(m.vertex_count(), 2);
  for (int i = 0; i < m.vertex_count(); ++i) xy.row(i) << r.points[static_cast<std::size_t>(i)].x(), r.points[static_cast<std::size_t>(i)].y();
  const Eigen::MatrixXd lx = l * xy;
  std::set<int> fixed;
  for (const Target& t : cs.boundary) fixed.insert(t.vertex);
  for (int i = 0; i < m.vertex_count(); ++i) {
    if (!fixed.count(i)) CHECK(lx.row(i).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("flip counting and deviation helpers") {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::vector<Face> faces{{0, 1, 2}, {1, 2, 3}, {1, 3, 2}};
  CHECK(count_flipped(pts, faces, 1) == 1);
  CHECK(count_flipped(pts, faces, -1) == 2);
  const std::vector<Target> t{{0, Vec2(0, 0.5)}, {3, Vec2(1, 1)}};
  CHECK(max_deviation(pts, t) == doctest::Approx(0.5));
}

TEST_CASE("flat mesh conversion keeps faces, provenance and channels") {
  FlatMesh f;
  f.points = {{0, 0}, {1, 0}, {0, 1}};
  f.faces = {{0, 1, 2}};
  f.provenance = {5, 6, 7};
  f.channels = {{"lat", {1, 2, 3}}};
  f.face_channels = {{"region", {4}}};
  f.template_hash = "0123456789abcdef";
  const TriMesh t = f.to_trimesh();
  CHECK(t.vertex(1) == Vec3(1, 0, 0));
  const FlatMesh g = FlatMesh::from_trimesh(t, f.template_hash);
  CHECK(g.points == f.points);
  CHECK(g.faces == f.faces);
  CHECK(g.provenance == f.provenance);
  CHECK(g.channels == f.channels);
  CHECK(g.face_channels == f.face_channels);
  CHECK(g.template_hash == f.template_hash);
}
