// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "cli.hpp"
#include "frf/distortion.hpp"
#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/json_io.hpp"
#include "frf/laplacian.hpp"
#include "frf/mesh_io.hpp"
#include "frf/pipeline.hpp"
#include "frf/subcontour.hpp"
#include "frf/template.hpp"
#include "frf/transfer.hpp"
#include "job.hpp"
#include "oracles.hpp"

using namespace frf;
namespace fs = std::filesystem;

namespace {

// About 51k faces once the mitral cap and the five holes are cut out.
constexpr int kLargeFrequency = 84;
constexpr double kRuntimeLimitSeconds = 10.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

Outcome verdict(bool pass, std::string detail) { return {pass, std::move(detail)}; }

// Worst |a - b| component over a set of targets.
double target_error(const std::vector<Vec2>& points, std::span<const Target> targets) {
  double worst = 0.0;
  for (const Target& t : targets) {
    worst = std::max(worst, (points[static_cast<std::size_t>(t.vertex)] - t.point).cwiseAbs().maxCoeff());
  }
  return worst;
}

double target_distance(const std::vector<Vec2>& points, std::span<const Target> targets) {
  double worst = 0.0;
  for (const Target& t : targets) worst = std::max(worst, (points[static_cast<std::size_t>(t.vertex)] - t.point).norm());
  return worst;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Doubles spread over many magnitudes, both signs, signed zero and a subnormal.
std::vector<double> awkward_values(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  std::uniform_real_distribution<double> mantissa(1.0, 10.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = (rng() & 1 ? -1.0 : 1.0) * mantissa(rng) * std::pow(10.0, exponent(rng));
  if (n > 3) {
    v[0] = -0.0;
    v[1] = 4.9406564584124654e-324;
    v[2] = 0.1;
    v[3] = 1.0 / 3.0;
  }
  return v;
}

struct Large {
  AtriumFixture fixture;
  TemplateSpec spec;
  PipelineResult result;
  double seconds = 0.0;
};

// The large fixture is flattened once; several criteria read the same result.
const Large& large() {
  static const Large l = [] {
    Large out;
    out.spec = build_template("population");
    out.fixture = sphere_with_holes(kLargeFrequency, out.spec);
    const TriMesh& m = out.fixture.mesh;
    out.fixture.mesh = m.with_channel("lat", awkward_values(m.vertex_count(), 7)).with_channel("voltage", awkward_values(m.vertex_count(), 8));
    const auto t0 = std::chrono::steady_clock::now();
    out.result = flatten_pipeline(out.fixture.mesh, out.fixture.seeds, out.spec);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }();
  return l;
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("frf_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Outcome runtime() {
  const Large& l = large();
  return verdict(l.seconds <= kRuntimeLimitSeconds, num(l.seconds) + " s for " + std::to_string(l.fixture.mesh.face_count()) +
                                                         " faces, " + std::to_string(l.fixture.mesh.vertex_count()) + " vertices (limit " +
                                                         num(kRuntimeLimitSeconds) + " s)");
}

Outcome hard_constraints() {
  const Large& l = large();
  const double err = target_error(l.result.initial_points, l.result.constraints.regional);
  const auto n = l.result.constraints.regional.size();
  return verdict(n > 0 && err <= 1e-9 && l.result.report.constraint_error <= 1e-9,
                 "max |x_i - s_i| = " + num(err) + " over " + std::to_string(n) + " regional vertices, both coordinates");
}

Outcome boundary_exactness() {
  const Large& l = large();
  const auto& b = l.result.constraints.boundary;
  const double before = target_distance(l.result.initial_points, b);
  const double after = target_distance(l.result.flat.points, b);
  return verdict(after <= 1e-9 && after < before, "deviation " + num(before) + " before refinement, " + num(after) + " after, " +
                                                      std::to_string(b.size()) + " boundary vertices");
}

Outcome identity_fixed_point() {
  double worst = 0.0;
  for (std::uint64_t seed : {3u, 17u, 29u}) {
    const int rings = 8;
    const TriMesh m = disk_mesh(rings, 1.0, 0.3, 0.0, seed);
    std::vector<Vec2> own;
    for (const Vec3& v : m.vertices()) own.emplace_back(v.x(), v.y());
    ConstraintSet cs;
    for (int v : disk_rim(rings)) cs.boundary.push_back({v, own[static_cast<std::size_t>(v)]});
    for (int v : {0, 10, 40, 77}) cs.regional.push_back({v, own[static_cast<std::size_t>(v)]});
    const SparseLaplacian lmod = modify_laplacian(cotangent_laplacian(m), oracle::target_vertices(cs.boundary));
    for (KktBackend backend : {KktBackend::kCondensed, KktBackend::kSparseLu}) {
      const ConstrainedSolution s = solve_constrained(lmod, cs, {1000.0, WeightMode::kBoundaryRows, backend});
      const RefinedSolution r = refine_boundary(s.points, m.faces(), cs.boundary);
      for (std::size_t v = 0; v < own.size(); ++v) {
        worst = std::max(worst, (s.points[v] - own[v]).cwiseAbs().maxCoeff());
        worst = std::max(worst, (r.points[v] - own[v]).cwiseAbs().maxCoeff());
      }
    }
  }
  return verdict(worst <= 1e-8, "max displacement " + num(worst) + " over solve and refinement, both backends");
}

Outcome dense_oracle() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> ring_count(3, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int meshes = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const int rings = ring_count(rng);
    const TriMesh m = disk_mesh(rings, 1.0, 0.3 * unit(rng), 0.6 * unit(rng), rng());
    if (m.vertex_count() > 500) return verdict(false, "fixture exceeded 500 vertices");
    const int regional = 1 + static_cast<int>(unit(rng) * std::min(10, m.vertex_count() / 4));
    const ConstraintSet cs = oracle::random_disk_constraints(m, rings, regional, rng);
    const SparseLaplacian lmod = modify_laplacian(cotangent_laplacian(m), oracle::target_vertices(cs.boundary));
    for (WeightMode mode : {WeightMode::kBoundaryRows, WeightMode::kUniform}) {
      const Eigen::MatrixXd x = oracle::dense_kkt_solve(m, cs, 1000.0, mode);
      for (KktBackend backend : {KktBackend::kCondensed, KktBackend::kSparseLu}) {
        const ConstrainedSolution s = solve_constrained(lmod, cs, {1000.0, mode, backend});
        for (int i = 0; i < m.vertex_count(); ++i) {
          worst = std::max(worst, std::abs(s.points[static_cast<std::size_t>(i)].x() - x(i, 0)));
          worst = std::max(worst, std::abs(s.points[static_cast<std::size_t>(i)].y() - x(i, 1)));
        }
      }
    }
    ++meshes;
  }
  return verdict(meshes >= 20 && worst <= 1e-7, std::to_string(meshes) + " meshes, max |sparse - dense| = " + num(worst));
}

Outcome laplacian_analytics() {
  double worst = 0.0;
  const TriMesh sq({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
  const SparseMatrix ls = cotangent_laplacian(sq).matrix;
  // Sides see one 45 degree angle each, the diagonal two right angles.
  const double expected_sq[4][4] = {{-1, 0.5, 0, 0.5}, {0.5, -1, 0.5, 0}, {0, 0.5, -1, 0.5}, {0.5, 0, 0.5, -1}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(ls.coeff(r, c) - expected_sq[r][c]));
  }
  const SparseMatrix lh = cotangent_laplacian(disk_mesh(1)).matrix;
  const double spoke = 1.0 / std::sqrt(3.0), rim = spoke / 2.0;
  worst = std::max(worst, std::abs(lh.coeff(0, 0) + 6.0 * spoke));
  for (int j = 1; j <= 6; ++j) {
    const int next = 1 + j % 6, prev = 1 + (j + 4) % 6;
    worst = std::max({worst, std::abs(lh.coeff(0, j) - spoke), std::abs(lh.coeff(j, 0) - spoke), std::abs(lh.coeff(j, next) - rim),
                      std::abs(lh.coeff(j, prev) - rim), std::abs(lh.coeff(j, j) + spoke + 2.0 * rim)});
  }
  const bool closed_form = worst <= 1e-14;

  double row_sum = 0.0;
  std::vector<TriMesh> meshes{disk_mesh(6, 1.0, 0.3, 0.4, 11), sphere_with_holes(24, build_template("population")).mesh};
  for (const TriMesh& m : meshes) {
    const SparseMatrix l = cotangent_laplacian(m).matrix;
    const Eigen::VectorXd sums = l * Eigen::VectorXd::Ones(m.vertex_count());
    row_sum = std::max(row_sum, sums.cwiseAbs().maxCoeff());
  }
  return verdict(closed_form && row_sum <= 1e-10,
                 "max |L - closed form| = " + num(worst) + " (square, hexagon fan), max |row sum| = " + num(row_sum));
}

Outcome distortion_oracle() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  double fd_err = 0.0, svd_err = 0.0;
  int tested = 0;
  while (tested < 100) {
    std::array<Vec3, 3> p;
    std::array<Vec2, 3> q;
    for (auto& v : p) v = Vec3(g(rng), g(rng), g(rng));
    for (auto& v : q) v = Vec2(g(rng), g(rng));
    if ((p[1] - p[0]).cross(p[2] - p[0]).norm() < 0.05) continue;
    const Eigen::Matrix2d fd = oracle::fd_jacobian(p, q);
    const Eigen::Matrix2d j = jacobian(p, q);
    fd_err = std::max(fd_err, (j - fd).cwiseAbs().maxCoeff() / std::max(1.0, fd.cwiseAbs().maxCoeff()));
    const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(fd).singularValues();
    svd_err = std::max(svd_err, std::abs(isotropy_ratio(j) - sv(1) / sv(0)));
    ++tested;
  }

  const TriMesh tri({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  FlatMesh sheared = FlatMesh::from_trimesh(tri);
  sheared.points = {{0, 0}, {1, 0}, {1, 1}};
  const double shear = distortion_report(tri, sheared).beta[0];
  const double golden = (std::sqrt(5.0) - 1.0) * (std::sqrt(5.0) - 1.0) / 4.0;
  const double shear_err = std::abs(shear - golden);

  // Weighted-mean alpha on flatten outputs: the large fixture plus other templates and solver settings.
  double alpha_err = 0.0;
  const Large& l = large();
  alpha_err = std::abs(distortion_report(l.fixture.mesh, l.result.flat).alpha_summary.weighted_mean - 1.0);
  int outputs = 1;
  for (const char* name : {"adapted1", "adapted2"}) {
    const TemplateSpec spec = build_template(name);
    const AtriumFixture fx = sphere_with_holes(24, spec);
    for (KktBackend backend : {KktBackend::kCondensed, KktBackend::kSparseLu}) {
      for (WeightMode mode : {WeightMode::kBoundaryRows, WeightMode::kUniform}) {
        const PipelineResult r = flatten_pipeline(fx.mesh, fx.seeds, spec, {{1000.0, mode, backend}, true});
        alpha_err = std::max(alpha_err, std::abs(distortion_report(fx.mesh, r.flat).alpha_summary.weighted_mean - 1.0));
        ++outputs;
      }
    }
  }
  return verdict(tested == 100 && fd_err <= 1e-6 && svd_err <= 1e-6 && shear_err <= 1e-12 && alpha_err <= 1e-9,
                 "Jacobian vs finite differences " + num(fd_err) + ", beta vs SVD " + num(svd_err) + " (100 pairs); shear beta error " +
                     num(shear_err) + "; |weighted mean alpha - 1| <= " + num(alpha_err) + " on " + std::to_string(outputs) +
                     " flatten outputs");
}

Outcome subcontour_rule() {
  long checked = 0, rejected = 0, wrong = 0;
  for (int n = 6; n <= 30; ++n) {
    const auto p = proportional_lengths(n, 3);
    for (int l12 = 1; l12 <= n - 2; ++l12) {
      for (int l23 = 1; l12 + l23 <= n - 1; ++l23) {
        const int l31 = n - l12 - l23;
        for (int offset = 0; offset < n; ++offset) {
          const SubcontourSplit in = oracle::split_from_lengths(offset, {l12, l23, l31});
          const int d2 = oracle::floor_div2(p[0] - l12);
          const int d3 = oracle::floor_div2(p[1] - l23);
          const int e12 = l12 + d2, e23 = l23 - d2 + d3, e31 = l31 - d3;
          if (e12 < 1 || e23 < 1 || e31 < 1) {
            try {
              recompute_subcontours(in);
              ++wrong;
            } catch (const Error&) {
              ++rejected;
            }
            continue;
          }
          const SubcontourSplit out = recompute_subcontours(in);
          const auto l = out.lengths();
          const bool ok = out.positions.size() == 3 && out.ring_length == n && out.positions[0] == in.positions[0] &&
                          out.positions[1] == oracle::mod(in.positions[1] + d2, n) &&
                          out.positions[2] == oracle::mod(in.positions[2] + d3, n) && l == std::vector<int>{e12, e23, e31} &&
                          std::accumulate(l.begin(), l.end(), 0) == n;
          wrong += !ok;
          ++checked;
        }
      }
    }
  }
  return verdict(wrong == 0 && checked > 0, std::to_string(checked) + " compositions matched, " + std::to_string(rejected) +
                                                " correctly rejected, " + std::to_string(wrong) + " wrong");
}

Outcome template_ratios() {
  const LayoutConfig c = preset_layout("population");
  const bool configured = c.lspv_ratio == 1.1 && c.ripv_ratio == 1.1 && c.rspv_ratio == 1.35 && c.laa_ratio == 1.35 &&
                          c.right_carina_ratio == 1.1;
  const TemplateSpec t = build_template("population");
  const double lipv = t.hole(Hole::kLIPV).radius;
  const std::array<double, 4> ratios{t.hole(Hole::kLSPV).radius / lipv, t.hole(Hole::kRIPV).radius / lipv,
                                     t.hole(Hole::kRSPV).radius / lipv, t.hole(Hole::kLAA).radius / lipv};
  const std::array<double, 4> expected{1.1, 1.1, 1.35, 1.35};
  double err = 0.0;
  for (std::size_t k = 0; k < 4; ++k) err = std::max(err, std::abs(ratios[k] - expected[k]));
  const double carina = circle_gap(t, Hole::kRSPV, Hole::kRIPV) / circle_gap(t, Hole::kLSPV, Hole::kLIPV);
  err = std::max(err, std::abs(carina - 1.1));
  std::ostringstream d;
  d << std::setprecision(15) << "radius ratios LSPV " << ratios[0] << ", RIPV " << ratios[1] << ", RSPV " << ratios[2] << ", LAA "
    << ratios[3] << "; carina ratio " << carina << "; max error " << std::setprecision(3) << err;
  return verdict(configured && err <= 1e-12, d.str());
}

Outcome no_information_loss() {
  const Large& l = large();
  const TriMesh& src = l.fixture.mesh;
  const fs::path path = scratch() / "large_flat.vtk";
  cli::save_flat(l.result.flat, path);
  const TriMesh back = cli::load_flat(path).to_trimesh();
  bool ok = back.faces() == src.faces() && back.provenance() == src.provenance() && l.result.flat.faces == src.faces() &&
            l.result.flat.provenance == src.provenance();
  int channels = 0;
  for (const auto& [name, values] : src.channels()) {
    ok = ok && back.has_channel(name) && same_bits(back.channel(name), values);
    ++channels;
  }
  // 2D back to 3D by provenance id, on a vertex order that differs from the flat map's.
  std::unordered_map<std::int64_t, int> by_id;
  for (int v = 0; v < back.vertex_count(); ++v) by_id.emplace(back.provenance()[static_cast<std::size_t>(v)], v);
  for (const auto& [name, values] : src.channels()) {
    for (int v = src.vertex_count() - 1; v >= 0; --v) {
      const auto it = by_id.find(src.provenance()[static_cast<std::size_t>(v)]);
      ok = ok && it != by_id.end() && std::memcmp(&back.channel(name)[static_cast<std::size_t>(it->second)], &values[static_cast<std::size_t>(v)], sizeof(double)) == 0;
    }
  }
  return verdict(ok && channels >= 2, "faces and provenance identical, " + std::to_string(channels) + " channels bit-exact over " +
                                          std::to_string(src.vertex_count()) + " vertices through flat.vtk");
}

Outcome transfer_oracles() {
  const TemplateSpec spec = build_template("population");
  const std::string hash = template_hash(spec);
  auto planar = [&](int rings, double jitter, std::uint64_t seed) {
    FlatMesh f = FlatMesh::from_trimesh(disk_mesh(rings, 1.0, jitter, 0.0, seed), hash);
    f.template_hash = hash;
    return f;
  };
  std::mt19937_64 rng(5);
  long compared = 0, mismatched = 0;
  for (int rings : {6, 15, 25}) {
    const FlatMesh ref = planar(rings, 0.3, static_cast<std::uint64_t>(rings));
    if (ref.points.size() > 2000) return verdict(false, "reference map exceeded 2k vertices");
    Parcellation2D p;
    p.template_hash = hash;
    std::uniform_int_distribution<int> code(0, 4);
    for (std::size_t v = 0; v < ref.points.size(); ++v) p.codes.push_back(code(rng));
    for (std::uint64_t seed : {1u, 2u}) {
      FlatMesh target = planar(rings + static_cast<int>(seed) * 3, 0.35, seed * 101);
      // Some points off the disk too.
      for (Vec2& q : target.points) q *= 1.1;
      const auto mapped = map_parcellation(ref, p, target);
      for (std::size_t v = 0; v < target.points.size(); ++v) {
        mismatched += mapped[v] != p.codes[static_cast<std::size_t>(oracle::brute_nearest(ref.points, target.points[v]))];
        ++compared;
      }
    }
    mismatched += map_parcellation(ref, p, ref) != p.codes;
  }

  // Lift onto the 3D source, whose vertex order is shuffled against the flat map.
  const Large& l = large();
  const FlatMesh& flat = l.result.flat;
  std::vector<int> codes(flat.points.size());
  std::uniform_int_distribution<int> code(0, 9);
  for (int& c : codes) c = code(rng);
  const TriMesh& src = l.fixture.mesh;
  std::vector<int> perm(static_cast<std::size_t>(src.vertex_count()));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> verts;
  std::vector<std::int64_t> prov;
  std::vector<int> inverse(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    verts.push_back(src.vertex(perm[k]));
    prov.push_back(src.provenance()[static_cast<std::size_t>(perm[k])]);
    inverse[static_cast<std::size_t>(perm[k])] = static_cast<int>(k);
  }
  std::vector<Face> faces;
  for (const Face& f : src.faces()) faces.push_back({inverse[static_cast<std::size_t>(f[0])], inverse[static_cast<std::size_t>(f[1])], inverse[static_cast<std::size_t>(f[2])]});
  const TriMesh shuffled(std::move(verts), std::move(faces), {}, {}, std::move(prov));
  const auto lifted = lift_to_3d(flat, codes, shuffled);
  bool lift_ok = lift_to_3d(flat, codes, src) == codes;
  for (std::size_t k = 0; k < perm.size(); ++k) lift_ok = lift_ok && lifted[k] == codes[static_cast<std::size_t>(perm[k])];
  return verdict(mismatched == 0 && lift_ok, std::to_string(compared) + " mapped vertices vs brute-force nearest, " +
                                                 std::to_string(mismatched) + " mismatches; lift round trip " +
                                                 (lift_ok ? "identity" : "broken"));
}

Outcome determinism() {
  const Large& l = large();
  const fs::path dir = scratch();
  save_mesh(l.fixture.mesh, dir / "atrium.vtk");
  write_json(to_json(l.fixture.seeds), dir / "seeds.json");
  std::vector<std::string> files;
  for (const char* run : {"run1", "run2"}) {
    std::ostringstream out, err;
    const int code = cli::run_cli({"flatten", "-i", (dir / "atrium.vtk").string(), "--seeds", (dir / "seeds.json").string(), "--textures",
                                   "-o", (dir / run).string()},
                                  out, err);
    if (code != 0) return verdict(false, "flatten exited with " + std::to_string(code) + ": " + err.str());
  }
  int compared = 0;
  bool same = true;
  for (const char* name : {"flat.vtk", "solve_report.json", "distortion_report.json", "distortion.csv"}) {
    const std::string a = slurp(dir / "run1" / name), b = slurp(dir / "run2" / name);
    same = same && !a.empty() && a == b;
    ++compared;
  }
  const PipelineResult again = flatten_pipeline(l.fixture.mesh, l.fixture.seeds, l.spec);
  bool points = again.flat.points.size() == l.result.flat.points.size();
  for (std::size_t v = 0; points && v < again.flat.points.size(); ++v) {
    points = std::memcmp(again.flat.points[v].data(), l.result.flat.points[v].data(), 2 * sizeof(double)) == 0;
  }
  return verdict(same && points, std::to_string(compared) + " artifacts byte-identical across two CLI runs: " + (same ? "yes" : "no") +
                                     "; in-memory points bit-identical: " + (points ? "yes" : "no"));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"runtime", runtime},
      {"hard-constraints", hard_constraints},
      {"boundary-exactness", boundary_exactness},
      {"identity-fixed-point", identity_fixed_point},
      {"dense-oracle", dense_oracle},
      {"laplacian-analytics", laplacian_analytics},
      {"distortion-oracle", distortion_oracle},
      {"subcontour-rule", subcontour_rule},
      {"template-ratios", template_ratios},
      {"no-information-loss", no_information_loss},
      {"transfer-oracles", transfer_oracles},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  fs::remove_all(scratch());
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
