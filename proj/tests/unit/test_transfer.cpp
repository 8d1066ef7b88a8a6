#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/transfer.hpp"
#include "oracles.hpp"

using namespace frf;

namespace {

using oracle::brute_nearest;

FlatMesh planar(int rings, double jitter, std::uint64_t seed, const std::string& hash) {
  const TriMesh m = disk_mesh(rings, 1.0, jitter, 0.0, seed);
  FlatMesh f;
  for (int v = 0; v < m.vertex_count(); ++v) f.points.emplace_back(m.vertex(v).x(), m.vertex(v).y());
  f.faces = m.faces();
  f.provenance = m.provenance();
  f.template_hash = hash;
  return f;
}

}  // namespace

TEST_CASE("grid index agrees with brute force") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 7, 300, 2000}) {
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), 0.3 * u(rng));
    const GridIndex idx(pts);
    for (int k = 0; k < 500; ++k) {
      const Vec2 q(1.5 * u(rng), 1.5 * u(rng));
      CHECK(idx.nearest(q) == brute_nearest(pts, q));
    }
  }
  // Duplicates resolve to the lowest index.
  const std::vector<Vec2> dup{{0, 0}, {1, 1}, {1, 1}};
  CHECK(GridIndex(dup).nearest(Vec2(0.9, 0.9)) == 1);
}

TEST_CASE("annulus parcellation, mapping and lifting") {
  const TemplateSpec spec = build_template("population");
  const std::string hash = template_hash(spec);
  FlatMesh ref = planar(30, 0.2, 1, hash);
  const Parcellation2D p = annulus_parcellation(ref, spec, AnnulusPreset::kPerVein);
  int coded = 0;
  for (std::size_t v = 0; v < ref.points.size(); ++v) {
    if (p.codes[v] == 0) continue;
    ++coded;
    const Hole h = std::array<Hole, 4>{Hole::kLIPV, Hole::kLSPV, Hole::kRIPV, Hole::kRSPV}[static_cast<std::size_t>(p.codes[v] - 1)];
    const double d = (ref.points[v] - spec.hole(h).center).norm() - spec.hole(h).radius;
    CHECK(d >= -1e-12);
    CHECK(d <= 1.5 * spec.hole(h).radius);
  }
  CHECK(coded > 0);
  const Parcellation2D ip = annulus_parcellation(ref, spec, AnnulusPreset::kIpsilateral);
  for (std::size_t v = 0; v < ref.points.size(); ++v) CHECK(ip.codes[v] == (p.codes[v] == 0 ? 0 : (p.codes[v] <= 2 ? 1 : 2)));

  const Parcellation2D back = parcellation_from_json(to_json(p));
  CHECK(back.codes == p.codes);
  CHECK(back.legend == p.legend);

  // Mapping onto the reference itself is the identity; lifting follows provenance.
  CHECK(map_parcellation(ref, p, ref) == p.codes);
  const FlatMesh target = planar(20, 0.3, 9, hash);
  const auto mapped = map_parcellation(ref, p, target);
  const GridIndex idx(ref.points);
  for (std::size_t v = 0; v < target.points.size(); ++v) CHECK(mapped[v] == p.codes[static_cast<std::size_t>(brute_nearest(ref.points, target.points[v]))]);
  const TriMesh source = disk_mesh(20, 1.0, 0.3, 0.5, 9);
  CHECK(lift_to_3d(target, mapped, source) == mapped);

  FlatMesh other = target;
  other.template_hash = "ffffffffffffffff";
  try {
    map_parcellation(ref, p, other);
    FAIL("mismatched templates accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMismatch);
  }
}

TEST_CASE("compare maps interpolates inside triangles") {
  FlatMesh a = planar(6, 0.25, 3, "h");
  FlatMesh b = planar(9, 0.2, 4, "h");
  // A linear field is reproduced exactly by barycentric interpolation.
  auto field = [](const Vec2& p) { return 2.0 * p.x() - 0.5 * p.y() + 1.0; };
  std::vector<double> fa, fb;
  for (const Vec2& p : a.points) fa.push_back(field(p) + 10.0);
  for (const Vec2& p : b.points) fb.push_back(field(p));
  a.channels["lat"] = fa;
  b.channels["voltage"] = fb;
  const auto pairs = compare_maps(a, "lat", b, "voltage");
  REQUIRE(pairs.size() == a.points.size());
  for (const auto& s : pairs) {
    CHECK(s.a == fa[static_cast<std::size_t>(s.vertex)]);
    if (a.points[static_cast<std::size_t>(s.vertex)].norm() < 0.95) CHECK(std::abs(s.b - field(a.points[static_cast<std::size_t>(s.vertex)])) <= 1e-9);
  }
  CHECK_THROWS_AS(compare_maps(a, "missing", b, "voltage"), Error);
  const auto path = std::filesystem::temp_directory_path() / "frf_pairs.csv";
  write_pairs_csv(pairs, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "vertexId,valueA,valueB");
  std::filesystem::remove(path);
}
