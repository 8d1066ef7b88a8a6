#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/topology.hpp"

using namespace frf;

namespace {

// Open tube of `around` x `along` quads, each split into two triangles.
TriMesh cylinder(int around, int along) {
  std::vector<Vec3> v;
  for (int k = 0; k <= along; ++k) {
    for (int j = 0; j < around; ++j) {
      const double a = 2.0 * std::numbers::pi * j / around;
      v.emplace_back(std::cos(a), std::sin(a), static_cast<double>(k));
    }
  }
  std::vector<Face> f;
  for (int k = 0; k < along; ++k) {
    for (int j = 0; j < around; ++j) {
      const int a = k * around + j, b = k * around + (j + 1) % around;
      const int c = a + around, d = b + around;
      f.push_back({a, b, d});
      f.push_back({a, d, c});
    }
  }
  return TriMesh(v, f);
}

// Every consecutive pair of a loop must be a half-edge of some face.
bool follows_winding(const TriMesh& m, const std::vector<int>& ring) {
  const EdgeTopology topo(m);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (topo.face_with_halfedge(ring[i], ring[(i + 1) % ring.size()]) < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("closed sphere has no boundary") {
  CHECK(boundary_loops(icosphere(3)).empty());
  CHECK(is_consistently_oriented(icosphere(3)));
}

TEST_CASE("icosphere face count and outward winding") {
  const TriMesh s = icosphere(4, 2.0);
  CHECK(s.face_count() == 20 * 16);
  for (int f = 0; f < s.face_count(); ++f) {
    const Face& t = s.face(f);
    const Vec3 c = (s.vertex(t[0]) + s.vertex(t[1]) + s.vertex(t[2])) / 3.0;
    CHECK(s.face_normal(f).dot(c) > 0.0);
  }
}

TEST_CASE("flat disk has one loop through every rim vertex") {
  const TriMesh d = disk_mesh(4);
  const auto loops = boundary_loops(d);
  REQUIRE(loops.size() == 1);
  std::vector<int> ring = loops[0].ring;
  std::vector<int> rim = disk_rim(4);
  CHECK(ring.size() == rim.size());
  CHECK(follows_winding(d, ring));
  CHECK(ring.front() == *std::min_element(ring.begin(), ring.end()));
  std::sort(ring.begin(), ring.end());
  std::sort(rim.begin(), rim.end());
  CHECK(ring == rim);
}

TEST_CASE("open tube has two loops") {
  const TriMesh c = cylinder(8, 3);
  const auto loops = boundary_loops(c);
  REQUIRE(loops.size() == 2);
  CHECK(loops[0].ring.size() == 8);
  CHECK(loops[1].ring.size() == 8);
  CHECK(loops[0].ring.front() < loops[1].ring.front());
  CHECK(follows_winding(c, loops[0].ring));
  CHECK(follows_winding(c, loops[1].ring));
}

TEST_CASE("edge topology finds shared and boundary edges") {
  const TriMesh d = disk_mesh(1);
  const EdgeTopology topo(d);
  CHECK(topo.edges().size() == 12);
  CHECK(topo.is_boundary(1, 2));
  CHECK_FALSE(topo.is_boundary(0, 1));
  CHECK(topo.find(0, 3) != nullptr);
  CHECK(topo.find(1, 4) == nullptr);
  CHECK(topo.face_with_halfedge(0, 1) == 0);
  CHECK(topo.face_with_halfedge(1, 0) == 5);
}

TEST_CASE("orientation repair flips the minority") {
  const TriMesh d = disk_mesh(3);
  const std::vector<int> bad{2, 7};
  const TriMesh broken = d.with_faces_flipped(bad);
  CHECK_FALSE(is_consistently_oriented(broken));
  const OrientationRepair fixed = orient_consistently(broken);
  CHECK(fixed.flipped_faces == 2);
  CHECK(fixed.mesh.faces() == d.faces());
  CHECK(orient_consistently(d).flipped_faces == 0);
}

TEST_CASE("face neighbours are symmetric") {
  const TriMesh s = icosphere(2);
  const auto nb = face_neighbors(s);
  for (int f = 0; f < s.face_count(); ++f) {
    for (int g : nb[static_cast<std::size_t>(f)]) {
      REQUIRE(g >= 0);
      const auto& back = nb[static_cast<std::size_t>(g)];
      CHECK(std::find(back.begin(), back.end(), f) != back.end());
    }
  }
}
