#include <doctest.h>

#include <algorithm>
#include <set>

#include "frf/division.hpp"
#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/hole_filling.hpp"
#include "frf/pipeline.hpp"
#include "frf/template.hpp"
#include "frf/topology.hpp"

using namespace frf;

namespace {

const AtriumFixture& fixture() {
  static const AtriumFixture fx = sphere_with_holes(24, build_template("population"));
  return fx;
}

const DivisionStage& stage() {
  static const DivisionStage s = run_division(fixture().mesh, fixture().seeds);
  return s;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

bool bounds(int region, int path) {
  const auto& ids = kRegionPaths[static_cast<std::size_t>(region - 1)];
  return std::find(ids.begin(), ids.end(), path) != ids.end();
}

// For every edge of every path, the two faces on either side carry different regions,
// and both regions list the path among their borders.
void check_path_sides(const TriMesh& mesh, const DivisionResult& d) {
  const EdgeTopology topo(mesh);
  for (int id = 1; id <= kPathCount; ++id) {
    const auto& p = d.path(id);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const auto* e = topo.find(p[i], p[i + 1]);
      REQUIRE(e != nullptr);
      std::vector<int> regions;
      for (int s = 0; s < e->count; ++s) {
        const int f = e->side[s].face;
        if (mesh.cover_tags()[static_cast<std::size_t>(f)] < 0) regions.push_back(d.region[static_cast<std::size_t>(f)]);
      }
      if (regions.size() < 2) continue;
      CAPTURE(id);
      CHECK(regions[0] != regions[1]);
      CHECK(bounds(regions[0], id));
      CHECK(bounds(regions[1], id));
    }
  }
}

}  // namespace

TEST_CASE("fixture has six labelled rings and valid seeds") {
  const auto& s = stage();
  for (const auto& r : s.boundary.rings) CHECK(r.size() >= 6);
  CHECK((s.boundary.winding == 1 || s.boundary.winding == -1));
  for (Hole h : kClosedHoles) CHECK(contains(s.boundary.ring(h), fixture().seeds.holes.at(h)));
  for (int v : fixture().seeds.mv) CHECK(contains(s.boundary.ring(Hole::kMV), v));
  // MV1..MV4 appear in increasing ring position along the canonical direction.
  const auto& mv = s.boundary.ring(Hole::kMV);
  std::vector<long> pos;
  for (int v : fixture().seeds.mv) pos.push_back(std::find(mv.begin(), mv.end(), v) - mv.begin());
  const long first = pos[0];
  for (long& p : pos) p = (p - first + static_cast<long>(mv.size())) % static_cast<long>(mv.size());
  CHECK(std::is_sorted(pos.begin(), pos.end()));
}

TEST_CASE("closing adds covers to five holes and keeps the mitral ring open") {
  const auto& s = stage();
  const auto loops = boundary_loops(s.closed);
  REQUIRE(loops.size() == 1);
  std::set<int> a(loops[0].ring.begin(), loops[0].ring.end());
  std::set<int> b(s.boundary.ring(Hole::kMV).begin(), s.boundary.ring(Hole::kMV).end());
  CHECK(a == b);
  std::set<int> tags(s.closed.cover_tags().begin(), s.closed.cover_tags().end());
  CHECK(tags == std::set<int>{-1, 1, 2, 3, 4, 5});
}

TEST_CASE("five regions partition the original faces") {
  const auto& s = stage();
  const auto& region = s.initial.region;
  REQUIRE(region.size() == static_cast<std::size_t>(s.closed.face_count()));
  std::array<int, 6> count{};
  for (int f = 0; f < s.closed.face_count(); ++f) {
    const int r = region[static_cast<std::size_t>(f)];
    if (s.closed.cover_tags()[static_cast<std::size_t>(f)] >= 0) {
      CHECK(r == -1);
    } else {
      REQUIRE(r >= 1);
      REQUIRE(r <= 5);
      ++count[static_cast<std::size_t>(r)];
    }
  }
  int total = 0;
  for (int r = 1; r <= 5; ++r) {
    CHECK(count[static_cast<std::size_t>(r)] > 0);
    total += count[static_cast<std::size_t>(r)];
  }
  CHECK(total == fixture().mesh.face_count());
  check_path_sides(s.closed, s.initial);
}

TEST_CASE("paths run ring to ring without touching other rings") {
  for (const DivisionResult* d : {&stage().initial, &stage().opened.division}) {
    const auto owner = stage().boundary.owner(fixture().mesh.vertex_count());
    for (const PathEnds& pe : kPaths) {
      const auto& p = d->path(pe.id);
      REQUIRE(p.size() >= 2);
      CHECK(owner[static_cast<std::size_t>(p.front())] == static_cast<int>(pe.from));
      CHECK(owner[static_cast<std::size_t>(p.back())] == static_cast<int>(pe.to));
      for (std::size_t i = 1; i + 1 < p.size(); ++i) CHECK(owner[static_cast<std::size_t>(p[i])] == -1);
    }
    check_crossings(d->paths);
  }
  for (const PathEnds& pe : kPaths) {
    if (pe.to == Hole::kMV) CHECK(stage().initial.path(pe.id).back() == fixture().seeds.mv[static_cast<std::size_t>(pe.mv_seed)]);
  }
}

TEST_CASE("intersection point counts per hole") {
  const auto& d = stage().opened.division;
  for (Hole h : {Hole::kLIPV, Hole::kLSPV, Hole::kRIPV, Hole::kRSPV}) CHECK(d.intersections[static_cast<std::size_t>(h)].size() == 3);
  CHECK(d.intersections[static_cast<std::size_t>(Hole::kLAA)].size() == 2);
  const auto& mv = d.intersections[static_cast<std::size_t>(Hole::kMV)];
  CHECK(std::vector<int>(mv.begin(), mv.end()) == std::vector<int>(fixture().seeds.mv.begin(), fixture().seeds.mv.end()));
  // IP1 belongs to the lowest-numbered path at each vein or appendage hole.
  for (Hole h : kClosedHoles) {
    const auto& ids = d.intersection_paths[static_cast<std::size_t>(h)];
    CHECK(ids.front() == *std::min_element(ids.begin(), ids.end()));
  }
}

TEST_CASE("opened division: index sets, provenance and redistribution") {
  const auto& s = stage();
  const OpenedDivision& o = s.opened;
  std::size_t ring_total = 0;
  for (const auto& r : s.boundary.rings) ring_total += r.size();
  CHECK(o.boundary_indices.size() == ring_total);
  CHECK(o.mesh.faces() == fixture().mesh.faces());
  CHECK(o.mesh.provenance() == fixture().mesh.provenance());

  std::vector<int> both;
  std::set_intersection(o.boundary_indices.begin(), o.boundary_indices.end(), o.regional_indices.begin(),
                        o.regional_indices.end(), std::back_inserter(both));
  std::vector<int> ips;
  for (const auto& v : o.division.intersections) ips.insert(ips.end(), v.begin(), v.end());
  std::sort(ips.begin(), ips.end());
  CHECK(both == ips);

  // Splits after redistribution are exactly the rule applied to the projected splits.
  const OpenedDivision projected = project_and_open(s.closed, s.initial, s.boundary);
  REQUIRE(projected.splits.size() == o.splits.size());
  for (std::size_t i = 0; i < o.splits.size(); ++i) {
    CHECK(o.splits[i].hole == projected.splits[i].hole);
    CHECK(o.splits[i].split.positions == recompute_subcontours(projected.splits[i].split).positions);
    const auto& ring = s.boundary.ring(o.splits[i].hole);
    const auto& ipv = o.division.intersections[static_cast<std::size_t>(o.splits[i].hole)];
    for (std::size_t k = 0; k < ipv.size(); ++k) {
      CHECK(ring[static_cast<std::size_t>(o.splits[i].split.positions[k])] == ipv[k]);
    }
  }
  check_path_sides(o.mesh, o.division);
}

TEST_CASE("division is deterministic") {
  const DivisionStage again = run_division(fixture().mesh, fixture().seeds);
  CHECK(again.initial.paths == stage().initial.paths);
  CHECK(again.initial.region == stage().initial.region);
  CHECK(again.opened.division.paths == stage().opened.division.paths);
  CHECK(again.opened.division.region == stage().opened.division.region);
}

TEST_CASE("crossing paths are reported with the shared vertex") {
  std::array<std::vector<int>, kPathCount> paths;
  for (int i = 0; i < kPathCount; ++i) paths[static_cast<std::size_t>(i)] = {100 * i, 100 * i + 1, 100 * i + 2};
  CHECK_NOTHROW(check_crossings(paths));
  paths[6][1] = 301;
  try {
    check_crossings(paths);
    FAIL("crossing not detected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPathCrossing);
    REQUIRE(e.vertex().has_value());
    CHECK(*e.vertex() == 301);
    CHECK(std::string(e.what()).find("s4") != std::string::npos);
    CHECK(std::string(e.what()).find("s7") != std::string::npos);
  }
}

TEST_CASE("swapped mitral seeds are rejected") {
  SeedSet seeds = fixture().seeds;
  std::swap(seeds.mv[2], seeds.mv[3]);
  try {
    label_boundary(fixture().mesh, seeds);
    FAIL("accepted out-of-order mitral seeds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSeeds);
  }
}

TEST_CASE("seed on the wrong ring and repeated seeds are rejected") {
  SeedSet seeds = fixture().seeds;
  seeds.holes[Hole::kLIPV] = seeds.holes.at(Hole::kLSPV);
  CHECK_THROWS_AS(label_boundary(fixture().mesh, seeds), Error);
  seeds = fixture().seeds;
  seeds.holes.erase(Hole::kLAA);
  CHECK_THROWS_AS(label_boundary(fixture().mesh, seeds), Error);
}

TEST_CASE("a mesh with five loops is rejected") {
  // Close the LAA hole before labelling: one loop fewer.
  const auto loops = boundary_loops(fixture().mesh);
  const auto laa = fixture().seeds.holes.at(Hole::kLAA);
  TriMesh m = fixture().mesh;
  for (const auto& l : loops) {
    if (contains(l.ring, laa)) m = close_hole(m, l);
  }
  try {
    label_boundary(m, fixture().seeds);
    FAIL("five loops accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("expected 6 boundary loops") != std::string::npos);
  }
}

TEST_CASE("hole seeds snap to the ring vertex nearest the ring centroid") {
  const auto& ring = stage().boundary.ring(Hole::kRSPV);
  const TriMesh& m = fixture().mesh;
  Vec3 c = Vec3::Zero();
  for (int v : ring) c += m.vertex(v);
  c /= static_cast<double>(ring.size());
  const int s = snap_to_cover(m, ring);
  for (int v : ring) CHECK((m.vertex(s) - c).norm() <= (m.vertex(v) - c).norm());
}
