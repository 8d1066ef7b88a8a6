#include "frf/division.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "frf/error.hpp"
#include "frf/geodesic.hpp"
#include "frf/hole_filling.hpp"
#include "frf/topology.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "division";

int position_in(const std::vector<int>& ring, int v) {
  auto it = std::find(ring.begin(), ring.end(), v);
  return it == ring.end() ? -1 : static_cast<int>(it - ring.begin());
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Offsets of `pos` relative to pos[0]; +1 if strictly increasing, -1 if strictly decreasing.
int cyclic_direction(const std::vector<int>& pos, int n) {
  bool up = true, down = true;
  for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
    const int a = wrap(pos[i] - pos[0], n);
    const int b = wrap(pos[i + 1] - pos[0], n);
    up = up && a < b;
    down = down && a > b;
  }
  if (pos.size() == 2) return 1;
  return up ? 1 : (down ? -1 : 0);
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Orders a hole's intersection points along its ring, IP1 = lowest path id.
void order_intersections(const std::vector<int>& ring, std::vector<int>& ips, std::vector<int>& path_ids) {
  std::vector<std::size_t> idx(ips.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const auto first = static_cast<std::size_t>(std::min_element(path_ids.begin(), path_ids.end()) - path_ids.begin());
  const int n = static_cast<int>(ring.size());
  const int p0 = position_in(ring, ips[first]);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return wrap(position_in(ring, ips[a]) - p0, n) < wrap(position_in(ring, ips[b]) - p0, n);
  });
  std::vector<int> ip2, id2;
  for (std::size_t i : idx) {
    ip2.push_back(ips[i]);
    id2.push_back(path_ids[i]);
  }
  ips = std::move(ip2);
  path_ids = std::move(id2);
}

void collect_intersections(DivisionResult& out) {
  for (auto& v : out.intersections) v.clear();
  for (auto& v : out.intersection_paths) v.clear();
  for (const PathEnds& pe : kPaths) {
    const auto& chain = out.paths[static_cast<std::size_t>(pe.id - 1)];
    out.intersections[static_cast<std::size_t>(pe.from)].push_back(chain.front());
    out.intersection_paths[static_cast<std::size_t>(pe.from)].push_back(pe.id);
    out.intersections[static_cast<std::size_t>(pe.to)].push_back(chain.back());
    out.intersection_paths[static_cast<std::size_t>(pe.to)].push_back(pe.id);
  }
}

}  // namespace

std::vector<int> LabeledBoundary::owner(int vertex_count) const {
  std::vector<int> out(static_cast<std::size_t>(vertex_count), -1);
  for (int h = 0; h < kHoleCount; ++h) {
    for (int v : rings[static_cast<std::size_t>(h)]) out[static_cast<std::size_t>(v)] = h;
  }
  return out;
}

LabeledBoundary label_boundary(const TriMesh& clipped, const SeedSet& seeds) {
  const auto loops = boundary_loops(clipped);
  if (loops.size() != kHoleCount) {
    throw Error(ErrorCode::kTopology, kStage,
                "expected 6 boundary loops, found " + std::to_string(loops.size()));
  }
  std::set<int> distinct(seeds.mv.begin(), seeds.mv.end());
  for (Hole h : kClosedHoles) {
    auto it = seeds.holes.find(h);
    if (it == seeds.holes.end()) {
      throw Error(ErrorCode::kInvalidSeeds, kStage, "missing seed for " + std::string(hole_name(h)));
    }
    distinct.insert(it->second);
  }
  if (distinct.size() != 9) throw Error(ErrorCode::kInvalidSeeds, kStage, "the 9 seeds must be distinct vertices");
  for (int v : distinct) {
    if (v < 0 || v >= clipped.vertex_count()) throw Error(ErrorCode::kInvalidSeeds, kStage, "seed vertex out of range", v);
  }

  LabeledBoundary out;
  std::vector<char> used(loops.size(), 0);
  auto loop_of = [&](int v) {
    for (std::size_t i = 0; i < loops.size(); ++i) {
      if (position_in(loops[i].ring, v) >= 0) return static_cast<int>(i);
    }
    return -1;
  };
  const int mv_loop = loop_of(seeds.mv[0]);
  for (int k = 0; k < 4; ++k) {
    if (mv_loop < 0 || loop_of(seeds.mv[static_cast<std::size_t>(k)]) != mv_loop) {
      throw Error(ErrorCode::kInvalidSeeds, kStage, "MV" + std::to_string(k + 1) + " is not on the mitral ring",
                  seeds.mv[static_cast<std::size_t>(k)]);
    }
  }
  used[static_cast<std::size_t>(mv_loop)] = 1;
  out.rings[static_cast<std::size_t>(Hole::kMV)] = loops[static_cast<std::size_t>(mv_loop)].ring;
  for (Hole h : kClosedHoles) {
    const int v = seeds.holes.at(h);
    const int l = loop_of(v);
    if (l < 0) throw Error(ErrorCode::kInvalidSeeds, kStage, std::string(hole_name(h)) + " seed is not on a hole ring", v);
    if (used[static_cast<std::size_t>(l)]) {
      throw Error(ErrorCode::kInvalidSeeds, kStage, std::string(hole_name(h)) + " seed shares a ring with another seed", v);
    }
    used[static_cast<std::size_t>(l)] = 1;
    out.rings[static_cast<std::size_t>(h)] = loops[static_cast<std::size_t>(l)].ring;
  }

  const auto& mv = out.ring(Hole::kMV);
  std::vector<int> pos;
  for (int s : seeds.mv) pos.push_back(position_in(mv, s));
  const int dir = cyclic_direction(pos, static_cast<int>(mv.size()));
  if (dir == 0) {
    throw Error(ErrorCode::kInvalidSeeds, kStage, "MV1..MV4 are not in cyclic order along the mitral ring", seeds.mv[2]);
  }
  out.winding = dir;
  if (dir < 0) {
    for (auto& r : out.rings) std::reverse(r.begin(), r.end());
  }
  return out;
}

TriMesh close_holes(const TriMesh& clipped, const LabeledBoundary& boundary) {
  TriMesh out = clipped;
  for (Hole h : kClosedHoles) {
    // triangulate_hole expects the face-winding direction.
    std::vector<int> ring = boundary.ring(h);
    if (boundary.winding < 0) std::reverse(ring.begin(), ring.end());
    out = out.with_cover(triangulate_hole(out, ring), static_cast<int>(h));
  }
  return out;
}

int snap_to_cover(const TriMesh& mesh, const std::vector<int>& ring) {
  if (ring.empty()) throw Error(ErrorCode::kInvalidArgument, kStage, "empty ring");
  Vec3 c = Vec3::Zero();
  for (int v : ring) c += mesh.vertex(v);
  c /= static_cast<double>(ring.size());
  int best = ring.front();
  double bd = (mesh.vertex(best) - c).squaredNorm();
  for (int v : ring) {
    const double d = (mesh.vertex(v) - c).squaredNorm();
    if (d < bd || (d == bd && v < best)) {
      bd = d;
      best = v;
    }
  }
  return best;
}

void check_crossings(const std::array<std::vector<int>, kPathCount>& paths) {
  std::map<int, int> seen;  // vertex -> path id
  for (int p = 0; p < kPathCount; ++p) {
    for (int v : paths[static_cast<std::size_t>(p)]) {
      auto [it, inserted] = seen.emplace(v, p + 1);
      if (!inserted) {
        throw Error(ErrorCode::kPathCrossing, kStage,
                    "paths s" + std::to_string(it->second) + " and s" + std::to_string(p + 1) +
                        " cross at vertex " + std::to_string(v),
                    v);
      }
    }
  }
}

std::vector<int> label_regions(const TriMesh& mesh, const std::array<std::vector<int>, kPathCount>& paths) {
  std::unordered_map<std::uint64_t, int> barrier;  // edge -> path id
  for (int p = 0; p < kPathCount; ++p) {
    const auto& chain = paths[static_cast<std::size_t>(p)];
    for (std::size_t i = 1; i < chain.size(); ++i) barrier[edge_key(chain[i - 1], chain[i])] = p + 1;
  }
  const EdgeTopology topo(mesh);
  const auto& covers = mesh.cover_tags();
  const int nf = mesh.face_count();
  std::vector<int> component(static_cast<std::size_t>(nf), -1);
  std::vector<std::set<int>> signature;
  for (int seed = 0; seed < nf; ++seed) {
    if (component[static_cast<std::size_t>(seed)] >= 0 || covers[static_cast<std::size_t>(seed)] >= 0) continue;
    const int id = static_cast<int>(signature.size());
    signature.emplace_back();
    std::queue<int> queue;
    component[static_cast<std::size_t>(seed)] = id;
    queue.push(seed);
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      const Face& t = mesh.face(f);
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        auto bit = barrier.find(edge_key(a, b));
        if (bit != barrier.end()) {
          signature.back().insert(bit->second);
          continue;
        }
        const auto* e = topo.find(a, b);
        if (e->count != 2) continue;
        const int g = e->side[0].face == f ? e->side[1].face : e->side[0].face;
        if (covers[static_cast<std::size_t>(g)] >= 0 || component[static_cast<std::size_t>(g)] >= 0) continue;
        component[static_cast<std::size_t>(g)] = id;
        queue.push(g);
      }
    }
  }
  if (signature.size() != kRegionCount) {
    throw Error(ErrorCode::kDivision, kStage,
                "paths split the surface into " + std::to_string(signature.size()) + " regions, expected 5");
  }
  std::vector<int> region_of(signature.size(), -1);
  std::vector<char> taken(kRegionCount, 0);
  for (std::size_t c = 0; c < signature.size(); ++c) {
    for (int r = 0; r < kRegionCount; ++r) {
      std::set<int> want;
      for (int p : kRegionPaths[static_cast<std::size_t>(r)]) {
        if (p != 0) want.insert(p);
      }
      if (want == signature[c] && !taken[static_cast<std::size_t>(r)]) {
        region_of[c] = r + 1;
        taken[static_cast<std::size_t>(r)] = 1;
        break;
      }
    }
    if (region_of[c] < 0) {
      std::string sig;
      for (int p : signature[c]) sig += " s" + std::to_string(p);
      throw Error(ErrorCode::kDivision, kStage, "region bounded by" + sig + " matches no anatomical region");
    }
  }
  std::vector<int> out(static_cast<std::size_t>(nf), -1);
  for (int f = 0; f < nf; ++f) {
    const int c = component[static_cast<std::size_t>(f)];
    if (c >= 0) out[static_cast<std::size_t>(f)] = region_of[static_cast<std::size_t>(c)];
  }
  return out;
}

DivisionResult divide(const TriMesh& closed, const LabeledBoundary& boundary, const SeedSet& seeds) {
  const int n = closed.vertex_count();
  const std::vector<int> owner = boundary.owner(n);
  const EdgeGraph graph(closed);
  DivisionResult out;

  for (const PathEnds& pe : kPaths) {
    const int from = static_cast<int>(pe.from);
    const int to = static_cast<int>(pe.to);
    const int a = seeds.holes.at(pe.from);
    const int b = pe.to == Hole::kMV ? seeds.mv[static_cast<std::size_t>(pe.mv_seed)] : seeds.holes.at(pe.to);
    std::vector<char> blocked(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      const int o = owner[static_cast<std::size_t>(v)];
      if (o < 0 || o == from || (o == to && pe.to != Hole::kMV)) continue;
      blocked[static_cast<std::size_t>(v)] = 1;
    }
    blocked[static_cast<std::size_t>(b)] = 0;
    const std::vector<int> raw = geodesic_path(graph, a, b, &blocked);

    // Keep the stretch between the hole rings: from the last vertex on the start ring
    // to the first vertex of the end ring after it.
    std::size_t start = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (owner[static_cast<std::size_t>(raw[i])] == from) start = i;
    }
    std::size_t stop = raw.size();
    for (std::size_t i = start + 1; i < raw.size(); ++i) {
      if (owner[static_cast<std::size_t>(raw[i])] == to) {
        stop = i;
        break;
      }
    }
    if (stop == raw.size()) {
      throw Error(ErrorCode::kDivision, kStage, "path s" + std::to_string(pe.id) + " never reaches its end ring", b);
    }
    out.paths[static_cast<std::size_t>(pe.id - 1)].assign(raw.begin() + static_cast<std::ptrdiff_t>(start),
                                                          raw.begin() + static_cast<std::ptrdiff_t>(stop) + 1);
  }
  check_crossings(out.paths);
  out.region = label_regions(closed, out.paths);
  collect_intersections(out);
  for (int h = 0; h < kHoleCount; ++h) {
    auto& ips = out.intersections[static_cast<std::size_t>(h)];
    auto& ids = out.intersection_paths[static_cast<std::size_t>(h)];
    if (static_cast<Hole>(h) == Hole::kMV) {
      // MV1..MV4 are ordered by seed index, which the path table encodes.
      std::vector<std::size_t> idx(ips.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return path_ends(ids[x]).mv_seed < path_ends(ids[y]).mv_seed;
      });
      std::vector<int> a, b;
      for (std::size_t i : idx) {
        a.push_back(ips[i]);
        b.push_back(ids[i]);
      }
      ips = a;
      ids = b;
    } else {
      order_intersections(boundary.rings[static_cast<std::size_t>(h)], ips, ids);
    }
  }
  return out;
}

OpenedDivision project_and_open(const TriMesh& closed, const DivisionResult& division, const LabeledBoundary& boundary) {
  OpenedDivision out{closed.without_covers(), division, {}, {}, {}};
  std::vector<int> region;
  for (int f = 0; f < closed.face_count(); ++f) {
    if (closed.cover_tags()[static_cast<std::size_t>(f)] < 0) region.push_back(division.region[static_cast<std::size_t>(f)]);
  }
  out.division.region = std::move(region);

  for (Hole h : kClosedHoles) {
    const auto& ring = boundary.ring(h);
    HoleSplit hs{h, {static_cast<int>(ring.size()), {}}};
    for (int v : division.intersections[static_cast<std::size_t>(h)]) {
      const int p = position_in(ring, v);
      if (p < 0) throw Error(ErrorCode::kDivision, kStage, "intersection point is off the ring", v);
      hs.split.positions.push_back(p);
    }
    out.splits.push_back(hs);
  }
  for (const auto& r : boundary.rings) out.boundary_indices.insert(out.boundary_indices.end(), r.begin(), r.end());
  std::sort(out.boundary_indices.begin(), out.boundary_indices.end());
  for (const auto& p : out.division.paths) out.regional_indices.insert(out.regional_indices.end(), p.begin(), p.end());
  std::sort(out.regional_indices.begin(), out.regional_indices.end());
  out.regional_indices.erase(std::unique(out.regional_indices.begin(), out.regional_indices.end()), out.regional_indices.end());
  return out;
}

OpenedDivision redistribute(const OpenedDivision& opened, const LabeledBoundary& boundary) {
  OpenedDivision out = opened;
  std::map<std::pair<int, int>, int> moved;  // (hole, path id) -> new intersection vertex
  for (auto& hs : out.splits) {
    const SubcontourSplit next = recompute_subcontours(hs.split);
    const auto& ring = boundary.ring(hs.hole);
    const auto h = static_cast<std::size_t>(hs.hole);
    for (std::size_t i = 0; i < next.positions.size(); ++i) {
      if (next.positions[i] == hs.split.positions[i]) continue;
      const int v = ring[static_cast<std::size_t>(next.positions[i])];
      moved[{static_cast<int>(hs.hole), out.division.intersection_paths[h][i]}] = v;
      out.division.intersections[h][i] = v;
    }
    hs.split = next;
  }
  if (!moved.empty()) {
    const int n = out.mesh.vertex_count();
    const EdgeGraph graph(out.mesh);
    std::vector<char> on_ring(static_cast<std::size_t>(n), 0);
    for (int v : out.boundary_indices) on_ring[static_cast<std::size_t>(v)] = 1;
    for (const PathEnds& pe : kPaths) {
      auto& chain = out.division.paths[static_cast<std::size_t>(pe.id - 1)];
      auto a_it = moved.find({static_cast<int>(pe.from), pe.id});
      auto b_it = moved.find({static_cast<int>(pe.to), pe.id});
      if (a_it == moved.end() && b_it == moved.end()) continue;
      const int a = a_it != moved.end() ? a_it->second : chain.front();
      const int b = b_it != moved.end() ? b_it->second : chain.back();
      std::vector<char> blocked = on_ring;
      for (const auto& other : out.division.paths) {
        if (&other == &chain) continue;
        for (int v : other) blocked[static_cast<std::size_t>(v)] = 1;
      }
      blocked[static_cast<std::size_t>(a)] = 0;
      blocked[static_cast<std::size_t>(b)] = 0;
      chain = geodesic_path(graph, a, b, &blocked);
    }
    check_crossings(out.division.paths);
    out.division.region = label_regions(out.mesh, out.division.paths);
  }
  out.regional_indices.clear();
  for (const auto& p : out.division.paths) out.regional_indices.insert(out.regional_indices.end(), p.begin(), p.end());
  std::sort(out.regional_indices.begin(), out.regional_indices.end());
  out.regional_indices.erase(std::unique(out.regional_indices.begin(), out.regional_indices.end()), out.regional_indices.end());
  return out;
}

}  // namespace frf
