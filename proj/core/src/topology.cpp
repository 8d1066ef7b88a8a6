#include "frf/topology.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "frf/error.hpp"

namespace frf {

namespace {
constexpr const char* kStage = "topology";
}

std::uint64_t EdgeTopology::key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

EdgeTopology::EdgeTopology(const TriMesh& mesh) : mesh_(&mesh) {
  edges_.reserve(static_cast<std::size_t>(mesh.face_count()) * 3 / 2 + 16);
  index_.reserve(edges_.capacity());
  std::vector<std::pair<int, int>> bad;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& t = mesh.face(f);
    for (int k = 0; k < 3; ++k) {
      const int u = t[k];
      const int v = t[(k + 1) % 3];
      auto [it, inserted] = index_.try_emplace(key(u, v), static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.a = std::min(u, v);
        e.b = std::max(u, v);
        edges_.push_back(e);
      }
      Edge& e = edges_[static_cast<std::size_t>(it->second)];
      if (e.count == 2) {
        bad.emplace_back(e.a, e.b);
        continue;
      }
      e.side[e.count] = Incidence{f, u < v};
      ++e.count;
    }
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    std::ostringstream msg;
    msg << "non-manifold edges:";
    for (const auto& [a, b] : bad) msg << " (" << a << "," << b << ")";
    throw Error(ErrorCode::kNonManifold, kStage, msg.str());
  }
}

const EdgeTopology::Edge* EdgeTopology::find(int a, int b) const {
  auto it = index_.find(key(a, b));
  return it == index_.end() ? nullptr : &edges_[static_cast<std::size_t>(it->second)];
}

bool EdgeTopology::is_boundary(int a, int b) const {
  const Edge* e = find(a, b);
  return e != nullptr && e->count == 1;
}

int EdgeTopology::face_with_halfedge(int a, int b) const {
  const Edge* e = find(a, b);
  if (e == nullptr) return -1;
  const bool forward = a < b;
  for (int s = 0; s < e->count; ++s) {
    if (e->side[s].forward == forward) return e->side[s].face;
  }
  return -1;
}

std::vector<BoundaryLoop> boundary_loops(const TriMesh& mesh) {
  const EdgeTopology topo(mesh);
  // Outgoing boundary halfedge per vertex, following the winding of the single face.
  std::map<int, int> next;
  for (const auto& e : topo.edges()) {
    if (e.count != 1) continue;
    const int from = e.side[0].forward ? e.a : e.b;
    const int to = e.side[0].forward ? e.b : e.a;
    auto [it, inserted] = next.emplace(from, to);
    if (!inserted) {
      throw Error(ErrorCode::kNonManifold, kStage,
                  "non-manifold boundary vertex " + std::to_string(from), from);
    }
  }
  std::vector<BoundaryLoop> loops;
  std::map<int, bool> visited;
  for (const auto& [start, unused] : next) {
    if (visited[start]) continue;
    BoundaryLoop loop;
    int v = start;
    while (!visited[v]) {
      visited[v] = true;
      loop.ring.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) {
        throw Error(ErrorCode::kTopology, kStage, "open boundary chain at vertex " + std::to_string(v), v);
      }
      v = it->second;
    }
    if (v != start) {
      throw Error(ErrorCode::kNonManifold, kStage,
                  "non-manifold boundary vertex " + std::to_string(v), v);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

bool is_consistently_oriented(const TriMesh& mesh) {
  const EdgeTopology topo(mesh);
  for (const auto& e : topo.edges()) {
    if (e.count == 2 && e.side[0].forward == e.side[1].forward) return false;
  }
  return true;
}

std::vector<std::array<int, 3>> face_neighbors(const TriMesh& mesh) {
  const EdgeTopology topo(mesh);
  std::vector<std::array<int, 3>> out(static_cast<std::size_t>(mesh.face_count()), {-1, -1, -1});
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& t = mesh.face(f);
    for (int k = 0; k < 3; ++k) {
      const auto* e = topo.find(t[k], t[(k + 1) % 3]);
      if (e->count != 2) continue;
      out[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)] =
          e->side[0].face == f ? e->side[1].face : e->side[0].face;
    }
  }
  return out;
}

OrientationRepair orient_consistently(const TriMesh& mesh) {
  const EdgeTopology topo(mesh);
  const int nf = mesh.face_count();
  // Per-face adjacency with a flag telling whether the two faces agree in winding.
  std::vector<std::vector<std::pair<int, bool>>> adj(static_cast<std::size_t>(nf));
  for (const auto& e : topo.edges()) {
    if (e.count != 2) continue;
    const bool agree = e.side[0].forward != e.side[1].forward;
    adj[static_cast<std::size_t>(e.side[0].face)].emplace_back(e.side[1].face, agree);
    adj[static_cast<std::size_t>(e.side[1].face)].emplace_back(e.side[0].face, agree);
  }
  std::vector<int> flip(static_cast<std::size_t>(nf), -1);
  std::vector<int> to_flip;
  for (int seed = 0; seed < nf; ++seed) {
    if (flip[static_cast<std::size_t>(seed)] != -1) continue;
    std::vector<int> component;
    std::queue<int> queue;
    flip[static_cast<std::size_t>(seed)] = 0;
    queue.push(seed);
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      component.push_back(f);
      for (const auto& [g, agree] : adj[static_cast<std::size_t>(f)]) {
        const int want = agree ? flip[static_cast<std::size_t>(f)] : 1 - flip[static_cast<std::size_t>(f)];
        if (flip[static_cast<std::size_t>(g)] == -1) {
          flip[static_cast<std::size_t>(g)] = want;
          queue.push(g);
        } else if (flip[static_cast<std::size_t>(g)] != want) {
          throw Error(ErrorCode::kTopology, kStage, "surface is not orientable (face " + std::to_string(g) + ")");
        }
      }
    }
    const auto flipped = std::count_if(component.begin(), component.end(),
                                       [&](int f) { return flip[static_cast<std::size_t>(f)] == 1; });
    const bool invert = 2 * flipped > static_cast<long>(component.size());
    for (int f : component) {
      if ((flip[static_cast<std::size_t>(f)] == 1) != invert) to_flip.push_back(f);
    }
  }
  std::sort(to_flip.begin(), to_flip.end());
  return {mesh.with_faces_flipped(to_flip), static_cast<int>(to_flip.size())};
}

}  // namespace frf
