#include "frf/geodesic.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "frf/error.hpp"

namespace frf {

namespace {
constexpr const char* kStage = "geodesic";
}

EdgeGraph::EdgeGraph(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Face& f : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      adj[static_cast<std::size_t>(f[k])].push_back(f[(k + 1) % 3]);
      adj[static_cast<std::size_t>(f[(k + 1) % 3])].push_back(f[k]);
    }
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) {
    auto& list = adj[static_cast<std::size_t>(v)];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    offsets_[static_cast<std::size_t>(v) + 1] = offsets_[static_cast<std::size_t>(v)] + static_cast<int>(list.size());
  }
  targets_.reserve(static_cast<std::size_t>(offsets_.back()));
  lengths_.reserve(static_cast<std::size_t>(offsets_.back()));
  for (int v = 0; v < n; ++v) {
    for (int u : adj[static_cast<std::size_t>(v)]) {
      targets_.push_back(u);
      lengths_.push_back((mesh.vertex(u) - mesh.vertex(v)).norm());
    }
  }
}

std::span<const int> EdgeGraph::neighbors(int v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return {targets_.data() + b, e - b};
}

std::span<const double> EdgeGraph::lengths(int v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return {lengths_.data() + b, e - b};
}

ShortestPaths dijkstra(const EdgeGraph& graph, std::span<const int> sources, const std::vector<char>* blocked) {
  const int n = graph.vertex_count();
  ShortestPaths out;
  out.distance.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  out.predecessor.assign(static_cast<std::size_t>(n), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (int s : sources) {
    if (s < 0 || s >= n) throw Error(ErrorCode::kInvalidArgument, kStage, "source vertex out of range", s);
    out.distance[static_cast<std::size_t>(s)] = 0.0;
    heap.emplace(0.0, s);
  }
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    const auto nb = graph.neighbors(u);
    const auto len = graph.lengths(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const int v = nb[k];
      if (blocked != nullptr && (*blocked)[static_cast<std::size_t>(v)]) continue;
      const double nd = d + len[k];
      double& dv = out.distance[static_cast<std::size_t>(v)];
      int& pv = out.predecessor[static_cast<std::size_t>(v)];
      if (nd < dv) {
        dv = nd;
        pv = u;
        heap.emplace(nd, v);
      } else if (nd == dv && pv >= 0 && u < pv) {
        pv = u;
      }
    }
  }
  return out;
}

std::vector<int> geodesic_path(const EdgeGraph& graph, int a, int b, const std::vector<char>* blocked) {
  const int n = graph.vertex_count();
  if (a < 0 || a >= n || b < 0 || b >= n) throw Error(ErrorCode::kInvalidArgument, kStage, "vertex out of range");
  if (a == b) throw Error(ErrorCode::kInvalidArgument, kStage, "path endpoints coincide", a);
  const int sources[] = {a};
  const ShortestPaths sp = dijkstra(graph, sources, blocked);
  if (sp.predecessor[static_cast<std::size_t>(b)] < 0) {
    throw Error(ErrorCode::kTopology, kStage,
                "vertices " + std::to_string(a) + " and " + std::to_string(b) + " are disconnected", b);
  }
  std::vector<int> path{b};
  for (int v = b; v != a;) {
    v = sp.predecessor[static_cast<std::size_t>(v)];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> geodesic_path(const TriMesh& mesh, int a, int b) {
  return geodesic_path(EdgeGraph(mesh), a, b);
}

double path_length(const TriMesh& mesh, std::span<const int> path) {
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) sum += (mesh.vertex(path[i]) - mesh.vertex(path[i - 1])).norm();
  return sum;
}

}  // namespace frf
