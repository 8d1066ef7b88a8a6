#include "frf/texture.hpp"

#include <cmath>
#include <limits>

#include "frf/error.hpp"
#include "frf/geodesic.hpp"

namespace frf {

namespace {
constexpr const char* kStage = "texture";
}

std::vector<double> texture_stripes(const TriMesh& mesh, int seed, double band_width) {
  if (!(band_width > 0.0)) throw Error(ErrorCode::kInvalidArgument, kStage, "band width must be positive");
  if (seed < 0 || seed >= mesh.vertex_count()) throw Error(ErrorCode::kInvalidArgument, kStage, "seed out of range", seed);
  const EdgeGraph graph(mesh);
  const int sources[] = {seed};
  const ShortestPaths sp = dijkstra(graph, sources);
  std::vector<double> out(sp.distance.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (!std::isfinite(sp.distance[v])) throw Error(ErrorCode::kTopology, kStage, "mesh is not connected", static_cast<int>(v));
    out[v] = static_cast<double>(static_cast<long long>(std::floor(sp.distance[v] / band_width)) % 2);
  }
  return out;
}

SpotTexture texture_spots(const TriMesh& mesh, int count, double radius) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, kStage, "spot count must be at least 1");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, kStage, "spot radius must be positive");
  const int n = mesh.vertex_count();
  if (count > n) throw Error(ErrorCode::kInvalidArgument, kStage, "more spots than vertices");
  const EdgeGraph graph(mesh);
  SpotTexture out;
  std::vector<std::vector<double>> dist;
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  int next = 0;
  out.min_center_distance = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    out.centers.push_back(next);
    const int sources[] = {next};
    dist.push_back(dijkstra(graph, sources).distance);
    const auto& d = dist.back();
    for (int c = 0; c < k; ++c) out.min_center_distance = std::min(out.min_center_distance, d[static_cast<std::size_t>(out.centers[static_cast<std::size_t>(c)])]);
    double far = -1.0;
    for (int v = 0; v < n; ++v) {
      nearest[static_cast<std::size_t>(v)] = std::min(nearest[static_cast<std::size_t>(v)], d[static_cast<std::size_t>(v)]);
      if (nearest[static_cast<std::size_t>(v)] > far) {
        far = nearest[static_cast<std::size_t>(v)];
        next = v;
      }
    }
  }
  out.values.assign(static_cast<std::size_t>(n), -1.0);
  for (int v = 0; v < n; ++v) {
    double best = radius;
    int id = -1;
    for (int k = 0; k < count; ++k) {
      const double d = dist[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)];
      if (d < best || (d == best && id < 0)) {
        best = d;
        id = k;
      }
    }
    out.values[static_cast<std::size_t>(v)] = id;
  }
  out.overlapping = count > 1 && out.min_center_distance < 2.0 * radius;
  return out;
}

}  // namespace frf
