#pragma once

#include <span>
#include <vector>

#include "frf/mesh.hpp"

namespace frf {

// Vertex adjacency in CSR form with Euclidean edge lengths. Neighbours are sorted.
class EdgeGraph {
 public:
  explicit EdgeGraph(const TriMesh& mesh);

  int vertex_count() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const int> neighbors(int v) const;
  std::span<const double> lengths(int v) const;

 private:
  std::vector<int> offsets_;
  std::vector<int> targets_;
  std::vector<double> lengths_;
};

struct ShortestPaths {
  std::vector<double> distance;  // +inf where unreachable
  std::vector<int> predecessor;  // -1 at sources and unreachable vertices
};

// Multi-source Dijkstra. Blocked vertices (nonzero entries) are never entered.
// Ties prefer the lowest predecessor index.
ShortestPaths dijkstra(const EdgeGraph& graph, std::span<const int> sources,
                       const std::vector<char>* blocked = nullptr);

// Shortest edge chain from a to b, both inclusive.
std::vector<int> geodesic_path(const EdgeGraph& graph, int a, int b, const std::vector<char>* blocked = nullptr);
std::vector<int> geodesic_path(const TriMesh& mesh, int a, int b);

double path_length(const TriMesh& mesh, std::span<const int> path);

}  // namespace frf
