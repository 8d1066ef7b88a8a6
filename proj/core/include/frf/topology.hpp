#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frf/anatomy.hpp"
#include "frf/mesh.hpp"

namespace frf {

struct BoundaryLoop {
  std::optional<Hole> label;
  std::vector<int> ring;  // ordered; consecutive entries joined by a boundary edge
};

// Undirected edge -> incident faces, with the winding direction each face uses.
class EdgeTopology {
 public:
  struct Incidence {
    int face = -1;
    bool forward = false;  // face traverses the edge from lower to higher vertex index
  };
  struct Edge {
    int a = -1;  // lower vertex index
    int b = -1;
    Incidence side[2];
    int count = 0;
  };

  // Throws ErrorCode::kNonManifold listing every edge with more than two faces.
  explicit EdgeTopology(const TriMesh& mesh);

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge* find(int a, int b) const;
  bool is_boundary(int a, int b) const;
  // Face that contains the directed edge a->b, or -1.
  int face_with_halfedge(int a, int b) const;

 private:
  static std::uint64_t key(int a, int b);

  const TriMesh* mesh_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> index_;
};

// All boundary loops, each following the winding of its adjacent faces and starting
// at its smallest vertex index. Loops are returned sorted by that first vertex.
std::vector<BoundaryLoop> boundary_loops(const TriMesh& mesh);

bool is_consistently_oriented(const TriMesh& mesh);

struct OrientationRepair {
  TriMesh mesh;
  int flipped_faces = 0;
};

// Makes winding consistent inside each connected component, flipping the minority.
OrientationRepair orient_consistently(const TriMesh& mesh);

// Faces adjacent across every non-boundary edge (up to 3 per face, -1 padded).
std::vector<std::array<int, 3>> face_neighbors(const TriMesh& mesh);

}  // namespace frf
