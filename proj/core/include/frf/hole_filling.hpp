#pragma once

#include <vector>

#include "frf/mesh.hpp"
#include "frf/topology.hpp"

namespace frf {

struct CoverWeight {
  double max_dihedral = 0.0;  // radians, over cover-cover and cover-body edges
  double area = 0.0;
  double diagonal_length = 0.0;  // total length of the added interior edges
};

// Minimal-weight triangulation of a boundary polygon without new vertices.
// `ring` must follow the winding of the faces adjacent to it (as boundary_loops
// returns it); cover faces are wound to match. The weight is lexicographic: the
// largest dihedral angle is minimised first, then area, then the diagonal length.
// Rings longer than `exact_limit` use the O(n^3) Liepa recursion, which keeps only
// the best apex per sub-polygon.
std::vector<Face> triangulate_hole(const TriMesh& mesh, const std::vector<int>& ring,
                                   int exact_limit = 160);

// Weight of an explicit cover, evaluated the same way the optimiser does.
CoverWeight cover_weight(const TriMesh& mesh, const std::vector<Face>& cover);

// Appends the cover of `loop` tagged with the loop label (or hole code 0 if unlabeled).
TriMesh close_hole(const TriMesh& mesh, const BoundaryLoop& loop);

}  // namespace frf
