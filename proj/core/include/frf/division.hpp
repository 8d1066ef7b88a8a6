#pragma once

#include <array>
#include <map>
#include <vector>

#include "frf/anatomy.hpp"
#include "frf/mesh.hpp"
#include "frf/subcontour.hpp"

namespace frf {

// Five hole seeds (ring vertices of their hole, i.e. vertices of its cover) and the
// four mitral seeds MV1..MV4 in order along the mitral ring.
struct SeedSet {
  std::map<Hole, int> holes;
  std::array<int, 4> mv{};
};

// The six labelled rings of a clipped cavity, all turned to one canonical direction:
// the direction in which MV1 -> MV2 -> MV3 -> MV4 runs along the mitral ring.
struct LabeledBoundary {
  std::array<std::vector<int>, kHoleCount> rings;
  int winding = 1;  // +1 if the canonical direction follows the face winding, else -1

  const std::vector<int>& ring(Hole h) const { return rings[static_cast<std::size_t>(h)]; }
  // Hole owning each vertex (-1 for non-ring vertices).
  std::vector<int> owner(int vertex_count) const;
};

// Requires exactly six boundary loops and seeds consistent with them.
LabeledBoundary label_boundary(const TriMesh& clipped, const SeedSet& seeds);

// Closes the five vein/appendage holes; the mitral ring stays open.
TriMesh close_holes(const TriMesh& clipped, const LabeledBoundary& boundary);

// Ring vertex nearest the centroid of the ring (equivalently of the hole's cover).
int snap_to_cover(const TriMesh& mesh, const std::vector<int>& ring);

struct DivisionResult {
  // s1..s9 as ring-to-ring vertex chains oriented from kPaths[i].from to .to.
  std::array<std::vector<int>, kPathCount> paths;
  // Per face region R1..R5; -1 on cover faces.
  std::vector<int> region;
  // Per hole: IP1, IP2[, IP3]; for the mitral ring, MV1..MV4.
  std::array<std::vector<int>, kHoleCount> intersections;
  // Per hole: path id attached at each intersection point, same order.
  std::array<std::vector<int>, kHoleCount> intersection_paths;

  const std::vector<int>& path(int id) const { return paths[static_cast<std::size_t>(id - 1)]; }
};

// Geodesic paths s1..s9 on the closed mesh and flood-fill region labelling.
DivisionResult divide(const TriMesh& closed, const LabeledBoundary& boundary, const SeedSet& seeds);

struct HoleSplit {
  Hole hole;
  SubcontourSplit split;  // positions index boundary.ring(hole)
};

struct OpenedDivision {
  TriMesh mesh;  // covers removed; vertex indices unchanged
  DivisionResult division;
  std::vector<HoleSplit> splits;  // one per closed hole, kClosedHoles order
  std::vector<int> boundary_indices;  // every ring vertex, all six rings
  std::vector<int> regional_indices;  // every path vertex, intersection points included
};

OpenedDivision project_and_open(const TriMesh& closed, const DivisionResult& division,
                                const LabeledBoundary& boundary);

// Moves IP2/IP3 by the sub-contour rule, re-routes the paths whose end moved over the
// open mesh, and relabels the regions.
OpenedDivision redistribute(const OpenedDivision& opened, const LabeledBoundary& boundary);

// Per-face labels from path barriers over non-cover faces; exactly five components.
std::vector<int> label_regions(const TriMesh& mesh, const std::array<std::vector<int>, kPathCount>& paths);

// Throws kPathCrossing naming the first vertex that two paths share.
void check_crossings(const std::array<std::vector<int>, kPathCount>& paths);

}  // namespace frf
