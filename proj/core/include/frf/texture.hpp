#pragma once

#include <vector>

#include "frf/mesh.hpp"

namespace frf {

// floor(d / band_width) mod 2 with d the edge-graph distance to `seed`.
std::vector<double> texture_stripes(const TriMesh& mesh, int seed, double band_width);

struct SpotTexture {
  std::vector<double> values;  // spot id or -1
  std::vector<int> centers;    // farthest-point samples, starting at vertex 0
  double min_center_distance = 0.0;
  bool overlapping = false;    // some centers are closer than two radii
};

SpotTexture texture_spots(const TriMesh& mesh, int count, double radius);

}  // namespace frf
