#pragma once

#include <cstdint>
#include <vector>

#include "frf/division.hpp"
#include "frf/mesh.hpp"
#include "frf/template.hpp"

namespace frf {

// Geodesic sphere: icosahedron with each face split into frequency^2 triangles,
// 20 * frequency^2 faces, outward winding.
TriMesh icosphere(int frequency, double radius = 1.0);

struct AtriumFixture {
  TriMesh mesh;  // sphere with the mitral cap and five vein/appendage holes cut out
  SeedSet seeds;
  std::array<Vec3, kHoleCount> directions;  // unit hole centres
};

inline constexpr double kMitralCapAngle = 1.8;

// Holes are the template circles pulled back through a stereographic chart, so they
// stay circular on the sphere; the mitral cap sits at the south pole.
AtriumFixture sphere_with_holes(int frequency, const TemplateSpec& spec, double radius = 25.0,
                                double mitral_cap = kMitralCapAngle);

// Concentric disk: a centre vertex and `rings` rings with 6k vertices on ring k.
// Interior vertices may be jittered in-plane (fraction of ring spacing) and lifted by
// a smooth bump of height `bump`.
TriMesh disk_mesh(int rings, double radius = 1.0, double jitter = 0.0, double bump = 0.0, std::uint64_t seed = 1);

// Rim vertices of disk_mesh in counter-clockwise order.
std::vector<int> disk_rim(int rings);

}  // namespace frf
