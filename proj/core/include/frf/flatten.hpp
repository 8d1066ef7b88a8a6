#pragma once

#include <span>
#include <string>
#include <vector>

#include "frf/constraints.hpp"
#include "frf/laplacian.hpp"
#include "frf/mesh.hpp"

namespace frf {

// How w enters the objective || W (L' x - b') ||^2.
enum class WeightMode {
  kBoundaryRows,  // W = w on the identity rows, 1 elsewhere
  kUniform,       // W = w I
};

enum class KktBackend {
  kCondensed,  // eliminate the equality constraints, LDL^T on the reduced normal matrix
  kSparseLu,   // LU on the full saddle-point matrix
};

struct SolveOptions {
  double w = 1000.0;
  WeightMode weighting = WeightMode::kBoundaryRows;
  KktBackend backend = KktBackend::kCondensed;
};

struct ConstrainedSolution {
  std::vector<Vec2> points;
  double kkt_residual = 0.0;  // relative, worst of the two coordinates
  double constraint_error = 0.0;  // max |x_i - s_i| over regional constraints
};

// argmin || W (L' x - b') ||^2 subject to x_i = s_i on regional vertices, per coordinate.
// `lmod` must carry identity rows exactly at the boundary-target vertices.
ConstrainedSolution solve_constrained(const SparseLaplacian& lmod, const ConstraintSet& constraints,
                                      const SolveOptions& options = {});

struct RefinedSolution {
  std::vector<Vec2> points;
  double residual = 0.0;  // relative residual of the interior system
};

// Harmonic re-solve w.r.t. the cotangent Laplacian of the flattened mesh with only the
// boundary vertices fixed.
RefinedSolution refine_boundary(const std::vector<Vec2>& points, const std::vector<Face>& faces,
                                std::span<const Target> boundary);

double max_deviation(const std::vector<Vec2>& points, std::span<const Target> targets);
// Faces whose signed area is not of sign `expected_sign` (zero area counts as flipped).
int count_flipped(const std::vector<Vec2>& points, const std::vector<Face>& faces, int expected_sign);

// Flattened surface: connectivity, provenance and channels of the source mesh.
struct FlatMesh {
  std::vector<Vec2> points;
  std::vector<Face> faces;
  std::vector<std::int64_t> provenance;
  Channels channels;
  Channels face_channels;
  std::string template_hash;

  int vertex_count() const { return static_cast<int>(points.size()); }
  TriMesh to_trimesh() const;  // z = 0, area check off
  static FlatMesh from_trimesh(const TriMesh& mesh, std::string template_hash = {});
};

}  // namespace frf
