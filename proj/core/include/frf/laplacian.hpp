#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "frf/mesh.hpp"

namespace frf {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kCotClamp = 1e6;

struct SparseLaplacian {
  SparseMatrix matrix;
  std::vector<char> identity_rows;  // 1 where the row was replaced by an identity row
};

// Cotangent of the angle at `apex` in triangle (apex, b, c), clamped to +-kCotClamp.
double clamped_cot(const Vec3& apex, const Vec3& b, const Vec3& c);

// w_ij = (cot a_ij + cot b_ij) / 2 off the diagonal, diagonal = -sum of the row.
SparseLaplacian cotangent_laplacian(const TriMesh& mesh);
SparseLaplacian cotangent_laplacian(const std::vector<Vec2>& points, const std::vector<Face>& faces);

// Rows listed in `rows` become identity rows; every other row is copied as is.
SparseLaplacian modify_laplacian(const SparseLaplacian& laplacian, std::span<const int> rows);

}  // namespace frf
