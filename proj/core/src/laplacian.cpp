#include "frf/laplacian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "frf/error.hpp"

namespace frf {

double clamped_cot(const Vec3& apex, const Vec3& b, const Vec3& c) {
  const Vec3 u = b - apex;
  const Vec3 v = c - apex;
  const double cross = u.cross(v).norm();
  const double dot = u.dot(v);
  if (cross == 0.0) return dot >= 0.0 ? kCotClamp : -kCotClamp;
  return std::clamp(dot / cross, -kCotClamp, kCotClamp);
}

namespace {

SparseLaplacian assemble(int n, const std::vector<Face>& faces, const std::vector<Vec3>& p) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(faces.size() * 12);
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[static_cast<std::size_t>(k)];
      const int i = f[static_cast<std::size_t>((k + 1) % 3)];
      const int j = f[static_cast<std::size_t>((k + 2) % 3)];
      const double w = 0.5 * clamped_cot(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(i)],
                                         p[static_cast<std::size_t>(j)]);
      triplets.emplace_back(i, j, w);
      triplets.emplace_back(j, i, w);
      triplets.emplace_back(i, i, -w);
      triplets.emplace_back(j, j, -w);
    }
  }
  SparseLaplacian out;
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.identity_rows.assign(static_cast<std::size_t>(n), 0);
  return out;
}

}  // namespace

SparseLaplacian cotangent_laplacian(const TriMesh& mesh) {
  return assemble(mesh.vertex_count(), mesh.faces(), mesh.vertices());
}

SparseLaplacian cotangent_laplacian(const std::vector<Vec2>& points, const std::vector<Face>& faces) {
  std::vector<Vec3> lifted(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) lifted[i] = Vec3(points[i].x(), points[i].y(), 0.0);
  for (const Face& f : faces) {
    const Vec3& a = lifted[static_cast<std::size_t>(f[0])];
    if (a == lifted[static_cast<std::size_t>(f[1])] || a == lifted[static_cast<std::size_t>(f[2])] ||
        lifted[static_cast<std::size_t>(f[1])] == lifted[static_cast<std::size_t>(f[2])]) {
      throw Error(ErrorCode::kDegenerate, "laplacian", "coincident vertices in 2D face", f[0]);
    }
  }
  return assemble(static_cast<int>(points.size()), faces, lifted);
}

SparseLaplacian modify_laplacian(const SparseLaplacian& laplacian, std::span<const int> rows) {
  const auto n = laplacian.matrix.rows();
  SparseLaplacian out;
  out.identity_rows = laplacian.identity_rows;
  out.identity_rows.resize(static_cast<std::size_t>(n), 0);
  for (int r : rows) {
    if (r < 0 || r >= n) throw Error(ErrorCode::kInvalidArgument, "laplacian", "row index out of range", r);
    out.identity_rows[static_cast<std::size_t>(r)] = 1;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(laplacian.matrix.nonZeros()));
  for (int col = 0; col < laplacian.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(laplacian.matrix, col); it; ++it) {
      if (out.identity_rows[static_cast<std::size_t>(it.row())]) continue;
      triplets.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    if (out.identity_rows[static_cast<std::size_t>(r)]) triplets.emplace_back(static_cast<int>(r), static_cast<int>(r), 1.0);
  }
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

}  // namespace frf
