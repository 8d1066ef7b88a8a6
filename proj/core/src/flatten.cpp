#include "frf/flatten.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "solve";
using Dense = Eigen::MatrixXd;
using Triplets = std::vector<Eigen::Triplet<double>>;

double relative(const Dense& residual, const Dense& rhs) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < residual.cols(); ++c) {
    const double scale = std::max(rhs.col(c).norm(), 1e-300);
    worst = std::max(worst, residual.col(c).norm() / scale);
  }
  return worst;
}

template <class Solver, class Matrix>
Dense solve_refined(const Solver& solver, const Matrix& a, const Dense& rhs) {
  Dense x = solver.solve(rhs);
  const Dense r = rhs - a * x;
  x += solver.solve(r);
  return x;
}

}  // namespace

ConstrainedSolution solve_constrained(const SparseLaplacian& lmod, const ConstraintSet& constraints,
                                      const SolveOptions& options) {
  if (!(options.w > 0.0)) throw Error(ErrorCode::kInvalidArgument, kStage, "w must be positive");
  const auto n = static_cast<int>(lmod.matrix.rows());
  std::vector<int> role(static_cast<std::size_t>(n), 0);  // 1 boundary, 2 regional
  Dense b = Dense::Zero(n, 2);
  for (const Target& t : constraints.boundary) {
    if (t.vertex < 0 || t.vertex >= n) throw Error(ErrorCode::kInvalidArgument, kStage, "boundary index out of range", t.vertex);
    if (role[static_cast<std::size_t>(t.vertex)] != 0) throw Error(ErrorCode::kSingular, kStage, "duplicate boundary constraint", t.vertex);
    if (!lmod.identity_rows[static_cast<std::size_t>(t.vertex)]) {
      throw Error(ErrorCode::kInvalidArgument, kStage, "boundary vertex lacks an identity row", t.vertex);
    }
    role[static_cast<std::size_t>(t.vertex)] = 1;
    b(t.vertex, 0) = t.point.x();
    b(t.vertex, 1) = t.point.y();
  }
  for (int i = 0; i < n; ++i) {
    if (lmod.identity_rows[static_cast<std::size_t>(i)] && role[static_cast<std::size_t>(i)] != 1) {
      throw Error(ErrorCode::kInvalidArgument, kStage, "identity row without a boundary target", i);
    }
  }
  const int p = static_cast<int>(constraints.regional.size());
  Dense s(p, 2);
  for (int k = 0; k < p; ++k) {
    const Target& t = constraints.regional[static_cast<std::size_t>(k)];
    if (t.vertex < 0 || t.vertex >= n) throw Error(ErrorCode::kInvalidArgument, kStage, "regional index out of range", t.vertex);
    if (role[static_cast<std::size_t>(t.vertex)] != 0) {
      throw Error(ErrorCode::kSingular, kStage,
                  role[static_cast<std::size_t>(t.vertex)] == 1 ? "regional constraint on a boundary vertex"
                                                                : "duplicate regional constraint",
                  t.vertex);
    }
    role[static_cast<std::size_t>(t.vertex)] = 2;
    s(k, 0) = t.point.x();
    s(k, 1) = t.point.y();
  }

  // A = W L', c = W b'.
  Eigen::VectorXd weight = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    if (options.weighting == WeightMode::kUniform || role[static_cast<std::size_t>(i)] == 1) weight(i) = options.w;
  }
  const SparseMatrix a = weight.asDiagonal() * lmod.matrix;
  const Dense c = weight.asDiagonal() * b;

  ConstrainedSolution out;
  out.points.resize(static_cast<std::size_t>(n));
  Dense x(n, 2);
  if (options.backend == KktBackend::kCondensed) {
    std::vector<int> col_of(static_cast<std::size_t>(n), -1);
    std::vector<int> free_cols;
    for (int i = 0; i < n; ++i) {
      if (role[static_cast<std::size_t>(i)] != 2) {
        col_of[static_cast<std::size_t>(i)] = static_cast<int>(free_cols.size());
        free_cols.push_back(i);
      }
    }
    std::vector<int> fixed_col(static_cast<std::size_t>(n), -1);
    for (int k = 0; k < p; ++k) fixed_col[static_cast<std::size_t>(constraints.regional[static_cast<std::size_t>(k)].vertex)] = k;
    const int nf = static_cast<int>(free_cols.size());
    Triplets tf, ts;
    for (int col = 0; col < a.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
        if (col_of[static_cast<std::size_t>(col)] >= 0) {
          tf.emplace_back(static_cast<int>(it.row()), col_of[static_cast<std::size_t>(col)], it.value());
        } else {
          ts.emplace_back(static_cast<int>(it.row()), fixed_col[static_cast<std::size_t>(col)], it.value());
        }
      }
    }
    SparseMatrix af(n, nf), as(n, p);
    af.setFromTriplets(tf.begin(), tf.end());
    as.setFromTriplets(ts.begin(), ts.end());
    const SparseMatrix aft = af.transpose();
    const SparseMatrix h = (aft * af).pruned();
    const Dense rhs = aft * (c - as * s);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    ldlt.compute(h);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::kSingular, kStage, "reduced KKT matrix is singular");
    const Dense xf = solve_refined(ldlt, h, rhs);
    if (!xf.allFinite()) throw Error(ErrorCode::kSingular, kStage, "reduced KKT solve produced non-finite values");
    out.kkt_residual = relative(rhs - h * xf, rhs);
    for (int j = 0; j < nf; ++j) x.row(free_cols[static_cast<std::size_t>(j)]) = xf.row(j);
    for (int k = 0; k < p; ++k) x.row(constraints.regional[static_cast<std::size_t>(k)].vertex) = s.row(k);
  } else {
    const SparseMatrix at = a.transpose();
    const SparseMatrix h = at * a;
    Triplets tk;
    tk.reserve(static_cast<std::size_t>(h.nonZeros() + 2 * p));
    for (int col = 0; col < h.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(h, col); it; ++it) tk.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
    for (int k = 0; k < p; ++k) {
      const int v = constraints.regional[static_cast<std::size_t>(k)].vertex;
      tk.emplace_back(n + k, v, 1.0);
      tk.emplace_back(v, n + k, 1.0);
    }
    SparseMatrix kkt(n + p, n + p);
    kkt.setFromTriplets(tk.begin(), tk.end());
    kkt.makeCompressed();
    Dense rhs(n + p, 2);
    rhs.topRows(n) = at * c;
    rhs.bottomRows(p) = s;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(kkt);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::kSingular, kStage, "KKT matrix is singular: " + lu.lastErrorMessage());
    const Dense sol = solve_refined(lu, kkt, rhs);
    if (!sol.allFinite()) throw Error(ErrorCode::kSingular, kStage, "KKT solve produced non-finite values");
    out.kkt_residual = relative(rhs - kkt * sol, rhs);
    x = sol.topRows(n);
  }
  for (int i = 0; i < n; ++i) out.points[static_cast<std::size_t>(i)] = Vec2(x(i, 0), x(i, 1));
  for (int k = 0; k < p; ++k) {
    const Target& t = constraints.regional[static_cast<std::size_t>(k)];
    out.constraint_error = std::max(out.constraint_error, (out.points[static_cast<std::size_t>(t.vertex)] - t.point).cwiseAbs().maxCoeff());
  }
  if (out.kkt_residual > 1e-6) {
    throw Error(ErrorCode::kSolver, kStage, "KKT solve did not converge (relative residual " + std::to_string(out.kkt_residual) + ")");
  }
  return out;
}

RefinedSolution refine_boundary(const std::vector<Vec2>& points, const std::vector<Face>& faces,
                                std::span<const Target> boundary) {
  const int n = static_cast<int>(points.size());
  const SparseLaplacian lap = [&] {
    try {
      return cotangent_laplacian(points, faces);
    } catch (const Error& e) {
      throw e.retagged("refine");
    }
  }();
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  Dense fixed = Dense::Zero(n, 2);
  std::vector<char> is_fixed(static_cast<std::size_t>(n), 0);
  for (const Target& t : boundary) {
    is_fixed[static_cast<std::size_t>(t.vertex)] = 1;
    fixed(t.vertex, 0) = t.point.x();
    fixed(t.vertex, 1) = t.point.y();
  }
  int ni = 0;
  for (int i = 0; i < n; ++i) {
    if (!is_fixed[static_cast<std::size_t>(i)]) index[static_cast<std::size_t>(i)] = ni++;
  }
  RefinedSolution out;
  out.points.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (is_fixed[static_cast<std::size_t>(i)]) out.points[static_cast<std::size_t>(i)] = Vec2(fixed(i, 0), fixed(i, 1));
  }
  if (ni == 0) return out;

  // -L_II x_I = L_IB b_B
  Triplets tii;
  Dense rhs = Dense::Zero(ni, 2);
  for (int col = 0; col < lap.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(lap.matrix, col); it; ++it) {
      const int r = index[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const int cidx = index[static_cast<std::size_t>(col)];
      if (cidx >= 0) {
        tii.emplace_back(r, cidx, -it.value());
      } else {
        rhs.row(r) += it.value() * fixed.row(col);
      }
    }
  }
  SparseMatrix lii(ni, ni);
  lii.setFromTriplets(tii.begin(), tii.end());
  lii.makeCompressed();
  Dense xi;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(lii);
  bool ok = ldlt.info() == Eigen::Success;
  if (ok) {
    xi = solve_refined(ldlt, lii, rhs);
    ok = xi.allFinite() && relative(rhs - lii * xi, rhs) < 1e-8;
  }
  if (!ok) {
    Eigen::SparseLU<SparseMatrix> lu(lii);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::kSingular, "refine", "refinement Laplacian is singular");
    xi = solve_refined(lu, lii, rhs);
  }
  out.residual = relative(rhs - lii * xi, rhs);
  for (int i = 0; i < n; ++i) {
    const int r = index[static_cast<std::size_t>(i)];
    if (r >= 0) out.points[static_cast<std::size_t>(i)] = Vec2(xi(r, 0), xi(r, 1));
  }
  if (!(out.residual < 1e-6)) throw Error(ErrorCode::kSolver, "refine", "refinement solve did not converge");
  return out;
}

double max_deviation(const std::vector<Vec2>& points, std::span<const Target> targets) {
  double worst = 0.0;
  for (const Target& t : targets) worst = std::max(worst, (points[static_cast<std::size_t>(t.vertex)] - t.point).norm());
  return worst;
}

int count_flipped(const std::vector<Vec2>& points, const std::vector<Face>& faces, int expected_sign) {
  int flipped = 0;
  for (const Face& f : faces) {
    const double a = signed_area(points[static_cast<std::size_t>(f[0])], points[static_cast<std::size_t>(f[1])],
                                 points[static_cast<std::size_t>(f[2])]);
    if (!(a * expected_sign > 0.0)) ++flipped;
  }
  return flipped;
}

TriMesh FlatMesh::to_trimesh() const {
  std::vector<Vec3> v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) v[i] = Vec3(points[i].x(), points[i].y(), 0.0);
  return TriMesh(std::move(v), faces, channels, face_channels, provenance, false);
}

FlatMesh FlatMesh::from_trimesh(const TriMesh& mesh, std::string template_hash) {
  FlatMesh out;
  out.points.reserve(static_cast<std::size_t>(mesh.vertex_count()));
  for (const Vec3& p : mesh.vertices()) out.points.emplace_back(p.x(), p.y());
  out.faces = mesh.faces();
  out.provenance = mesh.provenance();
  out.channels = mesh.channels();
  out.face_channels = mesh.face_channels();
  out.template_hash = std::move(template_hash);
  return out;
}

}  // namespace frf
