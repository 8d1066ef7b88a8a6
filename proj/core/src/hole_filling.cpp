#include "frf/hole_filling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "close-hole";
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAngleSlack = 1e-9;

struct Cost {
  double area = 0.0;
  double diag = 0.0;
};

Cost operator+(const Cost& a, const Cost& b) { return {a.area + b.area, a.diag + b.diag}; }

// Areas of different triangulations of a planar polygon agree only up to rounding.
bool less(const Cost& a, const Cost& b, double area_tol) {
  if (a.area < b.area - area_tol) return true;
  if (b.area < a.area - area_tol) return false;
  return a.diag < b.diag;
}

class Polygon {
 public:
  Polygon(const TriMesh& mesh, const std::vector<int>& ring) : mesh_(mesh), ring_(ring), n_(static_cast<int>(ring.size())) {
    const EdgeTopology topo(mesh);
    body_normal_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const int a = ring[static_cast<std::size_t>(i)];
      const int b = ring[static_cast<std::size_t>((i + 1) % n_)];
      const int f = topo.face_with_halfedge(a, b);
      if (f < 0) {
        throw Error(ErrorCode::kTopology, kStage,
                    "ring edge (" + std::to_string(a) + "," + std::to_string(b) + ") has no face following it", a);
      }
      body_normal_[static_cast<std::size_t>(i)] = mesh.face_normal(f);
    }
    Vec3 lo = mesh.vertex(ring[0]), hi = lo;
    for (int v : ring) {
      lo = lo.cwiseMin(mesh.vertex(v));
      hi = hi.cwiseMax(mesh.vertex(v));
    }
    const double extent = (hi - lo).norm();
    area_tol_ = 1e-12 * std::max(1.0, extent * extent);
  }

  int size() const { return n_; }
  double area_tol() const { return area_tol_; }
  const Vec3& p(int i) const { return mesh_.vertex(ring_[static_cast<std::size_t>(i)]); }

  // Cover triangle on polygon positions i < m < k, wound (k, m, i).
  Face face(int i, int m, int k) const {
    return {ring_[static_cast<std::size_t>(k)], ring_[static_cast<std::size_t>(m)], ring_[static_cast<std::size_t>(i)]};
  }
  Vec3 normal(int i, int m, int k) const {
    const Vec3 c = (p(m) - p(k)).cross(p(i) - p(k));
    const double len = c.norm();
    return len > 0.0 ? Vec3(c / len) : Vec3::Zero();
  }
  double area(int i, int m, int k) const { return 0.5 * (p(m) - p(k)).cross(p(i) - p(k)).norm(); }
  double chord(int i, int k) const { return (k - i == 1 || (i == 0 && k == n_ - 1)) ? 0.0 : (p(k) - p(i)).norm(); }
  // Body face across polygon edge (i, i+1); index n-1 is the closing edge (n-1, 0).
  const Vec3& body(int i) const { return body_normal_[static_cast<std::size_t>(i)]; }

 private:
  const TriMesh& mesh_;
  const std::vector<int>& ring_;
  int n_;
  std::vector<Vec3> body_normal_;
  double area_tol_ = 0.0;
};

double angle(const Vec3& a, const Vec3& b) {
  if (a.isZero() || b.isZero()) return std::numbers::pi;
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

// Apex-indexed tables over sub-polygons (i, k) with apex m, i < m < k.
class Table {
 public:
  Table(int n, double init) : n_(n), data_(static_cast<std::size_t>(n) * n * n, init) {}
  double& at(int i, int k, int m) { return data_[(static_cast<std::size_t>(i) * n_ + k) * n_ + m]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

std::vector<Face> exact_cover(const Polygon& poly) {
  const int n = poly.size();
  std::vector<Vec3> normals(static_cast<std::size_t>(n) * n * n);
  auto nrm = [&](int i, int m, int k) -> const Vec3& { return normals[(static_cast<std::size_t>(i) * n + k) * n + m]; };
  for (int i = 0; i < n; ++i)
    for (int k = i + 2; k < n; ++k)
      for (int m = i + 1; m < k; ++m) normals[(static_cast<std::size_t>(i) * n + k) * n + m] = poly.normal(i, m, k);

  // Phase 1: smallest achievable maximum dihedral angle, B(i,k,m).
  Table bottleneck(n, kInf);
  for (int len = 2; len < n; ++len) {
    for (int i = 0; i + len < n; ++i) {
      const int k = i + len;
      for (int m = i + 1; m < k; ++m) {
        const Vec3& t = nrm(i, m, k);
        double left = 0.0, right = 0.0;
        if (m == i + 1) {
          left = angle(t, poly.body(i));
        } else {
          left = kInf;
          for (int q = i + 1; q < m; ++q) left = std::min(left, std::max(bottleneck.at(i, m, q), angle(t, nrm(i, q, m))));
        }
        if (k == m + 1) {
          right = angle(t, poly.body(m));
        } else {
          right = kInf;
          for (int q = m + 1; q < k; ++q) right = std::min(right, std::max(bottleneck.at(m, k, q), angle(t, nrm(m, q, k))));
        }
        bottleneck.at(i, k, m) = std::max(left, right);
      }
    }
  }
  double best = kInf;
  for (int m = 1; m < n - 1; ++m) {
    best = std::min(best, std::max(bottleneck.at(0, n - 1, m), angle(nrm(0, m, n - 1), poly.body(n - 1))));
  }
  const double bound = best + kAngleSlack;

  // Phase 2: least (area, diagonal) cover whose every angle stays within the bound.
  Table area(n, kInf), diag(n, kInf);
  const double tol = poly.area_tol();
  auto side = [&](int a, int b, const Vec3& t, int body_edge, Cost& out) {
    if (b == a + 1) {
      if (angle(t, poly.body(body_edge)) > bound) return false;
      out = {};
      return true;
    }
    bool found = false;
    for (int q = a + 1; q < b; ++q) {
      const Cost c{area.at(a, b, q), diag.at(a, b, q)};
      if (c.area == kInf || angle(t, nrm(a, q, b)) > bound) continue;
      if (!found || less(c, out, tol)) {
        out = c;
        found = true;
      }
    }
    return found;
  };
  for (int len = 2; len < n; ++len) {
    for (int i = 0; i + len < n; ++i) {
      const int k = i + len;
      for (int m = i + 1; m < k; ++m) {
        const Vec3& t = nrm(i, m, k);
        Cost l, r;
        if (!side(i, m, t, i, l) || !side(m, k, t, m, r)) continue;
        const Cost own{poly.area(i, m, k), poly.chord(i, k)};
        const Cost total = l + r + own;
        area.at(i, k, m) = total.area;
        diag.at(i, k, m) = total.diag;
      }
    }
  }
  int top = -1;
  Cost top_cost;
  for (int m = 1; m < n - 1; ++m) {
    const Cost c{area.at(0, n - 1, m), diag.at(0, n - 1, m)};
    if (c.area == kInf || angle(nrm(0, m, n - 1), poly.body(n - 1)) > bound) continue;
    if (top < 0 || less(c, top_cost, tol)) {
      top = m;
      top_cost = c;
    }
  }
  if (top < 0) throw Error(ErrorCode::kSolver, kStage, "no cover satisfies the dihedral bound");

  // Backtrack: each sub-polygon knows its apex; children re-select under the same rules.
  std::vector<Face> faces;
  struct Item { int i, k, m; };
  std::vector<Item> stack{{0, n - 1, top}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    faces.push_back(poly.face(it.i, it.m, it.k));
    const Vec3& t = nrm(it.i, it.m, it.k);
    for (const auto& [a, b] : {std::pair{it.i, it.m}, std::pair{it.m, it.k}}) {
      if (b == a + 1) continue;
      int pick = -1;
      Cost pc;
      for (int q = a + 1; q < b; ++q) {
        const Cost c{area.at(a, b, q), diag.at(a, b, q)};
        if (c.area == kInf || angle(t, nrm(a, q, b)) > bound) continue;
        if (pick < 0 || less(c, pc, tol)) {
          pick = q;
          pc = c;
        }
      }
      stack.push_back({a, b, pick});
    }
  }
  return faces;
}

// Classic recursion: weight(i,k) = best over m of weight(i,m) (+) weight(m,k) (+) triangle,
// dihedrals measured against the stored best neighbours only.
std::vector<Face> liepa_cover(const Polygon& poly) {
  const int n = poly.size();
  struct W {
    double angle = kInf;
    double area = kInf;
  };
  auto better = [&](const W& a, const W& b) {
    if (a.angle < b.angle - kAngleSlack) return true;
    if (b.angle < a.angle - kAngleSlack) return false;
    return a.area < b.area;
  };
  std::vector<W> w(static_cast<std::size_t>(n) * n);
  std::vector<int> apex(static_cast<std::size_t>(n) * n, -1);
  auto idx = [n](int i, int k) { return static_cast<std::size_t>(i) * n + k; };
  for (int i = 0; i + 1 < n; ++i) w[idx(i, i + 1)] = {0.0, 0.0};
  auto neighbour_angle = [&](const Vec3& t, int a, int b) {
    if (b == a + 1) return angle(t, poly.body(a));
    const int q = apex[idx(a, b)];
    return angle(t, poly.normal(a, q, b));
  };
  for (int len = 2; len < n; ++len) {
    for (int i = 0; i + len < n; ++i) {
      const int k = i + len;
      W best;
      for (int m = i + 1; m < k; ++m) {
        const Vec3 t = poly.normal(i, m, k);
        double a = std::max({w[idx(i, m)].angle, w[idx(m, k)].angle, neighbour_angle(t, i, m), neighbour_angle(t, m, k)});
        if (k == n - 1 && i == 0) a = std::max(a, angle(t, poly.body(n - 1)));
        const W cand{a, w[idx(i, m)].area + w[idx(m, k)].area + poly.area(i, m, k)};
        if (apex[idx(i, k)] < 0 || better(cand, best)) {
          best = cand;
          apex[idx(i, k)] = m;
        }
      }
      w[idx(i, k)] = best;
    }
  }
  std::vector<Face> faces;
  std::vector<std::pair<int, int>> stack{{0, n - 1}};
  while (!stack.empty()) {
    const auto [i, k] = stack.back();
    stack.pop_back();
    if (k - i < 2) continue;
    const int m = apex[idx(i, k)];
    faces.push_back(poly.face(i, m, k));
    stack.push_back({i, m});
    stack.push_back({m, k});
  }
  return faces;
}

}  // namespace

std::vector<Face> triangulate_hole(const TriMesh& mesh, const std::vector<int>& ring, int exact_limit) {
  const int n = static_cast<int>(ring.size());
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, kStage, "hole ring shorter than 3");
  const Polygon poly(mesh, ring);
  if (n == 3) return {poly.face(0, 1, 2)};
  return n <= exact_limit ? exact_cover(poly) : liepa_cover(poly);
}

CoverWeight cover_weight(const TriMesh& mesh, const std::vector<Face>& cover) {
  const TriMesh closed = mesh.with_cover(cover, 0);
  const EdgeTopology topo(closed);
  CoverWeight out;
  const int first_cover = mesh.face_count();
  for (int f = first_cover; f < closed.face_count(); ++f) {
    const Face& t = closed.face(f);
    out.area += closed.face_area(f);
    for (int e = 0; e < 3; ++e) {
      const auto* edge = topo.find(t[e], t[(e + 1) % 3]);
      if (edge->count != 2) continue;
      const int g = edge->side[0].face == f ? edge->side[1].face : edge->side[0].face;
      if (g >= first_cover && g < f) continue;  // count each interior diagonal once
      if (g >= first_cover) out.diagonal_length += (closed.vertex(t[e]) - closed.vertex(t[(e + 1) % 3])).norm();
      const double l1 = (closed.vertex(t[1]) - closed.vertex(t[0])).cross(closed.vertex(t[2]) - closed.vertex(t[0])).norm();
      const Face& s = closed.face(g);
      const double l2 = (closed.vertex(s[1]) - closed.vertex(s[0])).cross(closed.vertex(s[2]) - closed.vertex(s[0])).norm();
      const double a = (l1 == 0.0 || l2 == 0.0) ? std::numbers::pi
                                                : angle(closed.face_normal(f), closed.face_normal(g));
      out.max_dihedral = std::max(out.max_dihedral, a);
    }
  }
  return out;
}

TriMesh close_hole(const TriMesh& mesh, const BoundaryLoop& loop) {
  const auto cover = triangulate_hole(mesh, loop.ring);
  return mesh.with_cover(cover, loop.label ? static_cast<int>(*loop.label) : 0);
}

}  // namespace frf
