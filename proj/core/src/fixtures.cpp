#include "frf/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "frf/error.hpp"
#include "frf/topology.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "fixture";

TriMesh compact(const std::vector<Vec3>& vertices, const std::vector<Face>& faces) {
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (const Face& t : faces) {
    Face nt{};
    for (int k = 0; k < 3; ++k) {
      int& r = remap[static_cast<std::size_t>(t[k])];
      if (r < 0) {
        r = static_cast<int>(v.size());
        v.push_back(vertices[static_cast<std::size_t>(t[k])]);
      }
      nt[k] = r;
    }
    f.push_back(nt);
  }
  return TriMesh(std::move(v), std::move(f));
}

}  // namespace

TriMesh icosphere(int frequency, double radius) {
  if (frequency < 1) throw Error(ErrorCode::kInvalidArgument, kStage, "frequency must be >= 1");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::vector<Vec3> base = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  const std::vector<Face> ico = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::map<std::tuple<long long, long long, long long>, int> index;
  auto vertex = [&](const Vec3& p) {
    const Vec3 u = p.normalized();
    const auto key = std::make_tuple(std::llround(u.x() * 1e9), std::llround(u.y() * 1e9), std::llround(u.z() * 1e9));
    auto [it, inserted] = index.emplace(key, static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back(radius * u);
    return it->second;
  };
  const int n = frequency;
  for (const Face& f : ico) {
    const Vec3 a = base[static_cast<std::size_t>(f[0])], b = base[static_cast<std::size_t>(f[1])], c = base[static_cast<std::size_t>(f[2])];
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n - i; ++j) {
        const Vec3 p = a + (b - a) * (static_cast<double>(i) / n) + (c - a) * (static_cast<double>(j) / n);
        grid[static_cast<std::size_t>(i)].push_back(vertex(p));
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n - i; ++j) {
        const int v00 = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const int v10 = grid[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)];
        const int v01 = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) + 1];
        faces.push_back({v00, v10, v01});
        if (j + 1 < n - i) {
          const int v11 = grid[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j) + 1];
          faces.push_back({v10, v11, v01});
        }
      }
    }
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

AtriumFixture sphere_with_holes(int frequency, const TemplateSpec& spec, double radius, double mitral_cap) {
  const TriMesh sphere = icosphere(frequency, radius);
  AtriumFixture out;
  // Plane point of a unit direction under the stereographic chart that sends the
  // mitral cap boundary to the template rim.
  const double scale = std::tan((std::numbers::pi - mitral_cap) / 2.0);
  auto chart = [&](const Vec3& u) -> Vec2 { return Vec2(u.x(), u.y()) / ((1.0 + u.z()) * scale) * spec.disk_radius; };
  out.directions[static_cast<std::size_t>(Hole::kMV)] = Vec3(0, 0, -1);
  for (Hole h : kClosedHoles) {
    const Vec2 q = spec.hole(h).center / spec.disk_radius * scale;
    const double s2 = q.squaredNorm();
    out.directions[static_cast<std::size_t>(h)] = Vec3(2.0 * q.x(), 2.0 * q.y(), 1.0 - s2) / (1.0 + s2);
  }

  std::vector<Face> faces;
  for (int f = 0; f < sphere.face_count(); ++f) {
    const Face& t = sphere.face(f);
    const Vec3 centroid = ((sphere.vertex(t[0]) + sphere.vertex(t[1]) + sphere.vertex(t[2])) / 3.0).normalized();
    if (centroid.z() <= -1.0 + 1e-12) continue;
    const Vec2 p = chart(centroid);
    bool keep = p.norm() <= spec.disk_radius;
    for (Hole h : kClosedHoles) {
      if (!keep) break;
      const HoleCircle& c = spec.hole(h);
      keep = (p - c.center).norm() >= c.radius;
    }
    if (keep) faces.push_back(t);
  }

  // Trim ears and pinched vertices until every boundary is a simple loop.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<int, int>, int> use;
    for (const Face& t : faces)
      for (int k = 0; k < 3; ++k) ++use[std::minmax(t[k], t[(k + 1) % 3])];
    std::map<int, int> boundary_degree;
    for (const auto& [e, c] : use) {
      if (c != 1) continue;
      ++boundary_degree[e.first];
      ++boundary_degree[e.second];
    }
    std::set<int> pinched;
    for (const auto& [v, d] : boundary_degree) {
      if (d > 2) pinched.insert(v);
    }
    std::vector<Face> kept;
    for (const Face& t : faces) {
      int open = 0;
      bool touches = false;
      for (int k = 0; k < 3; ++k) {
        open += use[std::minmax(t[k], t[(k + 1) % 3])] == 1;
        touches = touches || pinched.count(t[k]);
      }
      if (open >= 2 || touches) {
        changed = true;
        continue;
      }
      kept.push_back(t);
    }
    faces = std::move(kept);
  }
  out.mesh = compact(sphere.vertices(), faces);

  const auto loops = boundary_loops(out.mesh);
  if (loops.size() != kHoleCount) {
    throw Error(ErrorCode::kTopology, kStage, "fixture has " + std::to_string(loops.size()) + " boundary loops");
  }
  // Match loops in the chart: the mitral rim has the largest mean radius, the others
  // sit closest to their circle centres.
  std::vector<Vec2> mean(loops.size(), Vec2::Zero());
  std::vector<double> reach(loops.size(), 0.0);
  for (std::size_t l = 0; l < loops.size(); ++l) {
    for (int v : loops[l].ring) {
      const Vec2 p = chart(out.mesh.vertex(v).normalized());
      mean[l] += p;
      reach[l] += p.norm();
    }
    mean[l] /= static_cast<double>(loops[l].ring.size());
    reach[l] /= static_cast<double>(loops[l].ring.size());
  }
  std::array<int, kHoleCount> loop_of{};
  loop_of[static_cast<std::size_t>(Hole::kMV)] = static_cast<int>(std::max_element(reach.begin(), reach.end()) - reach.begin());
  for (Hole h : kClosedHoles) {
    double best = 1e300;
    for (std::size_t l = 0; l < loops.size(); ++l) {
      if (static_cast<int>(l) == loop_of[static_cast<std::size_t>(Hole::kMV)]) continue;
      const double d = (mean[l] - spec.hole(h).center).norm();
      if (d < best) {
        best = d;
        loop_of[static_cast<std::size_t>(h)] = static_cast<int>(l);
      }
    }
  }
  for (Hole h : kClosedHoles) {
    out.seeds.holes[h] = snap_to_cover(out.mesh, loops[static_cast<std::size_t>(loop_of[static_cast<std::size_t>(h)])].ring);
  }
  const auto& mv = loops[static_cast<std::size_t>(loop_of[static_cast<std::size_t>(Hole::kMV)])].ring;
  for (int k = 0; k < 4; ++k) {
    const double target = spec.mv_anchor_angles[static_cast<std::size_t>(k)];
    double best = 1e9;
    for (int v : mv) {
      const Vec3& p = out.mesh.vertex(v);
      const double d = std::abs(std::remainder(std::atan2(p.y(), p.x()) - target, 2.0 * std::numbers::pi));
      if (d < best) {
        best = d;
        out.seeds.mv[static_cast<std::size_t>(k)] = v;
      }
    }
  }
  return out;
}

TriMesh disk_mesh(int rings, double radius, double jitter, double bump, std::uint64_t seed) {
  if (rings < 1) throw Error(ErrorCode::kInvalidArgument, kStage, "need at least one ring");
  std::vector<Vec3> v{Vec3::Zero()};
  std::vector<int> first{0};
  for (int k = 1; k <= rings; ++k) {
    first.push_back(static_cast<int>(v.size()));
    const int m = 6 * k;
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * std::numbers::pi * j / m;
      v.emplace_back(radius * k / rings * std::cos(a), radius * k / rings * std::sin(a), 0.0);
    }
  }
  std::vector<Face> faces;
  for (int j = 0; j < 6; ++j) faces.push_back({0, 1 + j, 1 + (j + 1) % 6});
  for (int k = 2; k <= rings; ++k) {
    const int ni = 6 * (k - 1), no = 6 * k;
    const int bi = first[static_cast<std::size_t>(k - 1)], bo = first[static_cast<std::size_t>(k)];
    int i = 0, j = 0;
    while (i < ni || j < no) {
      // Compare the angles of the next inner and next outer vertex exactly: (i+1)/ni vs (j+1)/no.
      const bool outer = i == ni || (j < no && static_cast<long>(j + 1) * ni <= static_cast<long>(i + 1) * no);
      if (outer) {
        faces.push_back({bi + i % ni, bo + j, bo + (j + 1) % no});
        ++j;
      } else {
        faces.push_back({bi + i, bo + j % no, bi + (i + 1) % ni});
        ++i;
      }
    }
  }
  if (jitter > 0.0 || bump != 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double spacing = radius / rings;
    const int interior_end = first[static_cast<std::size_t>(rings)];
    for (int i = 1; i < interior_end; ++i) {
      v[static_cast<std::size_t>(i)].x() += jitter * spacing * 0.5 * u(rng);
      v[static_cast<std::size_t>(i)].y() += jitter * spacing * 0.5 * u(rng);
    }
    for (auto& p : v) {
      const double r2 = (p.x() * p.x() + p.y() * p.y()) / (radius * radius);
      p.z() = bump * radius * (1.0 - r2) * (1.0 + 0.3 * p.x() / radius);
    }
  }
  return TriMesh(std::move(v), std::move(faces));
}

std::vector<int> disk_rim(int rings) {
  const int start = 1 + 3 * rings * (rings - 1);
  std::vector<int> out(static_cast<std::size_t>(6 * rings));
  for (int j = 0; j < 6 * rings; ++j) out[static_cast<std::size_t>(j)] = start + j;
  return out;
}

}  // namespace frf
