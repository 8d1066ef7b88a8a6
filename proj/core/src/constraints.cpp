#include "frf/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "constraints";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

std::vector<Vec2> ring_targets(const Vec2& center, double radius, int ring_length, std::span<const int> positions,
                               std::span<const double> angles, int orientation) {
  const std::size_t k = positions.size();
  if (k == 0 || angles.size() != k) throw Error(ErrorCode::kInvalidArgument, kStage, "anchor count mismatch");
  std::vector<Vec2> out(static_cast<std::size_t>(ring_length));
  double travelled = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const int p0 = positions[i];
    const int p1 = positions[(i + 1) % k];
    int steps = ((p1 - p0) % ring_length + ring_length) % ring_length;
    if (steps == 0) steps = ring_length;
    double sweep = wrap_angle(orientation * (angles[(i + 1) % k] - angles[i]));
    if (k == 1) sweep = kTwoPi;
    travelled += sweep;
    for (int j = 0; j < steps; ++j) {
      const double theta = angles[i] + orientation * sweep * static_cast<double>(j) / static_cast<double>(steps);
      out[static_cast<std::size_t>((p0 + j) % ring_length)] = center + radius * Vec2(std::cos(theta), std::sin(theta));
    }
  }
  if (std::abs(travelled - kTwoPi) > 1e-9) {
    throw Error(ErrorCode::kOrientation, kStage, "ring order of intersection points opposes the template orientation");
  }
  return out;
}

std::vector<Vec2> path_targets(std::span<const Vec3> points, const Vec2& a, const Vec2& b, PathStyle style,
                               double sagitta, const Vec2& away_from) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, kStage, "path needs two vertices");
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + (points[i] - points[i - 1]).norm();
  const double total = cum.back();
  if (!(total > 0.0)) throw Error(ErrorCode::kDegenerate, kStage, "path has zero length");

  std::vector<Vec2> out(n);
  out.front() = a;
  out.back() = b;
  const Vec2 chord = b - a;
  const double c = chord.norm();
  if (style == PathStyle::kStraight || c == 0.0 || sagitta <= 0.0) {
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = a + (cum[i] / total) * chord;
    return out;
  }
  const Vec2 mid = 0.5 * (a + b);
  Vec2 normal(-chord.y() / c, chord.x() / c);
  if (normal.dot(mid - away_from) < 0.0) normal = -normal;
  const double s = sagitta * c;
  const double rho = (c * c / 4.0 + s * s) / (2.0 * s);
  const Vec2 origin = mid - (rho - s) * normal;
  const Vec2 apex = mid + s * normal;
  const double start = std::atan2(a.y() - origin.y(), a.x() - origin.x());
  const Vec2 ra = a - origin, rp = apex - origin;
  const double turn = ra.x() * rp.y() - ra.y() * rp.x() >= 0.0 ? 1.0 : -1.0;
  const double sweep = 2.0 * std::asin(std::min(1.0, 0.5 * c / rho)) * turn;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double theta = start + sweep * cum[i] / total;
    out[i] = origin + rho * Vec2(std::cos(theta), std::sin(theta));
  }
  return out;
}

ConstraintSet target_coordinates(const TemplateSpec& spec, const OpenedDivision& opened, const LabeledBoundary& boundary) {
  const TriMesh& mesh = opened.mesh;
  std::vector<Vec2> target(static_cast<std::size_t>(mesh.vertex_count()), Vec2::Zero());
  std::vector<char> has(static_cast<std::size_t>(mesh.vertex_count()), 0);
  ConstraintSet out;

  auto emit_ring = [&](const std::vector<int>& ring, const std::vector<Vec2>& pts) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      out.boundary.push_back({ring[i], pts[i]});
      target[static_cast<std::size_t>(ring[i])] = pts[i];
      has[static_cast<std::size_t>(ring[i])] = 1;
    }
  };

  for (const HoleSplit& hs : opened.splits) {
    const HoleCircle& circle = spec.hole(hs.hole);
    const auto& ids = opened.division.intersection_paths[static_cast<std::size_t>(hs.hole)];
    std::vector<double> angles;
    for (int id : ids) angles.push_back(circle.anchors.at(id));
    const auto& ring = boundary.ring(hs.hole);
    try {
      emit_ring(ring, ring_targets(circle.center, circle.radius, static_cast<int>(ring.size()), hs.split.positions,
                                   angles, circle.ring_orientation));
    } catch (const Error& e) {
      throw Error(e.code(), kStage, std::string(hole_name(hs.hole)) + ": " + e.message());
    }
  }

  const auto& mv = boundary.ring(Hole::kMV);
  std::vector<int> mv_pos;
  for (int v : opened.division.intersections[static_cast<std::size_t>(Hole::kMV)]) {
    mv_pos.push_back(static_cast<int>(std::find(mv.begin(), mv.end(), v) - mv.begin()));
  }
  try {
    emit_ring(mv, ring_targets(Vec2::Zero(), spec.disk_radius, static_cast<int>(mv.size()), mv_pos,
                               spec.mv_anchor_angles, spec.mv_orientation));
  } catch (const Error& e) {
    throw Error(e.code(), kStage, std::string("MV: ") + e.message());
  }

  for (const PathEnds& pe : kPaths) {
    const auto& chain = opened.division.path(pe.id);
    std::vector<Vec3> pts;
    for (int v : chain) pts.push_back(mesh.vertex(v));
    const int a = chain.front(), b = chain.back();
    if (!has[static_cast<std::size_t>(a)] || !has[static_cast<std::size_t>(b)]) {
      throw Error(ErrorCode::kDivision, kStage, "path s" + std::to_string(pe.id) + " does not end on rings");
    }
    const auto t = path_targets(pts, target[static_cast<std::size_t>(a)], target[static_cast<std::size_t>(b)],
                                spec.path_style[static_cast<std::size_t>(pe.id - 1)], spec.arc_sagitta);
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      if (has[static_cast<std::size_t>(chain[i])]) {
        throw Error(ErrorCode::kDivision, kStage, "path s" + std::to_string(pe.id) + " touches a ring inside", chain[i]);
      }
      out.regional.push_back({chain[i], t[i]});
    }
  }
  return out;
}

}  // namespace frf
