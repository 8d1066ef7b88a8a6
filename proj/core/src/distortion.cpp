#include "frf/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "distortion";

Summary summarize(const std::vector<double>& v, const std::vector<double>& weights) {
  Summary s;
  if (v.empty()) return s;
  double sum = 0.0, wsum = 0.0, wtot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    wsum += v[i] * weights[i];
    wtot += weights[i];
  }
  s.mean = sum / static_cast<double>(v.size());
  s.weighted_mean = wsum / wtot;
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  return s;
}

nlohmann::json to_json(const Histogram& h) {
  nlohmann::json edges = nlohmann::json::array();
  const auto bins = h.counts.size();
  for (std::size_t i = 0; i <= bins; ++i) edges.push_back(h.lo + (h.hi - h.lo) * static_cast<double>(i) / static_cast<double>(bins));
  return {{"edges", edges}, {"counts", h.counts}, {"entropy", h.entropy}};
}

nlohmann::json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"weighted_mean", s.weighted_mean}};
}

}  // namespace

Histogram histogram_entropy(std::span<const double> values, int bins, double lo, double hi) {
  if (bins < 2) throw Error(ErrorCode::kInvalidArgument, kStage, "need at least 2 bins");
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, kStage, "histogram of empty input");
  if (!(hi > lo)) throw Error(ErrorCode::kInvalidArgument, kStage, "empty histogram range");
  Histogram h{lo, hi, std::vector<long>(static_cast<std::size_t>(bins), 0), 0.0};
  const double width = (hi - lo) / bins;
  for (double v : values) {
    long b = std::isnan(v) ? 0 : static_cast<long>(std::floor((v - lo) / width));
    b = std::clamp<long>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  const double total = static_cast<double>(values.size());
  for (long c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h.entropy -= p * std::log(p);
  }
  return h;
}

std::vector<double> area_ratio(const TriMesh& mesh3d, const FlatMesh& flat) {
  if (mesh3d.faces() != flat.faces) throw Error(ErrorCode::kMismatch, kStage, "3D and 2D face lists differ");
  const std::size_t nf = flat.faces.size();
  std::vector<double> a3(nf), a2(nf);
  double t3 = 0.0, t2 = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    a3[f] = mesh3d.face_area(static_cast<int>(f));
    if (!(a3[f] > 0.0)) throw Error(ErrorCode::kDegenerate, kStage, "3D face " + std::to_string(f) + " has zero area");
    const Face& t = flat.faces[f];
    a2[f] = std::abs(signed_area(flat.points[static_cast<std::size_t>(t[0])], flat.points[static_cast<std::size_t>(t[1])],
                                 flat.points[static_cast<std::size_t>(t[2])]));
    t3 += a3[f];
    t2 += a2[f];
  }
  if (!(t2 > 0.0)) throw Error(ErrorCode::kDegenerate, kStage, "flattened mesh has zero area");
  std::vector<double> alpha(nf);
  for (std::size_t f = 0; f < nf; ++f) alpha[f] = (a2[f] / t2) / (a3[f] / t3);
  return alpha;
}

Eigen::Matrix2d jacobian(const std::array<Vec3, 3>& p, const std::array<Vec2, 3>& q) {
  const Vec3 e1 = p[1] - p[0];
  const Vec3 e2 = p[2] - p[0];
  const double l1 = e1.norm();
  const Vec3 n = e1.cross(e2);
  if (!(l1 > 0.0) || !(n.norm() > 0.0)) throw Error(ErrorCode::kDegenerate, kStage, "degenerate 3D triangle");
  const Vec3 x = e1 / l1;
  const Vec3 y = n.normalized().cross(x);
  Eigen::Matrix2d P;
  P << l1, e2.dot(x), 0.0, e2.dot(y);
  Eigen::Matrix2d Q;
  Q.col(0) = q[1] - q[0];
  Q.col(1) = q[2] - q[0];
  return Q * P.inverse();
}

std::array<double, 2> singular_values(const Eigen::Matrix2d& j) {
  const double e = 0.5 * (j(0, 0) + j(1, 1));
  const double f = 0.5 * (j(0, 0) - j(1, 1));
  const double g = 0.5 * (j(1, 0) + j(0, 1));
  const double h = 0.5 * (j(1, 0) - j(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  return {q + r, std::abs(q - r)};
}

double isotropy_ratio(const Eigen::Matrix2d& j) {
  if (!j.allFinite()) throw Error(ErrorCode::kInvalidArgument, kStage, "non-finite Jacobian");
  const auto s = singular_values(j);
  if (!(s[0] > 0.0)) throw Error(ErrorCode::kDegenerate, kStage, "Jacobian is zero");
  return s[1] / s[0];
}

DistortionReport distortion_report(const TriMesh& mesh3d, const FlatMesh& flat, int expected_sign, int bins) {
  DistortionReport r;
  r.alpha = area_ratio(mesh3d, flat);
  const std::size_t nf = flat.faces.size();
  std::vector<double> signed2d(nf);
  double total = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& t = flat.faces[f];
    signed2d[f] = signed_area(flat.points[static_cast<std::size_t>(t[0])], flat.points[static_cast<std::size_t>(t[1])],
                              flat.points[static_cast<std::size_t>(t[2])]);
    total += signed2d[f];
  }
  if (expected_sign == 0) expected_sign = total >= 0.0 ? 1 : -1;
  r.beta.resize(nf);
  r.flipped.assign(nf, 0);
  std::vector<double> weight(nf);
  const double t3 = mesh3d.total_area();
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& t = flat.faces[f];
    const std::array<Vec3, 3> p{mesh3d.vertex(t[0]), mesh3d.vertex(t[1]), mesh3d.vertex(t[2])};
    const std::array<Vec2, 3> q{flat.points[static_cast<std::size_t>(t[0])], flat.points[static_cast<std::size_t>(t[1])],
                                flat.points[static_cast<std::size_t>(t[2])]};
    const Eigen::Matrix2d j = jacobian(p, q);
    const auto s = singular_values(j);
    r.beta[f] = s[0] > 0.0 ? s[1] / s[0] : 0.0;
    if (!(signed2d[f] * expected_sign > 0.0)) {
      r.flipped[f] = 1;
      ++r.flipped_count;
    }
    weight[f] = mesh3d.face_area(static_cast<int>(f)) / t3;
  }
  r.alpha_histogram = histogram_entropy(r.alpha, bins, 0.0, kAlphaRangeMax);
  r.beta_histogram = histogram_entropy(r.beta, bins, 0.0, 1.0);
  r.alpha_summary = summarize(r.alpha, weight);
  r.beta_summary = summarize(r.beta, weight);
  return r;
}

nlohmann::json to_json(const DistortionReport& r) {
  return {
      {"face_count", r.alpha.size()},
      {"flipped_count", r.flipped_count},
      {"alpha", {{"summary", to_json(r.alpha_summary)}, {"histogram", to_json(r.alpha_histogram)}}},
      {"beta", {{"summary", to_json(r.beta_summary)}, {"histogram", to_json(r.beta_histogram)}}},
  };
}

void write_distortion_csv(const DistortionReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, kStage, "cannot write '" + path.string() + "'");
  out << "faceId,alpha,beta,flipped\n";
  char buf[96];
  for (std::size_t f = 0; f < r.alpha.size(); ++f) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d\n", f, r.alpha[f], r.beta[f], r.flipped[f] ? 1 : 0);
    out << buf;
  }
}

}  // namespace frf
