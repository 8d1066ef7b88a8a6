#include "frf/mesh.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <Eigen/Geometry>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "mesh";

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces, Channels vertex_channels,
                 Channels face_channels, std::vector<std::int64_t> provenance,
                 bool check_area)
    : vertices_(std::move(vertices)),
      faces_(std::move(faces)),
      channels_(std::move(vertex_channels)),
      face_channels_(std::move(face_channels)),
      provenance_(std::move(provenance)),
      cover_tags_(faces_.size(), -1),
      check_area_(check_area) {
  if (provenance_.empty()) {
    provenance_.resize(vertices_.size());
    for (std::size_t i = 0; i < provenance_.size(); ++i) provenance_[i] = static_cast<std::int64_t>(i);
  }
  validate();
}

void TriMesh::validate() const {
  const int n = vertex_count();
  if (provenance_.size() != vertices_.size()) {
    throw Error(ErrorCode::kInvalidMesh, kStage, "provenance length differs from vertex count");
  }
  for (const auto& [name, values] : channels_) {
    if (static_cast<int>(values.size()) != n) {
      throw Error(ErrorCode::kInvalidMesh, kStage,
                  "channel '" + name + "' has " + std::to_string(values.size()) +
                      " values for " + std::to_string(n) + " vertices");
    }
  }
  for (const auto& [name, values] : face_channels_) {
    if (values.size() != faces_.size()) {
      throw Error(ErrorCode::kInvalidMesh, kStage, "face channel '" + name + "' length mismatch");
    }
  }
  for (const Vec3& p : vertices_) {
    if (!p.allFinite()) throw Error(ErrorCode::kInvalidMesh, kStage, "non-finite vertex coordinate");
  }

  std::unordered_map<std::uint64_t, int> edge_use;
  edge_use.reserve(faces_.size() * 2);
  std::vector<std::pair<int, int>> overused;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& t = faces_[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= n) {
        throw Error(ErrorCode::kInvalidMesh, kStage,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(t[k]) +
                        " out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorCode::kInvalidMesh, kStage, "face " + std::to_string(f) + " repeats a vertex");
    }
    const bool is_cover = !cover_tags_.empty() && cover_tags_[f] >= 0;
    if (check_area_ && !is_cover && face_area(static_cast<int>(f)) <= kMinFaceArea) {
      throw Error(ErrorCode::kDegenerate, kStage,
                  "face " + std::to_string(f) + " has area <= 1e-12");
    }
    for (int k = 0; k < 3; ++k) {
      int& uses = edge_use[edge_key(t[k], t[(k + 1) % 3])];
      if (++uses == 3) overused.emplace_back(std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3]));
    }
  }
  if (!overused.empty()) {
    std::ostringstream msg;
    msg << "non-manifold edges:";
    for (const auto& [a, b] : overused) msg << " (" << a << "," << b << ")";
    throw Error(ErrorCode::kNonManifold, kStage, msg.str());
  }
}

const std::vector<double>& TriMesh::channel(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) {
    throw Error(ErrorCode::kInvalidArgument, kStage, "no channel named '" + name + "'");
  }
  return it->second;
}

bool TriMesh::has_covers() const {
  return std::any_of(cover_tags_.begin(), cover_tags_.end(), [](int t) { return t >= 0; });
}

double TriMesh::face_area(int f) const {
  const Face& t = face(f);
  return triangle_area(vertex(t[0]), vertex(t[1]), vertex(t[2]));
}

Vec3 TriMesh::face_normal(int f) const {
  const Face& t = face(f);
  return (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0])).normalized();
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int f = 0; f < face_count(); ++f) sum += face_area(f);
  return sum;
}

TriMesh TriMesh::with_channel(const std::string& name, std::vector<double> values) const {
  TriMesh out = *this;
  out.channels_[name] = std::move(values);
  out.validate();
  return out;
}

TriMesh TriMesh::with_face_channel(const std::string& name, std::vector<double> values) const {
  TriMesh out = *this;
  out.face_channels_[name] = std::move(values);
  out.validate();
  return out;
}

TriMesh TriMesh::with_faces_flipped(std::span<const int> face_ids) const {
  TriMesh out = *this;
  for (int f : face_ids) std::swap(out.faces_[static_cast<std::size_t>(f)][1], out.faces_[static_cast<std::size_t>(f)][2]);
  return out;
}

TriMesh TriMesh::with_cover(std::span<const Face> cover, int hole_code) const {
  TriMesh out = *this;
  out.faces_.insert(out.faces_.end(), cover.begin(), cover.end());
  out.cover_tags_.insert(out.cover_tags_.end(), cover.size(), hole_code);
  for (auto& [name, values] : out.face_channels_) values.resize(out.faces_.size(), 0.0);
  out.validate();
  return out;
}

TriMesh TriMesh::without_covers() const {
  TriMesh out = *this;
  out.faces_.clear();
  out.cover_tags_.clear();
  for (auto& [name, values] : out.face_channels_) values.clear();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (cover_tags_[f] >= 0) continue;
    out.faces_.push_back(faces_[f]);
    out.cover_tags_.push_back(-1);
    for (auto& [name, values] : out.face_channels_) values.push_back(face_channels_.at(name)[f]);
  }
  return out;
}

}  // namespace frf
