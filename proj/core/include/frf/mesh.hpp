#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace frf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;
using Channels = std::map<std::string, std::vector<double>>;

inline constexpr double kMinFaceArea = 1e-12;

// Indexed triangle surface. Validated on construction and immutable afterwards;
// "modifying" operations return new meshes. Faces appended by hole closing carry a
// cover tag (the hole they close) so they can be dropped again later.
class TriMesh {
 public:
  TriMesh() = default;

  // Throws frf::Error on any invariant violation: index range, repeated index,
  // face area <= kMinFaceArea, edge shared by more than two faces, channel length.
  // `check_area = false` skips the area test; used for flattened output where flipped or
  // collapsed 2D triangles are reported rather than rejected.
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces, Channels vertex_channels = {},
          Channels face_channels = {}, std::vector<std::int64_t> provenance = {},
          bool check_area = true);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }

  // Stable per-vertex identifier; defaults to the vertex index.
  const std::vector<std::int64_t>& provenance() const { return provenance_; }

  const Channels& channels() const { return channels_; }
  const Channels& face_channels() const { return face_channels_; }
  bool has_channel(const std::string& name) const { return channels_.count(name) != 0; }
  const std::vector<double>& channel(const std::string& name) const;

  // -1 for faces of the original surface, otherwise the Hole code of the cover.
  const std::vector<int>& cover_tags() const { return cover_tags_; }
  bool has_covers() const;

  double face_area(int f) const;
  Vec3 face_normal(int f) const;  // unit normal following the face winding
  double total_area() const;

  TriMesh with_channel(const std::string& name, std::vector<double> values) const;
  TriMesh with_face_channel(const std::string& name, std::vector<double> values) const;
  TriMesh with_faces_flipped(std::span<const int> face_ids) const;
  // Appends cover faces for one hole. Cover faces are exempt from the area check.
  TriMesh with_cover(std::span<const Face> cover, int hole_code) const;
  // Drops every cover face; vertex indices and provenance are untouched.
  TriMesh without_covers() const;

 private:
  void validate() const;

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  Channels channels_;
  Channels face_channels_;
  std::vector<std::int64_t> provenance_;
  std::vector<int> cover_tags_;
  bool check_area_ = true;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace frf
