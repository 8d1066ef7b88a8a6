#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frf/flatten.hpp"
#include "frf/template.hpp"

namespace frf {

// Exact nearest-neighbour queries over 2D points on a uniform grid.
class GridIndex {
 public:
  explicit GridIndex(const std::vector<Vec2>& points);
  // Nearest point; ties go to the lowest index.
  int nearest(const Vec2& q) const;

 private:
  int cell(int cx, int cy) const { return cy * nx_ + cx; }
  std::pair<int, int> coords(const Vec2& p) const;

  const std::vector<Vec2>* points_;
  Vec2 origin_ = Vec2::Zero();
  double size_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<int> start_;
  std::vector<int> items_;
};

struct Parcellation2D {
  std::string template_hash;
  std::vector<int> codes;  // per reference vertex
  std::map<int, std::string> legend;
};

nlohmann::json to_json(const Parcellation2D& p);
Parcellation2D parcellation_from_json(const nlohmann::json& j);

enum class AnnulusPreset { kPerVein, kIpsilateral };

// Codes vertices of `ref` lying in an annulus of width `width_factor * radius` outside
// each vein circle. Per vein: 1 LIPV, 2 LSPV, 3 RIPV, 4 RSPV; ipsilateral: 1 left, 2 right.
Parcellation2D annulus_parcellation(const FlatMesh& ref, const TemplateSpec& spec, AnnulusPreset preset,
                                    double width_factor = 1.5);

// Nearest reference vertex in the disk; requires matching template hashes.
std::vector<int> map_parcellation(const FlatMesh& ref, const Parcellation2D& parcellation, const FlatMesh& target);

// Copies codes onto the source surface by provenance id.
std::vector<int> lift_to_3d(const FlatMesh& flat, const std::vector<int>& codes, const TriMesh& source);

struct PairedSample {
  int vertex = -1;
  double a = 0.0;
  double b = 0.0;
};

// Samples b's channel at every vertex of a: barycentric inside a triangle of b,
// nearest vertex of b otherwise.
std::vector<PairedSample> compare_maps(const FlatMesh& a, const std::string& channel_a, const FlatMesh& b,
                                       const std::string& channel_b);

void write_pairs_csv(const std::vector<PairedSample>& pairs, const std::filesystem::path& path);

}  // namespace frf
