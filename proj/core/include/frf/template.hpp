#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "frf/anatomy.hpp"
#include "frf/mesh.hpp"

namespace frf {

enum class PathStyle { kStraight, kArc };

struct HoleCircle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  int ring_orientation = 1;  // +1 counter-clockwise
  std::map<int, double> anchors;  // path id -> angle (rad) of its intersection point
};

struct TemplateSpec {
  std::string name = "custom";
  double disk_radius = 1.0;
  std::map<Hole, HoleCircle> holes;  // the five closed holes
  std::array<double, 4> mv_anchor_angles{};
  int mv_orientation = -1;  // MV1 -> MV4 runs clockwise on the rim
  std::array<PathStyle, kPathCount> path_style{};
  double arc_sagitta = 0.15;  // fraction of the chord
  bool approximate = false;

  const HoleCircle& hole(Hole h) const;
  // Clearances (>= 0.02 disk radius to the rim and between circles), distinct anchors.
  void validate() const;
};

// Layout parameters. Lengths are in disk radii; gaps are measured circle edge to edge.
struct LayoutConfig {
  std::string name = "population";
  double disk_radius = 1.0;
  double lipv_radius = 0.085;
  double lspv_ratio = 1.1;  // radius / LIPV radius, from ostium perimeters
  double ripv_ratio = 1.1;
  double rspv_ratio = 1.35;
  double laa_ratio = 1.35;
  double left_carina = 0.18;  // unit gap between LSPV and LIPV
  double right_carina_ratio = 1.1;
  double laa_gap_ratio = 1.6;  // LSPV-LAA gap / left carina
  double separation_ratio = 3.75;  // superior pair and inferior pair gaps / left carina
  double inter_vein_scale = 1.0;  // scales carinas and separations
  double vertical_scale = 1.0;  // additional scale of the carinas
  double mv_gap_ratio = 0.5;  // mean left PV-rim gap / mean right PV-rim gap
  double laa_angle_deg = 100.0;  // direction from LSPV to LAA
  double vertical_offset = -0.25;
  std::array<double, 4> mv_anchor_deg{45.0, -45.0, 225.0, 135.0};
  double arc_sagitta = 0.15;
  bool approximate = false;
};

LayoutConfig preset_layout(std::string_view name);  // population | adapted1 | adapted2
TemplateSpec build_template(const LayoutConfig& config);
TemplateSpec build_template(std::string_view preset);

// Same layout with every length multiplied by k.
TemplateSpec scaled(const TemplateSpec& spec, double k);

// Rim point of MV seed `k` (0..3).
Vec2 mv_point(const TemplateSpec& spec, int k);
// Point on a hole circle at angle `theta`.
Vec2 circle_point(const HoleCircle& c, double theta);

nlohmann::json to_json(const TemplateSpec& spec);
TemplateSpec template_from_json(const nlohmann::json& j);
// FNV-1a of the canonical JSON serialisation, as 16 hex digits.
std::string template_hash(const TemplateSpec& spec);

// Edge-to-edge gap between two hole circles.
double circle_gap(const TemplateSpec& spec, Hole a, Hole b);

}  // namespace frf
