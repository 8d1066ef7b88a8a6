#include "frf/template.hpp"

#include <cmath>
#include <numbers>

#include "frf/error.hpp"
#include "frf/hash.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "template";
constexpr double kClearance = 0.02;
constexpr const char* kSchema = "frf-template/1";

double deg(double d) { return d * std::numbers::pi / 180.0; }

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * std::numbers::pi);
  return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

std::string path_key(int id) { return "s" + std::to_string(id); }

int path_from_key(const std::string& key) {
  if (key.size() < 2 || key[0] != 's') throw Error(ErrorCode::kTemplate, kStage, "bad path key '" + key + "'");
  const int id = std::stoi(key.substr(1));
  if (id < 1 || id > kPathCount) throw Error(ErrorCode::kTemplate, kStage, "bad path key '" + key + "'");
  return id;
}

}  // namespace

const HoleCircle& TemplateSpec::hole(Hole h) const {
  auto it = holes.find(h);
  if (it == holes.end()) throw Error(ErrorCode::kTemplate, kStage, "template has no circle for " + std::string(hole_name(h)));
  return it->second;
}

Vec2 mv_point(const TemplateSpec& spec, int k) {
  const double a = spec.mv_anchor_angles[static_cast<std::size_t>(k)];
  return spec.disk_radius * Vec2(std::cos(a), std::sin(a));
}

Vec2 circle_point(const HoleCircle& c, double theta) {
  return c.center + c.radius * Vec2(std::cos(theta), std::sin(theta));
}

double circle_gap(const TemplateSpec& spec, Hole a, Hole b) {
  const auto& ca = spec.hole(a);
  const auto& cb = spec.hole(b);
  return (ca.center - cb.center).norm() - ca.radius - cb.radius;
}

void TemplateSpec::validate() const {
  if (!(disk_radius > 0.0)) throw Error(ErrorCode::kTemplate, kStage, "disk radius must be positive");
  const double clearance = kClearance * disk_radius;
  for (Hole h : kClosedHoles) {
    const auto& c = hole(h);
    const std::string name(hole_name(h));
    if (!(c.radius > 0.0)) throw Error(ErrorCode::kTemplate, kStage, name + " radius must be positive");
    if (c.ring_orientation != 1 && c.ring_orientation != -1) {
      throw Error(ErrorCode::kTemplate, kStage, name + " ring orientation must be +1 or -1");
    }
    if (!(disk_radius - c.center.norm() - c.radius >= clearance)) {
      throw Error(ErrorCode::kTemplate, kStage, name + " circle is not inside the disk with clearance");
    }
    std::vector<double> angles;
    for (const PathEnds& pe : kPaths) {
      if (pe.from != h && pe.to != h) continue;
      auto it = c.anchors.find(pe.id);
      if (it == c.anchors.end()) throw Error(ErrorCode::kTemplate, kStage, name + " lacks an anchor for " + path_key(pe.id));
      angles.push_back(wrap_angle(it->second));
    }
    if (angles.size() != c.anchors.size()) throw Error(ErrorCode::kTemplate, kStage, name + " has anchors for unrelated paths");
    for (std::size_t i = 0; i < angles.size(); ++i) {
      for (std::size_t j = i + 1; j < angles.size(); ++j) {
        if (std::abs(angles[i] - angles[j]) < 1e-9) throw Error(ErrorCode::kTemplate, kStage, name + " anchors coincide");
      }
    }
  }
  for (std::size_t i = 0; i < kClosedHoles.size(); ++i) {
    for (std::size_t j = i + 1; j < kClosedHoles.size(); ++j) {
      if (!(circle_gap(*this, kClosedHoles[i], kClosedHoles[j]) >= clearance)) {
        throw Error(ErrorCode::kTemplate, kStage,
                    std::string(hole_name(kClosedHoles[i])) + " and " + std::string(hole_name(kClosedHoles[j])) +
                        " circles overlap or are closer than the clearance");
      }
    }
  }
  if (mv_orientation != 1 && mv_orientation != -1) throw Error(ErrorCode::kTemplate, kStage, "mv orientation must be +1 or -1");
  double travelled = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double step = wrap_angle(mv_orientation * (mv_anchor_angles[static_cast<std::size_t>((k + 1) % 4)] -
                                                     mv_anchor_angles[static_cast<std::size_t>(k)]));
    if (step < 1e-9) throw Error(ErrorCode::kTemplate, kStage, "MV anchors coincide");
    travelled += step;
  }
  if (std::abs(travelled - 2.0 * std::numbers::pi) > 1e-9) {
    throw Error(ErrorCode::kTemplate, kStage, "MV anchors are not ordered along the rim");
  }
}

LayoutConfig preset_layout(std::string_view name) {
  LayoutConfig c;
  if (name == "population") return c;
  if (name == "adapted1") {
    c.name = "adapted1";
    c.inter_vein_scale = 1.3;
    c.laa_angle_deg = 90.0;
    c.approximate = true;
    return c;
  }
  if (name == "adapted2") {
    c.name = "adapted2";
    c.inter_vein_scale = 1.3;
    c.vertical_scale = 1.5;
    c.laa_angle_deg = 85.0;
    c.approximate = true;
    return c;
  }
  throw Error(ErrorCode::kTemplate, kStage, "unknown template preset '" + std::string(name) + "'");
}

TemplateSpec build_template(std::string_view preset) { return build_template(preset_layout(preset)); }

TemplateSpec build_template(const LayoutConfig& cfg) {
  for (double v : {cfg.disk_radius, cfg.lipv_radius, cfg.lspv_ratio, cfg.ripv_ratio, cfg.rspv_ratio, cfg.laa_ratio,
                   cfg.left_carina, cfg.right_carina_ratio, cfg.laa_gap_ratio, cfg.separation_ratio,
                   cfg.inter_vein_scale, cfg.vertical_scale, cfg.mv_gap_ratio}) {
    if (!(v > 0.0)) throw Error(ErrorCode::kTemplate, kStage, "layout lengths and ratios must be positive");
  }
  const double r_li = cfg.lipv_radius;
  const double r_ls = cfg.lspv_ratio * r_li;
  const double r_ri = cfg.ripv_ratio * r_li;
  const double r_rs = cfg.rspv_ratio * r_li;
  const double r_laa = cfg.laa_ratio * r_li;
  const double u = cfg.left_carina;
  const double gap_left = u * cfg.inter_vein_scale * cfg.vertical_scale;
  const double gap_right = cfg.right_carina_ratio * gap_left;
  const double gap_sep = cfg.separation_ratio * u * cfg.inter_vein_scale;
  const double gap_laa = cfg.laa_gap_ratio * u;
  const double y0 = cfg.vertical_offset;

  struct Centers {
    Vec2 li, ls, ri, rs, laa;
  };
  // Superior and inferior pairs sit gap_sep apart edge to edge, their inner edges
  // symmetric about x0; each ipsilateral pair is stacked so its edge-to-edge gap equals
  // the carina. The two conditions couple through the vertical offsets, hence the loop.
  auto place = [&](double x0) {
    Centers c;
    const double dl = gap_left + r_ls + r_li, dr = gap_right + r_rs + r_ri;
    double x_ls = 0, x_li = 0, x_rs = 0, x_ri = 0, dyl = dl, dyr = dr;
    for (int it = 0; it < 100; ++it) {
      const double dy = 0.5 * (dyr - dyl);
      const double ds = std::sqrt(std::pow(gap_sep + r_ls + r_rs, 2) - dy * dy);
      const double di = std::sqrt(std::pow(gap_sep + r_li + r_ri, 2) - dy * dy);
      const double es = 0.5 * (ds - r_ls - r_rs), ei = 0.5 * (di - r_li - r_ri);
      x_ls = x0 - es - r_ls;
      x_rs = x0 + es + r_rs;
      x_li = x0 - ei - r_li;
      x_ri = x0 + ei + r_ri;
      const double dxl = x_ls - x_li, dxr = x_rs - x_ri;
      dyl = std::sqrt(dl * dl - dxl * dxl);
      dyr = std::sqrt(dr * dr - dxr * dxr);
    }
    c.ls = {x_ls, y0 + dyl / 2};
    c.li = {x_li, y0 - dyl / 2};
    c.rs = {x_rs, y0 + dyr / 2};
    c.ri = {x_ri, y0 - dyr / 2};
    const double d = gap_laa + r_ls + r_laa, a = deg(cfg.laa_angle_deg);
    c.laa = c.ls + d * Vec2(std::cos(a), std::sin(a));
    return c;
  };
  auto rim_gap = [](const Vec2& c, double r) { return 1.0 - c.norm() - r; };
  auto imbalance = [&](double x0) {
    const Centers c = place(x0);
    const double left = 0.5 * (rim_gap(c.li, r_li) + rim_gap(c.ls, r_ls));
    const double right = 0.5 * (rim_gap(c.ri, r_ri) + rim_gap(c.rs, r_rs));
    return left - cfg.mv_gap_ratio * right;
  };
  double lo = -0.6, hi = 0.6;
  if (imbalance(lo) > 0.0 || imbalance(hi) < 0.0) {
    throw Error(ErrorCode::kTemplate, kStage, "cannot balance the left and right rim gaps");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (imbalance(mid) > 0.0 ? hi : lo) = mid;
  }
  const Centers c = place(0.5 * (lo + hi));

  TemplateSpec spec;
  spec.name = cfg.name;
  spec.disk_radius = cfg.disk_radius;
  spec.approximate = cfg.approximate;
  spec.arc_sagitta = cfg.arc_sagitta;
  spec.mv_orientation = -1;
  for (int k = 0; k < 4; ++k) spec.mv_anchor_angles[static_cast<std::size_t>(k)] = deg(cfg.mv_anchor_deg[static_cast<std::size_t>(k)]);
  const double R = cfg.disk_radius;
  spec.holes[Hole::kLIPV] = {R * c.li, R * r_li, 1, {}};
  spec.holes[Hole::kLSPV] = {R * c.ls, R * r_ls, 1, {}};
  spec.holes[Hole::kRIPV] = {R * c.ri, R * r_ri, 1, {}};
  spec.holes[Hole::kRSPV] = {R * c.rs, R * r_rs, 1, {}};
  spec.holes[Hole::kLAA] = {R * c.laa, R * r_laa, 1, {}};
  for (const PathEnds& pe : kPaths) {
    spec.path_style[static_cast<std::size_t>(pe.id - 1)] = pe.to == Hole::kMV ? PathStyle::kArc : PathStyle::kStraight;
    auto& a = spec.holes[pe.from];
    const Vec2 partner = pe.to == Hole::kMV ? mv_point(spec, pe.mv_seed) : spec.holes[pe.to].center;
    a.anchors[pe.id] = std::atan2(partner.y() - a.center.y(), partner.x() - a.center.x());
    if (pe.to != Hole::kMV) {
      auto& b = spec.holes[pe.to];
      b.anchors[pe.id] = std::atan2(a.center.y() - b.center.y(), a.center.x() - b.center.x());
    }
  }
  spec.validate();
  return spec;
}

TemplateSpec scaled(const TemplateSpec& spec, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidArgument, kStage, "scale must be positive");
  TemplateSpec out = spec;
  out.disk_radius *= k;
  for (auto& [h, c] : out.holes) {
    c.center *= k;
    c.radius *= k;
  }
  return out;
}

nlohmann::json to_json(const TemplateSpec& spec) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["name"] = spec.name;
  j["approximate"] = spec.approximate;
  j["disk_radius"] = spec.disk_radius;
  j["mv_orientation"] = spec.mv_orientation;
  j["mv_anchor_angles"] = spec.mv_anchor_angles;
  j["arc_sagitta"] = spec.arc_sagitta;
  nlohmann::json styles = nlohmann::json::object();
  for (int id = 1; id <= kPathCount; ++id) {
    styles[path_key(id)] = spec.path_style[static_cast<std::size_t>(id - 1)] == PathStyle::kArc ? "arc" : "straight";
  }
  j["path_style"] = styles;
  nlohmann::json holes = nlohmann::json::object();
  for (const auto& [h, c] : spec.holes) {
    nlohmann::json anchors = nlohmann::json::object();
    for (const auto& [id, a] : c.anchors) anchors[path_key(id)] = a;
    holes[std::string(hole_name(h))] = {{"center", {c.center.x(), c.center.y()}},
                                        {"radius", c.radius},
                                        {"ring_orientation", c.ring_orientation},
                                        {"anchors", anchors}};
  }
  j["holes"] = holes;
  return j;
}

TemplateSpec template_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema", std::string()) != kSchema) {
      throw Error(ErrorCode::kTemplate, kStage, "template schema must be \"" + std::string(kSchema) + "\"");
    }
    TemplateSpec spec;
    spec.name = j.value("name", std::string("custom"));
    spec.approximate = j.value("approximate", false);
    spec.disk_radius = j.at("disk_radius").get<double>();
    spec.mv_orientation = j.at("mv_orientation").get<int>();
    spec.mv_anchor_angles = j.at("mv_anchor_angles").get<std::array<double, 4>>();
    spec.arc_sagitta = j.value("arc_sagitta", 0.15);
    for (auto& s : spec.path_style) s = PathStyle::kStraight;
    if (j.contains("path_style")) {
      for (const auto& [key, value] : j.at("path_style").items()) {
        const std::string style = value.get<std::string>();
        if (style != "arc" && style != "straight") throw Error(ErrorCode::kTemplate, kStage, "unknown path style '" + style + "'");
        spec.path_style[static_cast<std::size_t>(path_from_key(key) - 1)] = style == "arc" ? PathStyle::kArc : PathStyle::kStraight;
      }
    }
    for (const auto& [key, value] : j.at("holes").items()) {
      const auto h = hole_from_name(key);
      if (!h || *h == Hole::kMV) throw Error(ErrorCode::kTemplate, kStage, "unknown hole '" + key + "'");
      HoleCircle c;
      const auto center = value.at("center").get<std::array<double, 2>>();
      c.center = {center[0], center[1]};
      c.radius = value.at("radius").get<double>();
      c.ring_orientation = value.value("ring_orientation", 1);
      for (const auto& [pk, pv] : value.at("anchors").items()) c.anchors[path_from_key(pk)] = pv.get<double>();
      spec.holes[*h] = c;
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, kStage, std::string("malformed template: ") + e.what());
  }
}

std::string template_hash(const TemplateSpec& spec) { return content_hash(to_json(spec).dump()); }

}  // namespace frf
