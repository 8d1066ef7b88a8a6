#include "frf/json_io.hpp"

#include <fstream>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "json";

nlohmann::json channels_json(const Channels& c) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, values] : c) out[name] = values;
  return out;
}

}  // namespace

nlohmann::json to_json(const SeedSet& seeds) {
  nlohmann::json j;
  for (const auto& [h, v] : seeds.holes) j[std::string(hole_name(h))] = v;
  j["MV"] = seeds.mv;
  return j;
}

SeedSet seeds_from_json(const nlohmann::json& j) {
  SeedSet s;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidSeeds, kStage, "seed set must be a JSON object");
    for (Hole h : kClosedHoles) {
      const std::string key(hole_name(h));
      if (!j.contains(key)) throw Error(ErrorCode::kInvalidSeeds, kStage, "seed set lacks " + key);
      s.holes[h] = j.at(key).get<int>();
    }
    const auto mv = j.at("MV").get<std::vector<int>>();
    if (mv.size() != 4) throw Error(ErrorCode::kInvalidSeeds, kStage, "MV needs exactly 4 seeds");
    for (std::size_t k = 0; k < 4; ++k) s.mv[k] = mv[k];
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSeeds, kStage, std::string("malformed seed set: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const TriMesh& mesh) {
  nlohmann::json v = nlohmann::json::array();
  for (const Vec3& p : mesh.vertices()) v.push_back({p.x(), p.y(), p.z()});
  return {{"vertices", v},
          {"faces", mesh.faces()},
          {"provenance", mesh.provenance()},
          {"channels", channels_json(mesh.channels())},
          {"face_channels", channels_json(mesh.face_channels())}};
}

nlohmann::json to_json(const FlatMesh& flat) {
  nlohmann::json v = nlohmann::json::array();
  for (const Vec2& p : flat.points) v.push_back({p.x(), p.y()});
  return {{"points", v},
          {"faces", flat.faces},
          {"provenance", flat.provenance},
          {"channels", channels_json(flat.channels)},
          {"face_channels", channels_json(flat.face_channels)},
          {"template_hash", flat.template_hash}};
}

nlohmann::json division_to_json(const DivisionResult& d) {
  nlohmann::json paths = nlohmann::json::object();
  for (int id = 1; id <= kPathCount; ++id) paths["s" + std::to_string(id)] = d.path(id);
  nlohmann::json ips = nlohmann::json::object();
  for (int h = 0; h < kHoleCount; ++h) ips[std::string(hole_name(static_cast<Hole>(h)))] = d.intersections[static_cast<std::size_t>(h)];
  return {{"paths", paths}, {"region", d.region}, {"intersections", ips}};
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kStage, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, kStage, "'" + path.string() + "': " + e.what());
  }
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, kStage, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace frf
