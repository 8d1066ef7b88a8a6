#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "frf/division.hpp"
#include "frf/flatten.hpp"
#include "frf/mesh.hpp"

namespace frf {

// {"LIPV": v, "LSPV": v, "RIPV": v, "RSPV": v, "LAA": v, "MV": [v1, v2, v3, v4]}
nlohmann::json to_json(const SeedSet& seeds);
SeedSet seeds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TriMesh& mesh);
nlohmann::json to_json(const FlatMesh& flat);
nlohmann::json division_to_json(const DivisionResult& division);

nlohmann::json read_json(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace frf
