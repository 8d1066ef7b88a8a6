#pragma once

#include <filesystem>
#include <string>

#include "frf/mesh.hpp"

namespace frf {

enum class MeshFormat { kAuto, kObj, kVtk };

struct LoadOptions {
  MeshFormat format = MeshFormat::kAuto;
  bool check_area = true;
};

// The provenance column travels as a channel of this name in both formats.
inline constexpr const char* kProvenanceChannel = "provenance_id";

// OBJ: v/f records plus an optional sidecar "<stem>.channels.csv" with rows
// "vertexId,channel,value". VTK: legacy ASCII POLYDATA, POINT_DATA and CELL_DATA
// arrays (FIELD or SCALARS) become vertex and face channels.
TriMesh load_mesh(const std::filesystem::path& path, const LoadOptions& options = {},
                  std::string* title = nullptr);

// Coordinates and channel values are written with 17 significant digits.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path,
               MeshFormat format = MeshFormat::kAuto, const std::string& title = "frf mesh");

std::filesystem::path channels_sidecar(const std::filesystem::path& obj_path);

}  // namespace frf
