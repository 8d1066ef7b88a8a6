#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "frf/distortion.hpp"
#include "frf/pipeline.hpp"
#include "frf/template.hpp"

namespace frf::cli {

// Bad configuration or usage; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JobConfig {
  std::filesystem::path input;
  std::filesystem::path seeds_path;
  std::optional<SeedSet> seeds_inline;
  std::string template_ref = "population";  // preset name or path to a template JSON
  double w = 1000.0;
  WeightMode weighting = WeightMode::kBoundaryRows;
  KktBackend backend = KktBackend::kCondensed;
  bool refine = true;
  std::filesystem::path output_dir = "frf-out";
  bool metrics = true;
  bool textures = false;
  bool report = true;
  double stripe_band = 5.0;
  int spot_count = 100;
  double spot_radius = 2.0;
};

// Relative paths resolve against `base_dir`. Unknown keys are rejected.
JobConfig job_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const JobConfig& config);

// Checks w and that every referenced file exists.
void validate(const JobConfig& config);

WeightMode parse_weighting(const std::string& name);
KktBackend parse_backend(const std::string& name);

// Existing file path, then $FRF_TEMPLATE_DIR/<ref>.json, then the built-in presets.
TemplateSpec resolve_template(const std::string& ref);

SeedSet load_seeds(const JobConfig& config);

// Loads a 3D surface and makes its winding consistent; `flipped` receives the number of
// faces turned.
TriMesh load_surface(const std::filesystem::path& path, int* flipped = nullptr);

// Flat meshes are VTK files whose title carries the template hash.
void save_flat(const FlatMesh& flat, const std::filesystem::path& path);
FlatMesh load_flat(const std::filesystem::path& path);

struct FlattenArtifacts {
  PipelineResult result;
  nlohmann::json solve_report;
  std::optional<DistortionReport> distortion;
};

// Adds texture channels when asked, runs the pipeline and the metrics.
FlattenArtifacts run_flatten(const TriMesh& mesh, const SeedSet& seeds, const TemplateSpec& spec, const JobConfig& config);

// flat.vtk, solve_report.json, distortion_report.json (+ distortion.csv).
void write_artifacts(const FlattenArtifacts& artifacts, const JobConfig& config);

}  // namespace frf::cli
