#include "job.hpp"

#include <cstdlib>

#include "frf/error.hpp"
#include "frf/json_io.hpp"
#include "frf/mesh_io.hpp"
#include "frf/texture.hpp"
#include "frf/topology.hpp"

namespace frf::cli {

namespace {

constexpr const char* kFlatTitle = "frf flat template=";

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

WeightMode parse_weighting(const std::string& name) {
  if (name == "boundary-rows") return WeightMode::kBoundaryRows;
  if (name == "uniform") return WeightMode::kUniform;
  throw ConfigError("unknown weighting '" + name + "' (boundary-rows | uniform)");
}

KktBackend parse_backend(const std::string& name) {
  if (name == "condensed-ldlt") return KktBackend::kCondensed;
  if (name == "sparse-lu") return KktBackend::kSparseLu;
  throw ConfigError("unknown backend '" + name + "' (condensed-ldlt | sparse-lu)");
}

JobConfig job_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "input") {
        c.input = resolve(base_dir, value.get<std::string>());
      } else if (key == "seeds") {
        if (value.is_string()) {
          c.seeds_path = resolve(base_dir, value.get<std::string>());
        } else {
          c.seeds_inline = seeds_from_json(value);
        }
      } else if (key == "template") {
        const std::string ref = value.get<std::string>();
        const std::filesystem::path p = resolve(base_dir, ref);
        c.template_ref = std::filesystem::exists(p) ? p.string() : ref;
      } else if (key == "w") {
        c.w = value.get<double>();
      } else if (key == "weighting") {
        c.weighting = parse_weighting(value.get<std::string>());
      } else if (key == "backend") {
        c.backend = parse_backend(value.get<std::string>());
      } else if (key == "refine") {
        c.refine = value.get<bool>();
      } else if (key == "output") {
        c.output_dir = resolve(base_dir, value.get<std::string>());
      } else if (key == "metrics") {
        c.metrics = value.get<bool>();
      } else if (key == "textures") {
        c.textures = value.get<bool>();
      } else if (key == "report") {
        c.report = value.get<bool>();
      } else if (key == "stripe_band") {
        c.stripe_band = value.get<double>();
      } else if (key == "spot_count") {
        c.spot_count = value.get<int>();
      } else if (key == "spot_radius") {
        c.spot_radius = value.get<double>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

nlohmann::json to_json(const JobConfig& c) {
  nlohmann::json j{{"input", c.input.string()},
                   {"template", c.template_ref},
                   {"w", c.w},
                   {"weighting", c.weighting == WeightMode::kUniform ? "uniform" : "boundary-rows"},
                   {"backend", c.backend == KktBackend::kSparseLu ? "sparse-lu" : "condensed-ldlt"},
                   {"refine", c.refine},
                   {"output", c.output_dir.string()},
                   {"metrics", c.metrics},
                   {"textures", c.textures},
                   {"report", c.report},
                   {"stripe_band", c.stripe_band},
                   {"spot_count", c.spot_count},
                   {"spot_radius", c.spot_radius}};
  if (c.seeds_inline) {
    j["seeds"] = frf::to_json(*c.seeds_inline);
  } else {
    j["seeds"] = c.seeds_path.string();
  }
  return j;
}

void validate(const JobConfig& c) {
  if (!(c.w > 0.0)) throw ConfigError("w must be positive");
  if (c.input.empty()) throw ConfigError("no input mesh given");
  if (!std::filesystem::exists(c.input)) throw ConfigError("input mesh not found: " + c.input.string());
  if (!c.seeds_inline) {
    if (c.seeds_path.empty()) throw ConfigError("no seeds given");
    if (!std::filesystem::exists(c.seeds_path)) throw ConfigError("seeds file not found: " + c.seeds_path.string());
  }
  if (c.textures) {
    if (!(c.stripe_band > 0.0)) throw ConfigError("stripe_band must be positive");
    if (c.spot_count < 1) throw ConfigError("spot_count must be at least 1");
    if (!(c.spot_radius > 0.0)) throw ConfigError("spot_radius must be positive");
  }
}

TemplateSpec resolve_template(const std::string& ref) {
  if (ref.empty()) throw ConfigError("empty template reference");
  const std::filesystem::path direct(ref);
  if (std::filesystem::is_regular_file(direct)) return template_from_json(read_json(direct));
  if (const char* dir = std::getenv("FRF_TEMPLATE_DIR"); dir != nullptr && *dir != '\0') {
    const std::filesystem::path p = std::filesystem::path(dir) / (ref + ".json");
    if (std::filesystem::is_regular_file(p)) return template_from_json(read_json(p));
  }
  if (ref == "population" || ref == "adapted1" || ref == "adapted2") return build_template(ref);
  throw ConfigError("unknown template '" + ref + "'");
}

SeedSet load_seeds(const JobConfig& c) {
  if (c.seeds_inline) return *c.seeds_inline;
  return seeds_from_json(read_json(c.seeds_path));
}

TriMesh load_surface(const std::filesystem::path& path, int* flipped) {
  OrientationRepair r = orient_consistently(load_mesh(path));
  if (flipped) *flipped = r.flipped_faces;
  return std::move(r.mesh);
}

void save_flat(const FlatMesh& flat, const std::filesystem::path& path) {
  save_mesh(flat.to_trimesh(), path, MeshFormat::kVtk, kFlatTitle + flat.template_hash);
}

FlatMesh load_flat(const std::filesystem::path& path) {
  std::string title;
  const TriMesh m = load_mesh(path, {MeshFormat::kVtk, false}, &title);
  const std::string prefix(kFlatTitle);
  if (title.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::kParse, "load", "'" + path.string() + "' is not a flattened map");
  }
  return FlatMesh::from_trimesh(m, title.substr(prefix.size()));
}

FlattenArtifacts run_flatten(const TriMesh& input, const SeedSet& seeds, const TemplateSpec& spec, const JobConfig& c) {
  TriMesh mesh = input;
  if (c.textures) {
    mesh = mesh.with_channel("texture_stripes", texture_stripes(mesh, 0, c.stripe_band));
    mesh = mesh.with_channel("texture_spots", texture_spots(mesh, c.spot_count, c.spot_radius).values);
  }
  PipelineOptions options;
  options.solve = {c.w, c.weighting, c.backend};
  options.refine = c.refine;
  FlattenArtifacts out{flatten_pipeline(mesh, seeds, spec, options), {}, std::nullopt};
  out.solve_report = to_json(out.result.report);
  if (c.metrics) {
    out.distortion = distortion_report(out.result.division.opened.mesh, out.result.flat, out.result.report.expected_face_sign);
  }
  return out;
}

void write_artifacts(const FlattenArtifacts& a, const JobConfig& c) {
  std::filesystem::create_directories(c.output_dir);
  save_flat(a.result.flat, c.output_dir / "flat.vtk");
  if (c.report) write_json(a.solve_report, c.output_dir / "solve_report.json");
  if (a.distortion) {
    write_json(to_json(*a.distortion), c.output_dir / "distortion_report.json");
    write_distortion_csv(*a.distortion, c.output_dir / "distortion.csv");
  }
}

}  // namespace frf::cli
