#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <CLI11.hpp>
#include "frf/distortion.hpp"
#include "frf/error.hpp"
#include "frf/fixtures.hpp"
#include "frf/json_io.hpp"
#include "frf/mesh_io.hpp"
#include "frf/texture.hpp"
#include "frf/transfer.hpp"
#include "job.hpp"
#include "service.hpp"

// After Eigen: <resolv.h> defines _res.
#include <httplib.h>

namespace frf::cli {

namespace {

TriMesh load_input(const std::filesystem::path& path, std::ostream& err) {
  int flipped = 0;
  TriMesh mesh = load_surface(path, &flipped);
  if (flipped > 0) err << "note: flipped " << flipped << " faces of " << path.string() << " to a consistent winding\n";
  return mesh;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Fills options the command line left unset from a JSON object keyed by long option name.
void apply_config(CLI::App& app, const std::string& path) {
  if (path.empty()) return;
  nlohmann::json j;
  try {
    j = read_json(path);
  } catch (const Error& e) {
    throw ConfigError(e.message());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw ConfigError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
    opt->run_callback();
  }
}

SeedSet read_seeds(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("seeds file not found: " + path);
  return seeds_from_json(read_json(path));
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("no " + what + " given");
  if (!std::filesystem::exists(path)) throw ConfigError(what + " not found: " + path);
}

struct FlattenFlags {
  std::string config, input, seeds, templ, weighting, backend, output;
  double w = 0.0;
  bool no_refine = false, metrics = false, no_metrics = false, textures = false, no_report = false;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regional flattening of left-atrial surface meshes onto a disk template", "frf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "frf 0.1.0");

  // flatten
  FlattenFlags ff;
  auto* flatten = app.add_subcommand("flatten", "Flatten a clipped atrium onto the template disk");
  flatten->add_option("--config", ff.config, "JSON job config; flags override its keys");
  auto* o_input = flatten->add_option("-i,--input", ff.input, "Input mesh (.vtk or .obj)");
  auto* o_seeds = flatten->add_option("--seeds", ff.seeds, "Seed set JSON");
  auto* o_templ = flatten->add_option("--template", ff.templ, "Template preset name or JSON path");
  auto* o_w = flatten->add_option("--w", ff.w, "Boundary weight");
  auto* o_weighting = flatten->add_option("--weighting", ff.weighting, "boundary-rows | uniform");
  auto* o_backend = flatten->add_option("--backend", ff.backend, "condensed-ldlt | sparse-lu");
  auto* o_output = flatten->add_option("-o,--output", ff.output, "Output directory");
  flatten->add_flag("--no-refine", ff.no_refine, "Skip boundary refinement");
  flatten->add_flag("--metrics", ff.metrics, "Write the distortion report");
  flatten->add_flag("--no-metrics", ff.no_metrics, "Skip the distortion report");
  flatten->add_flag("--textures", ff.textures, "Add stripe and spot texture channels");
  flatten->add_flag("--no-report", ff.no_report, "Skip solve_report.json");

  // divide
  std::string d_config, d_input, d_seeds, d_output = "frf-out";
  auto* divide = app.add_subcommand("divide", "Compute the dividing paths and regions");
  divide->add_option("--config", d_config, "JSON config");
  divide->add_option("-i,--input", d_input, "Input mesh");
  divide->add_option("--seeds", d_seeds, "Seed set JSON");
  divide->add_option("-o,--output", d_output, "Output directory");

  // metrics
  std::string m_config, m_mesh3d, m_flat, m_output = "frf-out";
  int m_bins = kHistogramBins;
  auto* metrics = app.add_subcommand("metrics", "Distortion indices of a flattened map");
  metrics->add_option("--config", m_config, "JSON config");
  metrics->add_option("--mesh3d", m_mesh3d, "Source 3D mesh");
  metrics->add_option("--flat", m_flat, "Flattened map (.vtk)");
  metrics->add_option("--bins", m_bins, "Histogram bins");
  metrics->add_option("-o,--output", m_output, "Output directory");

  // texture
  std::string t_config, t_input, t_output;
  double t_stripes = 0.0, t_radius = 2.0;
  int t_spots = 0, t_seed = 0;
  auto* texture = app.add_subcommand("texture", "Add synthetic texture channels to a mesh");
  texture->add_option("--config", t_config, "JSON config");
  texture->add_option("-i,--input", t_input, "Input mesh");
  texture->add_option("-o,--output", t_output, "Output mesh");
  texture->add_option("--stripes", t_stripes, "Stripe band width");
  texture->add_option("--seed", t_seed, "Stripe origin vertex");
  texture->add_option("--spots", t_spots, "Number of spots");
  texture->add_option("--radius", t_radius, "Spot radius");

  // template
  std::string tp_config, tp_name = "population", tp_output;
  bool tp_list = false;
  auto* templ = app.add_subcommand("template", "Print or export a template");
  templ->add_option("--config", tp_config, "JSON config");
  templ->add_option("name", tp_name, "Preset name or JSON path");
  templ->add_option("-o,--output", tp_output, "Write the template JSON here");
  templ->add_flag("--list", tp_list, "List presets with their hashes");

  // transfer
  auto* transfer = app.add_subcommand("transfer", "Move parcellations and channels between maps");
  transfer->require_subcommand(1);
  std::string p_config, p_ref, p_template = "population", p_preset = "per-vein", p_output = "parcellation.json";
  double p_width = 1.5;
  auto* parcellate = transfer->add_subcommand("parcellate", "Annulus parcellation on a reference map");
  parcellate->add_option("--config", p_config, "JSON config");
  parcellate->add_option("--ref", p_ref, "Reference flattened map");
  parcellate->add_option("--template", p_template, "Template the map was built with");
  parcellate->add_option("--preset", p_preset, "per-vein | ipsilateral");
  parcellate->add_option("--width", p_width, "Annulus width as a multiple of the hole radius");
  parcellate->add_option("-o,--output", p_output, "Parcellation JSON");
  std::string mp_config, mp_ref, mp_parc, mp_target, mp_source, mp_output = "frf-out";
  auto* map = transfer->add_subcommand("map", "Map a parcellation onto another flattened map");
  map->add_option("--config", mp_config, "JSON config");
  map->add_option("--ref", mp_ref, "Reference flattened map");
  map->add_option("--parcellation", mp_parc, "Parcellation JSON");
  map->add_option("--target", mp_target, "Target flattened map");
  map->add_option("--source", mp_source, "Target's 3D mesh, to lift the codes");
  map->add_option("-o,--output", mp_output, "Output directory");
  std::string c_config, c_a, c_b, c_cha, c_chb, c_output = "pairs.csv";
  auto* compare = transfer->add_subcommand("compare", "Pair a channel of one map with a channel of another");
  compare->add_option("--config", c_config, "JSON config");
  compare->add_option("--a", c_a, "First flattened map");
  compare->add_option("--channel-a", c_cha, "Channel of the first map");
  compare->add_option("--b", c_b, "Second flattened map");
  compare->add_option("--channel-b", c_chb, "Channel of the second map");
  compare->add_option("-o,--output", c_output, "Paired CSV");

  // serve
  std::string s_config, s_host = "127.0.0.1", s_mesh_dir = ".", s_static;
  int s_port = 8080;
  auto* serve = app.add_subcommand("serve", "Local HTTP service");
  serve->add_option("--config", s_config, "JSON config");
  serve->add_option("--host", s_host, "Bind address");
  serve->add_option("--port", s_port, "Port");
  serve->add_option("--mesh-dir", s_mesh_dir, "Directory of <id>.vtk / <id>.obj meshes");
  serve->add_option("--static", s_static, "Directory of UI assets served at /");

  // fixture
  std::string f_config, f_template = "population", f_output = "fixture.vtk", f_seeds = "seeds.json";
  int f_frequency = 24;
  double f_cap = kMitralCapAngle;
  auto* fixture = app.add_subcommand("fixture", "Write the synthetic sphere-with-holes atrium and its seeds");
  fixture->add_option("--config", f_config, "JSON config");
  fixture->add_option("--frequency", f_frequency, "Icosphere subdivision frequency");
  fixture->add_option("--template", f_template, "Template whose circles are cut out");
  fixture->add_option("--mitral-cap", f_cap, "Polar angle of the mitral cap");
  fixture->add_option("-o,--output", f_output, "Mesh path");
  fixture->add_option("--seeds", f_seeds, "Seed set path");

  std::vector<const char*> argv{"frf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "frf 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (flatten->parsed()) {
      JobConfig job;
      if (!ff.config.empty()) {
        if (!std::filesystem::exists(ff.config)) throw ConfigError("config not found: " + ff.config);
        const std::filesystem::path base = std::filesystem::path(ff.config).parent_path();
        job = job_from_json(read_json(ff.config), base);
      }
      if (o_input->count()) job.input = ff.input;
      if (o_seeds->count()) {
        job.seeds_path = ff.seeds;
        job.seeds_inline.reset();
      }
      if (o_templ->count()) job.template_ref = ff.templ;
      if (o_w->count()) job.w = ff.w;
      if (o_weighting->count()) job.weighting = parse_weighting(ff.weighting);
      if (o_backend->count()) job.backend = parse_backend(ff.backend);
      if (o_output->count()) job.output_dir = ff.output;
      if (ff.no_refine) job.refine = false;
      if (ff.metrics) job.metrics = true;
      if (ff.no_metrics) job.metrics = false;
      if (ff.textures) job.textures = true;
      if (ff.no_report) job.report = false;
      validate(job);
      const TemplateSpec spec = resolve_template(job.template_ref);
      const SeedSet seeds = load_seeds(job);
      const TriMesh mesh = load_input(job.input, err);
      const auto t0 = std::chrono::steady_clock::now();
      const FlattenArtifacts a = run_flatten(mesh, seeds, spec, job);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      write_artifacts(a, job);
      const SolveReport& r = a.result.report;
      out << "flattened " << r.vertex_count << " vertices / " << r.face_count << " faces in " << fmt(ms) << " ms\n"
          << "  constraint error " << fmt(r.constraint_error) << ", boundary deviation " << fmt(r.boundary_deviation_before)
          << " -> " << fmt(r.boundary_deviation_after) << ", flipped " << r.flipped_before << " -> " << r.flipped_after << "\n"
          << "  wrote " << job.output_dir.string() << "\n";
    } else if (divide->parsed()) {
      apply_config(*divide, d_config);
      require_file(d_input, "input mesh");
      const SeedSet seeds = read_seeds(d_seeds);
      const TriMesh mesh = load_input(d_input, err);
      const DivisionStage d = run_division(mesh, seeds);
      std::filesystem::create_directories(d_output);
      write_json(division_to_json(d.opened.division), std::filesystem::path(d_output) / "division.json");
      std::vector<double> region(d.opened.division.region.begin(), d.opened.division.region.end());
      save_mesh(d.opened.mesh.with_face_channel("region", std::move(region)), std::filesystem::path(d_output) / "divided.vtk",
                MeshFormat::kVtk);
      out << "divided into " << kRegionCount << " regions; wrote " << d_output << "\n";
    } else if (metrics->parsed()) {
      apply_config(*metrics, m_config);
      require_file(m_mesh3d, "3D mesh");
      require_file(m_flat, "flattened map");
      const TriMesh mesh = load_input(m_mesh3d, err);
      const FlatMesh flat = load_flat(m_flat);
      const DistortionReport r = distortion_report(mesh, flat, 0, m_bins);
      std::filesystem::create_directories(m_output);
      write_json(to_json(r), std::filesystem::path(m_output) / "distortion_report.json");
      write_distortion_csv(r, std::filesystem::path(m_output) / "distortion.csv");
      out << "alpha weighted mean " << fmt(r.alpha_summary.weighted_mean) << ", entropy " << fmt(r.alpha_histogram.entropy)
          << "; beta median " << fmt(r.beta_summary.median) << ", entropy " << fmt(r.beta_histogram.entropy) << "; flipped "
          << r.flipped_count << "\n";
    } else if (texture->parsed()) {
      apply_config(*texture, t_config);
      require_file(t_input, "input mesh");
      if (t_output.empty()) throw ConfigError("no output mesh given");
      if (t_stripes <= 0.0 && t_spots <= 0) throw ConfigError("give --stripes and/or --spots");
      TriMesh mesh = load_mesh(t_input);
      if (t_stripes > 0.0) mesh = mesh.with_channel("texture_stripes", texture_stripes(mesh, t_seed, t_stripes));
      if (t_spots > 0) {
        const SpotTexture s = texture_spots(mesh, t_spots, t_radius);
        if (s.overlapping) err << "warning: spots overlap (closest centres " << fmt(s.min_center_distance) << " apart)\n";
        mesh = mesh.with_channel("texture_spots", s.values);
      }
      save_mesh(mesh, t_output);
      out << "wrote " << t_output << "\n";
    } else if (templ->parsed()) {
      apply_config(*templ, tp_config);
      if (tp_list) {
        for (const char* name : {"population", "adapted1", "adapted2"}) {
          const TemplateSpec t = resolve_template(name);
          out << name << " " << template_hash(t) << (t.approximate ? " (approximate)" : "") << "\n";
        }
      } else {
        const TemplateSpec t = resolve_template(tp_name);
        if (tp_output.empty()) {
          out << to_json(t).dump(2) << "\n";
        } else {
          write_json(to_json(t), tp_output);
          out << "wrote " << tp_output << " (" << template_hash(t) << ")\n";
        }
      }
    } else if (parcellate->parsed()) {
      apply_config(*parcellate, p_config);
      require_file(p_ref, "reference map");
      AnnulusPreset preset;
      if (p_preset == "per-vein") {
        preset = AnnulusPreset::kPerVein;
      } else if (p_preset == "ipsilateral") {
        preset = AnnulusPreset::kIpsilateral;
      } else {
        throw ConfigError("unknown parcellation preset '" + p_preset + "' (per-vein | ipsilateral)");
      }
      const Parcellation2D p = annulus_parcellation(load_flat(p_ref), resolve_template(p_template), preset, p_width);
      write_json(to_json(p), p_output);
      out << "wrote " << p_output << "\n";
    } else if (map->parsed()) {
      apply_config(*map, mp_config);
      require_file(mp_ref, "reference map");
      require_file(mp_parc, "parcellation");
      require_file(mp_target, "target map");
      const FlatMesh ref = load_flat(mp_ref);
      FlatMesh target = load_flat(mp_target);
      const Parcellation2D p = parcellation_from_json(read_json(mp_parc));
      const std::vector<int> codes = map_parcellation(ref, p, target);
      std::filesystem::create_directories(mp_output);
      target.channels["parcel"] = std::vector<double>(codes.begin(), codes.end());
      save_flat(target, std::filesystem::path(mp_output) / "mapped_flat.vtk");
      if (!mp_source.empty()) {
        require_file(mp_source, "source mesh");
        const TriMesh source = load_mesh(mp_source);
        const std::vector<int> lifted = lift_to_3d(target, codes, source);
        save_mesh(source.with_channel("parcel", std::vector<double>(lifted.begin(), lifted.end())),
                  std::filesystem::path(mp_output) / "mapped_3d.vtk", MeshFormat::kVtk);
      }
      out << "mapped " << codes.size() << " vertices; wrote " << mp_output << "\n";
    } else if (compare->parsed()) {
      apply_config(*compare, c_config);
      require_file(c_a, "map A");
      require_file(c_b, "map B");
      const auto pairs = compare_maps(load_flat(c_a), c_cha, load_flat(c_b), c_chb);
      write_pairs_csv(pairs, c_output);
      out << "wrote " << pairs.size() << " pairs to " << c_output << "\n";
    } else if (serve->parsed()) {
      apply_config(*serve, s_config);
      if (!std::filesystem::is_directory(s_mesh_dir)) throw ConfigError("mesh directory not found: " + s_mesh_dir);
      Service service({s_mesh_dir, s_static});
      httplib::Server server;
      service.mount(server);
      out << "listening on http://" << s_host << ":" << s_port << std::endl;
      if (!server.listen(s_host, s_port)) throw ConfigError("cannot listen on " + s_host + ":" + std::to_string(s_port));
    } else if (fixture->parsed()) {
      apply_config(*fixture, f_config);
      const AtriumFixture fx = sphere_with_holes(f_frequency, resolve_template(f_template), 25.0, f_cap);
      save_mesh(fx.mesh, f_output);
      write_json(to_json(fx.seeds), f_seeds);
      out << "wrote " << f_output << " (" << fx.mesh.vertex_count() << " vertices, " << fx.mesh.face_count() << " faces) and "
          << f_seeds << "\n";
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error [" << e.stage() << "] " << e.message();
    if (e.vertex()) err << " (vertex " << *e.vertex() << ")";
    err << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace frf::cli
