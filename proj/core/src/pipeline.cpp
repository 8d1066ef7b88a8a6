#include "frf/pipeline.hpp"

#include <chrono>

#include "frf/error.hpp"

namespace frf {

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.retagged(name);
  }
}

}  // namespace

nlohmann::json to_json(const SolveReport& r) {
  return {
      {"vertex_count", r.vertex_count},
      {"face_count", r.face_count},
      {"boundary_count", r.boundary_count},
      {"regional_count", r.regional_count},
      {"w", r.w},
      {"weighting", r.weighting == WeightMode::kUniform ? "uniform" : "boundary-rows"},
      {"backend", r.backend == KktBackend::kSparseLu ? "sparse-lu" : "condensed-ldlt"},
      {"kkt_residual", r.kkt_residual},
      {"refine_residual", r.refine_residual},
      {"constraint_error", r.constraint_error},
      {"boundary_deviation_before", r.boundary_deviation_before},
      {"boundary_deviation_after", r.boundary_deviation_after},
      {"expected_face_sign", r.expected_face_sign},
      {"flipped_before", r.flipped_before},
      {"flipped_after", r.flipped_after},
  };
}

DivisionStage run_division(const TriMesh& clipped, const SeedSet& seeds) {
  DivisionStage out;
  out.boundary = stage("boundary", [&] { return label_boundary(clipped, seeds); });
  out.closed = stage("close-holes", [&] { return close_holes(clipped, out.boundary); });
  out.initial = stage("divide", [&] { return divide(out.closed, out.boundary, seeds); });
  const OpenedDivision opened = stage("open", [&] { return project_and_open(out.closed, out.initial, out.boundary); });
  out.opened = stage("subcontours", [&] { return redistribute(opened, out.boundary); });
  return out;
}

PipelineResult flatten_pipeline(const TriMesh& clipped, const SeedSet& seeds, const TemplateSpec& spec,
                                const PipelineOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  stage("template", [&] {
    spec.validate();
    return 0;
  });
  PipelineResult out;
  out.division = run_division(clipped, seeds);
  const TriMesh& mesh = out.division.opened.mesh;
  out.constraints = stage("targets", [&] { return target_coordinates(spec, out.division.opened, out.division.boundary); });

  const ConstrainedSolution solved = stage("solve", [&] {
    const SparseLaplacian lap = cotangent_laplacian(mesh);
    const SparseLaplacian lmod = modify_laplacian(lap, out.division.opened.boundary_indices);
    return solve_constrained(lmod, out.constraints, options.solve);
  });
  out.initial_points = solved.points;

  SolveReport& r = out.report;
  r.vertex_count = mesh.vertex_count();
  r.face_count = mesh.face_count();
  r.boundary_count = static_cast<int>(out.constraints.boundary.size());
  r.regional_count = static_cast<int>(out.constraints.regional.size());
  r.w = options.solve.w;
  r.weighting = options.solve.weighting;
  r.backend = options.solve.backend;
  r.kkt_residual = solved.kkt_residual;
  r.constraint_error = solved.constraint_error;
  r.expected_face_sign = out.division.boundary.winding * spec.mv_orientation;
  r.boundary_deviation_before = max_deviation(solved.points, out.constraints.boundary);
  r.flipped_before = count_flipped(solved.points, mesh.faces(), r.expected_face_sign);

  std::vector<Vec2> points = solved.points;
  if (options.refine) {
    const RefinedSolution refined = stage("refine", [&] { return refine_boundary(solved.points, mesh.faces(), out.constraints.boundary); });
    points = refined.points;
    r.refine_residual = refined.residual;
  }
  r.boundary_deviation_after = max_deviation(points, out.constraints.boundary);
  r.flipped_after = count_flipped(points, mesh.faces(), r.expected_face_sign);

  FlatMesh& flat = out.flat;
  flat.points = std::move(points);
  flat.faces = mesh.faces();
  flat.provenance = mesh.provenance();
  flat.channels = mesh.channels();
  flat.face_channels = mesh.face_channels();
  std::vector<double> region(out.division.opened.division.region.begin(), out.division.opened.division.region.end());
  flat.face_channels["region"] = std::move(region);
  std::vector<double> flag(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
  for (const Target& t : out.constraints.regional) flag[static_cast<std::size_t>(t.vertex)] = 2.0;
  for (const Target& t : out.constraints.boundary) flag[static_cast<std::size_t>(t.vertex)] = 1.0;
  flat.channels["constraint"] = std::move(flag);
  flat.template_hash = template_hash(spec);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace frf
