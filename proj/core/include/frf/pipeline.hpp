#pragma once

#include <nlohmann/json.hpp>

#include "frf/constraints.hpp"
#include "frf/division.hpp"
#include "frf/flatten.hpp"
#include "frf/template.hpp"

namespace frf {

struct SolveReport {
  int vertex_count = 0;
  int face_count = 0;
  int boundary_count = 0;
  int regional_count = 0;
  double w = 0.0;
  WeightMode weighting = WeightMode::kBoundaryRows;
  KktBackend backend = KktBackend::kCondensed;
  double kkt_residual = 0.0;
  double refine_residual = 0.0;
  double constraint_error = 0.0;  // max |E x - s| over both coordinates
  double boundary_deviation_before = 0.0;
  double boundary_deviation_after = 0.0;
  int expected_face_sign = 1;
  int flipped_before = 0;
  int flipped_after = 0;
  double wall_ms = 0.0;  // kept out of the JSON form so reports stay reproducible
};

nlohmann::json to_json(const SolveReport& report);

struct PipelineOptions {
  SolveOptions solve;
  bool refine = true;
};

// Everything up to and including the redistributed division.
struct DivisionStage {
  LabeledBoundary boundary;
  TriMesh closed;
  DivisionResult initial;  // on the closed mesh
  OpenedDivision opened;   // after cover removal and sub-contour redistribution
};

DivisionStage run_division(const TriMesh& clipped, const SeedSet& seeds);

struct PipelineResult {
  FlatMesh flat;
  SolveReport report;
  DivisionStage division;
  ConstraintSet constraints;
  std::vector<Vec2> initial_points;  // before boundary refinement
};

// Close holes, divide, open, redistribute, build targets, solve, refine. Errors carry
// the stage that raised them.
PipelineResult flatten_pipeline(const TriMesh& clipped, const SeedSet& seeds, const TemplateSpec& spec,
                                const PipelineOptions& options = {});

}  // namespace frf
