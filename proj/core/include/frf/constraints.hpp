#pragma once

#include <span>
#include <vector>

#include "frf/division.hpp"
#include "frf/template.hpp"

namespace frf {

struct Target {
  int vertex = -1;
  Vec2 point = Vec2::Zero();
};

struct ConstraintSet {
  std::vector<Target> boundary;  // every ring vertex, intersection points included
  std::vector<Target> regional;  // interior path vertices
};

// Targets along one closed ring. `positions[i]` is the ring index of the i-th anchor and
// `angles[i]` its angle; points between anchors advance in equal angular steps in the
// direction `orientation`. Throws kOrientation if the anchors do not wind once around
// the circle in that direction.
std::vector<Vec2> ring_targets(const Vec2& center, double radius, int ring_length, std::span<const int> positions,
                               std::span<const double> angles, int orientation);

// Targets of a path's vertices between fixed end targets, spaced by cumulative 3D length.
// Arcs bulge away from `away_from` with the given sagitta (fraction of the chord).
std::vector<Vec2> path_targets(std::span<const Vec3> points, const Vec2& a, const Vec2& b, PathStyle style,
                               double sagitta, const Vec2& away_from = Vec2::Zero());

ConstraintSet target_coordinates(const TemplateSpec& spec, const OpenedDivision& opened, const LabeledBoundary& boundary);

}  // namespace frf
