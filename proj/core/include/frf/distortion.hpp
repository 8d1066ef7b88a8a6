#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "frf/flatten.hpp"
#include "frf/mesh.hpp"

namespace frf {

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<long> counts;
  double entropy = 0.0;  // nats
};

// Equal-width bins over [lo, hi]; values outside are clipped into the end bins.
Histogram histogram_entropy(std::span<const double> values, int bins, double lo, double hi);

// 2D/3D area ratio per face after both surfaces are scaled to unit total area.
std::vector<double> area_ratio(const TriMesh& mesh3d, const FlatMesh& flat);

// Linear map from the 3D triangle (in its own frame: x along v0->v1) to the 2D triangle.
Eigen::Matrix2d jacobian(const std::array<Vec3, 3>& tri3d, const std::array<Vec2, 3>& tri2d);
// Singular values (largest first) of a 2x2 matrix, in closed form.
std::array<double, 2> singular_values(const Eigen::Matrix2d& j);
double isotropy_ratio(const Eigen::Matrix2d& j);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double weighted_mean = 0.0;  // weights: normalised 3D face areas
};

struct DistortionReport {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<char> flipped;
  int flipped_count = 0;
  Histogram alpha_histogram;
  Histogram beta_histogram;
  Summary alpha_summary;
  Summary beta_summary;
};

inline constexpr int kHistogramBins = 64;
inline constexpr double kAlphaRangeMax = 4.0;

// `expected_sign` 0 picks the sign of the total signed 2D area.
DistortionReport distortion_report(const TriMesh& mesh3d, const FlatMesh& flat, int expected_sign = 0,
                                   int bins = kHistogramBins);

nlohmann::json to_json(const DistortionReport& report);
void write_distortion_csv(const DistortionReport& report, const std::filesystem::path& path);

}  // namespace frf
