#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace frf {

// The six openings of a clipped left-atrial cavity.
enum class Hole : int { kMV = 0, kLIPV, kLSPV, kRIPV, kRSPV, kLAA };

inline constexpr int kHoleCount = 6;
inline constexpr std::array<Hole, 5> kClosedHoles = {Hole::kLIPV, Hole::kLSPV, Hole::kRIPV,
                                                     Hole::kRSPV, Hole::kLAA};

std::string_view hole_name(Hole hole);
std::optional<Hole> hole_from_name(std::string_view name);

// Dividing paths s1..s9. `to == kMV` means the path ends at MV seed `mv_seed`.
struct PathEnds {
  int id;
  Hole from;
  Hole to;
  int mv_seed;  // 0..3 for MV-connecting paths, -1 otherwise
};

inline constexpr int kPathCount = 9;
inline constexpr std::array<PathEnds, kPathCount> kPaths = {{
    {1, Hole::kRSPV, Hole::kRIPV, -1},
    {2, Hole::kRIPV, Hole::kLIPV, -1},
    {3, Hole::kLIPV, Hole::kLSPV, -1},
    {4, Hole::kLSPV, Hole::kRSPV, -1},
    {5, Hole::kRSPV, Hole::kMV, 0},
    {6, Hole::kRIPV, Hole::kMV, 1},
    {7, Hole::kLIPV, Hole::kMV, 2},
    {8, Hole::kLSPV, Hole::kLAA, -1},
    {9, Hole::kLAA, Hole::kMV, 3},
}};

inline const PathEnds& path_ends(int path_id) { return kPaths.at(static_cast<std::size_t>(path_id - 1)); }

// Regions R1..R5 and the paths bounding each one.
inline constexpr int kRegionCount = 5;
inline constexpr std::array<std::array<int, 4>, kRegionCount> kRegionPaths = {{
    {1, 5, 6, 0},  // R1 septal
    {2, 6, 7, 0},  // R2 posterior wall / floor
    {3, 7, 8, 9},  // R3 left lateral
    {4, 5, 8, 9},  // R4 anterior
    {1, 2, 3, 4},  // R5 inter-vein posterior
}};

std::string_view region_name(int region);  // 1-based

}  // namespace frf
