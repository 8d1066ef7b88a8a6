#include "frf/anatomy.hpp"

namespace frf {

std::string_view hole_name(Hole hole) {
  switch (hole) {
    case Hole::kMV: return "MV";
    case Hole::kLIPV: return "LIPV";
    case Hole::kLSPV: return "LSPV";
    case Hole::kRIPV: return "RIPV";
    case Hole::kRSPV: return "RSPV";
    case Hole::kLAA: return "LAA";
  }
  return "?";
}

std::optional<Hole> hole_from_name(std::string_view name) {
  for (int h = 0; h < kHoleCount; ++h) {
    if (hole_name(static_cast<Hole>(h)) == name) return static_cast<Hole>(h);
  }
  return std::nullopt;
}

std::string_view region_name(int region) {
  switch (region) {
    case 1: return "R1 septal";
    case 2: return "R2 posterior-floor";
    case 3: return "R3 left-lateral";
    case 4: return "R4 anterior";
    case 5: return "R5 inter-vein";
    default: return "?";
  }
}

}  // namespace frf
