#pragma once

#include <vector>

namespace frf {

// Positions of the intersection points on one hole ring. Positions are ring
// indices; IP1, IP2[, IP3] follow the ring direction starting from IP1.
struct SubcontourSplit {
  int ring_length = 0;
  std::vector<int> positions;

  // Step counts between consecutive intersection points (L12, L23, L31 or L12, L21).
  std::vector<int> lengths() const;
};

// Ring length split as evenly as integer division allows, remainder to the first parts.
std::vector<int> proportional_lengths(int ring_length, int parts);

// IP1 stays; IP2 (and IP3) move floor((P - L) / 2) positions, each measured from its
// original place. Throws if the ring is shorter than 6 or a length would drop below 1.
SubcontourSplit recompute_subcontours(const SubcontourSplit& split);

// floor(a / 2) rounding toward negative infinity.
inline int floor_half(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

}  // namespace frf
