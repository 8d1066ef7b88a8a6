#include "frf/subcontour.hpp"

#include <string>

#include "frf/error.hpp"

namespace frf {

namespace {
constexpr const char* kStage = "subcontour";

int wrap(int i, int n) { return ((i % n) + n) % n; }
}  // namespace

std::vector<int> SubcontourSplit::lengths() const {
  std::vector<int> out;
  const int k = static_cast<int>(positions.size());
  for (int i = 0; i < k; ++i) {
    int d = wrap(positions[static_cast<std::size_t>((i + 1) % k)] - positions[static_cast<std::size_t>(i)], ring_length);
    if (d == 0) d = ring_length;  // single point: the whole ring
    out.push_back(d);
  }
  return out;
}

std::vector<int> proportional_lengths(int ring_length, int parts) {
  if (parts < 1) throw Error(ErrorCode::kInvalidArgument, kStage, "need at least one part");
  std::vector<int> out(static_cast<std::size_t>(parts), ring_length / parts);
  for (int i = 0; i < ring_length % parts; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

SubcontourSplit recompute_subcontours(const SubcontourSplit& split) {
  const int n = split.ring_length;
  const int k = static_cast<int>(split.positions.size());
  if (k != 2 && k != 3) throw Error(ErrorCode::kInvalidArgument, kStage, "expected 2 or 3 intersection points");
  if (n < 6) throw Error(ErrorCode::kDivision, kStage, "ring has " + std::to_string(n) + " points, need at least 6");
  for (int p : split.positions) {
    if (p < 0 || p >= n) throw Error(ErrorCode::kInvalidArgument, kStage, "intersection point outside ring");
  }
  const std::vector<int> L = split.lengths();
  int sum = 0;
  for (int l : L) sum += l;
  if (sum != n) throw Error(ErrorCode::kDivision, kStage, "intersection points are not in ring order");
  const std::vector<int> P = proportional_lengths(n, k);

  std::vector<int> shift(static_cast<std::size_t>(k), 0);
  for (int i = 1; i < k; ++i) shift[static_cast<std::size_t>(i)] = floor_half(P[static_cast<std::size_t>(i - 1)] - L[static_cast<std::size_t>(i - 1)]);

  std::vector<int> next(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int before = i == 0 ? 0 : shift[static_cast<std::size_t>(i)];
    const int after = i + 1 < k ? shift[static_cast<std::size_t>(i + 1)] : 0;
    next[static_cast<std::size_t>(i)] = L[static_cast<std::size_t>(i)] - before + after;
    if (next[static_cast<std::size_t>(i)] < 1) {
      throw Error(ErrorCode::kDivision, kStage,
                  "sub-contour " + std::to_string(i + 1) + " would shrink to " + std::to_string(next[static_cast<std::size_t>(i)]));
    }
  }
  SubcontourSplit out = split;
  for (int i = 1; i < k; ++i) {
    out.positions[static_cast<std::size_t>(i)] = wrap(split.positions[static_cast<std::size_t>(i)] + shift[static_cast<std::size_t>(i)], n);
  }
  return out;
}

}  // namespace frf
