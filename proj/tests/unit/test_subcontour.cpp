#include <doctest.h>

#include <cmath>
#include <numeric>

#include "frf/error.hpp"
#include "frf/subcontour.hpp"
#include "oracles.hpp"

using namespace frf;

using oracle::floor_div2;
using oracle::mod;
using oracle::split_from_lengths;

TEST_CASE("floor_half rounds toward negative infinity") {
  for (int a = -41; a <= 41; ++a) CHECK(floor_half(a) == floor_div2(a));
}

TEST_CASE("proportional lengths give the remainder to the first parts") {
  CHECK(proportional_lengths(12, 3) == std::vector<int>{4, 4, 4});
  CHECK(proportional_lengths(13, 3) == std::vector<int>{5, 4, 4});
  CHECK(proportional_lengths(14, 3) == std::vector<int>{5, 5, 4});
  CHECK(proportional_lengths(9, 2) == std::vector<int>{5, 4});
}

TEST_CASE("worked examples") {
  CHECK(recompute_subcontours(split_from_lengths(0, {4, 4, 4})).lengths() == std::vector<int>{4, 4, 4});
  CHECK(recompute_subcontours(split_from_lengths(0, {6, 3, 3})).lengths() == std::vector<int>{5, 4, 3});
  // IP2 moves +1 and IP3 moves floor((4 - 2) / 2) = +1, both from their original places.
  CHECK(recompute_subcontours(split_from_lengths(0, {2, 2, 8})).lengths() == std::vector<int>{3, 2, 7});
}

TEST_CASE("exhaustive three-part compositions for ring lengths 6..30") {
  long checked = 0, rejected = 0;
  for (int n = 6; n <= 30; ++n) {
    const auto p = proportional_lengths(n, 3);
    for (int l12 = 1; l12 <= n - 2; ++l12) {
      for (int l23 = 1; l12 + l23 <= n - 1; ++l23) {
        const int l31 = n - l12 - l23;
        for (int offset : {0, n - 1, n / 2}) {
          const SubcontourSplit in = split_from_lengths(offset, {l12, l23, l31});
          const int d2 = floor_div2(p[0] - l12);
          const int d3 = floor_div2(p[1] - l23);
          const int e12 = l12 + d2, e23 = l23 - d2 + d3, e31 = l31 - d3;
          if (e12 < 1 || e23 < 1 || e31 < 1) {
            CHECK_THROWS_AS(recompute_subcontours(in), Error);
            ++rejected;
            continue;
          }
          const SubcontourSplit out = recompute_subcontours(in);
          REQUIRE(out.positions.size() == 3);
          CHECK(out.ring_length == n);
          CHECK(out.positions[0] == in.positions[0]);
          CHECK(out.positions[1] == mod(in.positions[1] + d2, n));
          CHECK(out.positions[2] == mod(in.positions[2] + d3, n));
          const auto l = out.lengths();
          CHECK(l == std::vector<int>{e12, e23, e31});
          CHECK(l[0] + l[1] + l[2] == n);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 0);
  CHECK(rejected > 0);
}

TEST_CASE("exhaustive two-part compositions") {
  for (int n = 6; n <= 30; ++n) {
    const auto p = proportional_lengths(n, 2);
    for (int l12 = 1; l12 < n; ++l12) {
      const SubcontourSplit in = split_from_lengths(3, {l12, n - l12});
      const int d = floor_div2(p[0] - l12);
      const SubcontourSplit out = recompute_subcontours(in);
      CHECK(out.positions[0] == in.positions[0]);
      CHECK(out.positions[1] == mod(in.positions[1] + d, n));
      const auto l = out.lengths();
      CHECK(l[0] + l[1] == n);
      CHECK(l[0] >= 1);
      CHECK(l[1] >= 1);
    }
  }
}

TEST_CASE("rings shorter than six and malformed splits are rejected") {
  CHECK_THROWS_AS(recompute_subcontours(split_from_lengths(0, {2, 2, 1})), Error);
  CHECK_THROWS_AS(recompute_subcontours(SubcontourSplit{12, {0, 8, 4}}), Error);
  CHECK_THROWS_AS(recompute_subcontours(SubcontourSplit{12, {0}}), Error);
  CHECK_THROWS_AS(recompute_subcontours(SubcontourSplit{12, {0, 12, 4}}), Error);
}
