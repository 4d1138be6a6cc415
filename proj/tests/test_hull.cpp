#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "gnep/hull.hpp"
#include "gnep/rng.hpp"

using namespace gnep;

namespace {

// Independent 2D oracle: point-in-convex-polygon by exact orientation tests
// against every hull edge (hull built by monotone chain).
bool inside_2d(const RatVec& p, std::vector<RatVec> pts) {
  std::sort(pts.begin(), pts.end(), [](const RatVec& a, const RatVec& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Explicit return type: letting gmpxx expression templates escape a lambda
  // leaves dangling references to the operand temporaries.
  auto cross = [](const RatVec& o, const RatVec& a, const RatVec& b) -> Rational {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  if (pts.size() == 1) return p == pts[0];
  if (pts.size() == 2 || [&] {  // all collinear
        for (std::size_t i = 2; i < pts.size(); ++i)
          if (cross(pts[0], pts[1], pts[i]) != 0) return false;
        return true;
      }()) {
    if (cross(pts.front(), pts.back(), p) != 0) return false;
    for (int d = 0; d < 2; ++d)
      if (p[d] < pts.front()[d] && p[d] < pts.back()[d]) return false;
    for (int d = 0; d < 2; ++d)
      if (p[d] > pts.front()[d] && p[d] > pts.back()[d]) return false;
    return true;
  }
  std::vector<RatVec> hull;
  for (int pass = 0; pass < 2; ++pass) {
    std::size_t start = hull.size();
    for (const auto& q : pts) {
      while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0)
        hull.pop_back();
      hull.push_back(q);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("interior point of a quadrilateral, with verifiable weights") {
  std::vector<RatVec> S = {{rat(2), rat(1)}, {rat(1), rat(2)}, {rat(4), rat(2)}, {rat(4), rat(4)}};
  RatVec p = {rat(3), rat(3)};
  REQUIRE(inside_2d(p, S));
  auto r = hull_membership(p, S);
  REQUIRE(r.inside);
  REQUIRE(r.weights.size() == S.size());
  Rational wsum = 0;
  RatVec combo(2, rat(0));
  for (std::size_t s = 0; s < S.size(); ++s) {
    CHECK(r.weights[s] >= 0);
    wsum += r.weights[s];
    for (int d = 0; d < 2; ++d) combo[d] += r.weights[s] * S[s][d];
  }
  CHECK(wsum == 1);
  CHECK(combo == p);
}

TEST_CASE("boundary, vertex and outside cases") {
  std::vector<RatVec> S = {{rat(0), rat(0)}, {rat(2), rat(0)}, {rat(0), rat(2)}};
  CHECK(hull_membership({rat(1), rat(0)}, S).inside);      // edge midpoint
  CHECK(hull_membership({rat(2), rat(0)}, S).inside);      // vertex
  CHECK(hull_membership({rat(1), rat(1)}, S).inside);      // hypotenuse point
  CHECK_FALSE(hull_membership({rat(1, 1), rat(9, 8)}, S).inside);
  CHECK_FALSE(hull_membership({rat(-1, 1000000), rat(0)}, S).inside);
}

TEST_CASE("degenerate inputs") {
  CHECK_FALSE(hull_membership({rat(0)}, {}).inside);
  CHECK(hull_membership({rat(3)}, {{rat(3)}}).inside);
  CHECK_FALSE(hull_membership({rat(2)}, {{rat(3)}}).inside);
  // Collinear segment in 3D.
  std::vector<RatVec> seg = {{rat(0), rat(0), rat(0)}, {rat(2), rat(4), rat(6)}};
  CHECK(hull_membership({rat(1), rat(2), rat(3)}, seg).inside);
  CHECK_FALSE(hull_membership({rat(1), rat(2), rat(4)}, seg).inside);
}

TEST_CASE("random 2D points agree with the orientation oracle") {
  SplitMix64 g(314159);
  int inside_seen = 0, outside_seen = 0;
  for (int it = 0; it < 300; ++it) {
    const int k = static_cast<int>(g.next_int(1, 7));
    std::vector<RatVec> S;
    for (int s = 0; s < k; ++s)
      S.push_back({rat(g.next_int(-4, 4)), rat(g.next_int(-4, 4))});
    RatVec p = {rat(g.next_int(-8, 8), 2), rat(g.next_int(-8, 8), 2)};
    const bool want = inside_2d(p, S);
    auto r = hull_membership(p, S);
    CHECK(r.inside == want);
    if (want) {
      Rational wsum = 0;
      RatVec combo(2, rat(0));
      for (std::size_t s = 0; s < S.size(); ++s) {
        wsum += r.weights[s];
        for (int d = 0; d < 2; ++d) combo[d] += r.weights[s] * S[s][d];
      }
      CHECK(wsum == 1);
      CHECK(combo == p);
      ++inside_seen;
    } else {
      ++outside_seen;
    }
  }
  CHECK(inside_seen > 30);
  CHECK(outside_seen > 30);
}
