#pragma once

#include <vector>

#include "gnep/rational.hpp"

namespace gnep {

struct HullResult {
  bool inside = false;
  // Convex-combination weights over `points` when inside; the witness is
  // re-verifiable by recomputing the weighted sum.
  RatVec weights;
};

// Exact membership of p in conv(points) via a convex-weight feasibility LP.
HullResult hull_membership(const RatVec& p, const std::vector<RatVec>& points);

}  // namespace gnep
