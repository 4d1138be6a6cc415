#include "gnep/hull.hpp"

#include <stdexcept>

#include "gnep/lp.hpp"

namespace gnep {

HullResult hull_membership(const RatVec& p, const std::vector<RatVec>& points) {
  HullResult res;
  if (points.empty()) return res;
  const std::size_t dim = p.size(), k = points.size();
  LinearProgram lp;
  lp.c.assign(k, rat(0));
  for (std::size_t d = 0; d < dim; ++d) {
    RatVec row(k);
    for (std::size_t s = 0; s < k; ++s) {
      if (points[s].size() != dim) throw std::invalid_argument("hull_membership: dimension mismatch");
      row[s] = points[s][d];
    }
    lp.add_row(std::move(row), Sense::eq, p[d]);
  }
  lp.add_row(RatVec(k, rat(1)), Sense::eq, rat(1));
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) return res;
  res.inside = true;
  res.weights = std::move(sol.x);
  return res;
}

}  // namespace gnep
