#pragma once

#include <functional>
#include <vector>

#include "gnep/lp.hpp"

namespace gnep {

// Linear minimization oracle over a compact convex region: returns a point of
// the region minimizing d . y, or an empty vector when the region is empty.
using LinMinOracle = std::function<std::vector<double>(const std::vector<double>&)>;

// f(y) = a . y + (alpha/2) |y - z|^2, minimized over the oracle's region.
struct QuadraticSubproblem {
  std::vector<double> a;
  std::vector<double> z;
  double alpha = 0.02;
};

struct QpConfig {
  double tol = 1e-6;
  long long max_iter = 10000;
};

struct QpResult {
  std::vector<double> y;
  double value = 0;
  double gap = 0;  // final Frank-Wolfe gap; f(y) - f* <= gap when converged
  long long oracle_calls = 0;
  bool converged = false;
  bool feasible = true;
};

// Away-step Frank-Wolfe with exact line search and an explicit active set.
QpResult solve_qp_fw(const QuadraticSubproblem& q, const LinMinOracle& oracle,
                     const QpConfig& cfg = {});

// Euclidean projection of z: solve_qp_fw with a = 0, alpha = 2.
QpResult project_euclidean(const std::vector<double>& z, const LinMinOracle& oracle,
                           const QpConfig& cfg = {});

// Oracle over an explicit LP region, backed by the double simplex.
LinMinOracle lp_region_oracle(LinearProgramD region);

}  // namespace gnep
