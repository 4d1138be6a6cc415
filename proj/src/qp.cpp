#include "gnep/qp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace gnep {
namespace {

double dot_d(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool same_atom(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

}  // namespace

QpResult solve_qp_fw(const QuadraticSubproblem& q, const LinMinOracle& oracle,
                     const QpConfig& cfg) {
  QpResult res;
  const std::size_t n = q.a.size();
  if (q.z.size() != n) throw std::invalid_argument("solve_qp_fw: dimension mismatch");

  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
  {
    auto v0 = oracle(q.a);
    ++res.oracle_calls;
    if (v0.empty()) {
      res.feasible = false;
      return res;
    }
    atoms.push_back(std::move(v0));
    weights.push_back(1.0);
  }

  std::vector<double> y(n), g(n), dir(n);
  auto rebuild = [&] {
    y.assign(n, 0.0);
    for (std::size_t k = 0; k < atoms.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) y[i] += weights[k] * atoms[k][i];
  };
  auto fval = [&](const std::vector<double>& p) {
    double v = dot_d(q.a, p);
    for (std::size_t i = 0; i < n; ++i) v += 0.5 * q.alpha * (p[i] - q.z[i]) * (p[i] - q.z[i]);
    return v;
  };
  rebuild();

  for (long long it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) g[i] = q.a[i] + q.alpha * (y[i] - q.z[i]);
    auto s = oracle(g);
    ++res.oracle_calls;
    if (s.empty()) throw std::logic_error("solve_qp_fw: oracle became infeasible mid-run");
    double fw_descent = dot_d(g, y) - dot_d(g, s);  // = <g, y - s> >= 0 up to noise
    res.gap = fw_descent;
    if (fw_descent <= cfg.tol) {
      res.converged = true;
      break;
    }
    // Away atom: active atom with the largest gradient value.
    std::size_t away = 0;
    double away_val = dot_d(g, atoms[0]);
    for (std::size_t k = 1; k < atoms.size(); ++k) {
      double v = dot_d(g, atoms[k]);
      if (v > away_val) {
        away_val = v;
        away = k;
      }
    }
    const double away_descent = away_val - dot_d(g, y);  // = <g, y - v_a> with flipped sign
    bool use_fw = fw_descent >= away_descent || atoms.size() == 1 || weights[away] >= 1.0 - 1e-15;
    double gmax;
    if (use_fw) {
      for (std::size_t i = 0; i < n; ++i) dir[i] = s[i] - y[i];
      gmax = 1.0;
    } else {
      for (std::size_t i = 0; i < n; ++i) dir[i] = y[i] - atoms[away][i];
      gmax = weights[away] / (1.0 - weights[away]);
    }
    const double dd = dot_d(dir, dir);
    if (dd <= 1e-30) {
      res.converged = true;
      break;
    }
    double gamma = -dot_d(g, dir) / (q.alpha * dd);  // exact line search
    if (gamma <= 0) {
      res.converged = true;
      break;
    }
    if (gamma > gmax) gamma = gmax;

    if (use_fw) {
      for (auto& w : weights) w *= 1.0 - gamma;
      std::size_t hit = atoms.size();
      for (std::size_t k = 0; k < atoms.size(); ++k)
        if (same_atom(atoms[k], s)) {
          hit = k;
          break;
        }
      if (hit == atoms.size()) {
        atoms.push_back(std::move(s));
        weights.push_back(gamma);
      } else {
        weights[hit] += gamma;
      }
    } else {
      for (auto& w : weights) w *= 1.0 + gamma;
      weights[away] -= gamma;
    }
    // Drop vanished atoms and renormalize against float drift.
    double wsum = 0;
    std::size_t out = 0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (weights[k] > 1e-14) {
        if (out != k) {
          atoms[out] = std::move(atoms[k]);
          weights[out] = weights[k];
        }
        wsum += weights[k];
        ++out;
      }
    }
    atoms.resize(out);
    weights.resize(out);
    for (auto& w : weights) w /= wsum;
    rebuild();
  }

  res.y = y;
  res.value = fval(y);
  return res;
}

QpResult project_euclidean(const std::vector<double>& z, const LinMinOracle& oracle,
                           const QpConfig& cfg) {
  QuadraticSubproblem q;
  q.a.assign(z.size(), 0.0);
  q.z = z;
  q.alpha = 2.0;
  return solve_qp_fw(q, oracle, cfg);
}

LinMinOracle lp_region_oracle(LinearProgramD region) {
  return [lp = std::move(region)](const std::vector<double>& d) mutable -> std::vector<double> {
    lp.c = d;
    lp.direction = Direction::minimize;
    auto sol = solve_lp_d(lp);
    if (sol.status == LpStatus::infeasible) return {};
    if (sol.status != LpStatus::optimal)
      throw std::logic_error("lp_region_oracle: region must be compact");
    return sol.x;
  };
}

}  // namespace gnep
