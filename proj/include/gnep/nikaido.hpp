#pragma once

#include <string>
#include <vector>

#include "gnep/finite_game.hpp"
#include "gnep/flowgame.hpp"
#include "gnep/qp.hpp"
#include "gnep/rational.hpp"

namespace gnep {

// Aggregate improvement of deviating to y while everyone else stays at x:
// sum over players of pi_i(x) - pi_i(y_i, x_{-i}). Purely a formula; no
// feasibility checks beyond dimensions.
Rational psi(const CdfgInstance& inst, const RatProfile& x, const RatProfile& y);
Rational psi(const FiniteGnep& game, const Profile& x, const Profile& y);

enum class EvalStatus {
  ok,
  infeasible_point,  // x itself violates its requirements
  empty_region,      // some player's deviation set is empty
  not_converged,     // a quadratic subproblem stopped at its budget
};

// One evaluation of a value function: the optimal aggregate improvement,
// the per-player optimizers, and (for the LP path) duals in the stacked
// (A; -A; Id; -Id) row layout.
struct NiEvaluation {
  EvalStatus status = EvalStatus::ok;
  Rational value;
  RatProfile responses;
  std::vector<RatVec> duals;
  std::string method;
};

// Exact best-improvement value over the integral strategy sets. Requires a
// feasible x; every player's block is solved by min-cost flow.
NiEvaluation v_hat_original(const CdfgInstance& inst, const IntProfile& x);

// Finite-game variant: per-player minimum over the listed strategies.
NiEvaluation v_hat_original(const FiniteGnep& game, const Profile& x);

// Exact value over the per-player LP relaxations (the hulls of the integral
// sets, since the constraint matrices are box-TDI); fills duals. x may be
// fractional; each block must leave its rivals a nonempty region.
NiEvaluation v_hat_convexified(const CdfgInstance& inst, const RatProfile& x);

// Exact equilibrium test: feasibility plus a zero value.
bool is_gne(const CdfgInstance& inst, const IntProfile& x);
bool is_gne(const FiniteGnep& game, const Profile& x);

// --- double-precision, regularized ---

struct AlphaConfig {
  double alpha = 0.02;
  double tol = 1e-6;
  int max_iter = 10000;
};

struct AlphaEvaluation {
  EvalStatus status = EvalStatus::ok;
  double value = 0.0;
  std::vector<std::vector<double>> responses;
};

// Regularized value at a point of the relaxed joint set:
//   sum_i max_{y_i} [pi_i(x) - pi_i(y_i, x_{-i}) - (alpha/2) ||x_i - y_i||^2]
// with one strictly convex subproblem per player. Zero exactly at the
// equilibria of the relaxed game.
AlphaEvaluation v_alpha(const CdfgInstance& inst, const std::vector<double>& x_flat,
                        const AlphaConfig& cfg = {});

struct BarConfig {
  double alpha = 0.02;
  double beta = 0.05;
  double c = 0.0;
  AlphaConfig inner;
};

struct BarEvaluation {
  EvalStatus status = EvalStatus::ok;
  double value = 0.0;
  std::vector<double> projection;
  std::vector<std::vector<double>> responses;       // maximizers of the alpha term
  std::vector<std::vector<double>> beta_responses;  // maximizers of the beta term
};

// Merit value defined on all of R^k: project once onto the relaxed joint
// set, take both regularized evaluations with deviation regions at the
// projection but costs and centers at x, and add c times the squared
// projection distance:
//   value = A(x) - B(x) + c ||x - p||^2,  p = projection,
// where A uses weight alpha and B uses weight beta > alpha. Nonnegative
// everywhere; zero exactly at equilibria of the relaxed game.
BarEvaluation v_bar(const CdfgInstance& inst, const std::vector<double>& x_flat,
                    const BarConfig& cfg = {});

// Multiplicative integrality penalty 1 + (1/size) * sum_j sin(pi x_j)^2,
// computed from each coordinate's distance to its nearest integer so that
// integral points give exactly 1. Always in [1, 2].
double penalty_factor(const std::vector<double>& x_flat);

}  // namespace gnep
