#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gnep/flowgame.hpp"
#include "gnep/nikaido.hpp"
#include "gnep/parallel.hpp"
#include "gnep/rng.hpp"

namespace gnep {

enum class Method { vhat, valpha, vbar, reformulation_exhaustive, gauss_seidel };

struct SolveConfig {
  Method method = Method::valpha;
  bool penalized = false;  // multiply the descent objective by penalty_factor
  double alpha = 0.02;
  double beta = 0.05;  // vbar only; must exceed alpha there
  double c = 0.0;      // vbar distance weight
  int starts = 100;
  std::uint64_t seed = 0;
  double time_limit_seconds = 60.0;  // 0 expires immediately
  long long budget = 15000;          // function evaluations per local descent
  long long enum_cap = 1000000;      // exhaustive profile cap
  int max_rounds = 100;              // gauss-seidel round cap
  double tol = 1e-6;                 // descent stationarity tolerance
  Exec exec = Exec::serial;          // starts may be evaluated in parallel
};

enum class SolveStatus { gne_found, no_gne_certified, timeout, budget_exhausted };

struct StartTrace {
  int index = 0;
  double initial_value = 0.0;
  double final_value = 0.0;
  long long evaluations = 0;
  bool rounded_feasible = false;
  bool accepted = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::budget_exhausted;
  IntProfile profile;  // accepted equilibrium, or the exhaustive minimizer
  Rational value;      // exact objective at `profile` when one is set
  double best_descent_value = std::numeric_limits<double>::infinity();
  int starts_used = 0;
  long long evaluations_used = 0;
  std::vector<StartTrace> trace;
  std::string diagnostic;
};

// Uniform draws in [0, max(n, d_1..d_n)]^k projected onto the relaxed joint
// set; deterministic by seed. Throws std::runtime_error when the set is empty.
std::vector<std::vector<double>> random_starts(const CdfgInstance& inst, int count,
                                               std::uint64_t seed);

struct ObjectiveSample {
  double value = 0.0;
  std::vector<double> gradient;
};
using ObjectiveFn = std::function<ObjectiveSample(const std::vector<double>&)>;

// A descent problem: one evaluation yields the value and an envelope gradient
// (the inner maximizers held fixed). An empty `region` means unconstrained.
// `early_accept`, when set, is consulted once the value drops below 1e-3; a
// true return stops the descent immediately.
struct DescentObjective {
  ObjectiveFn eval;
  LinMinOracle region;
  std::function<bool(const std::vector<double>&)> early_accept;
};

struct DescentResult {
  std::vector<double> x;
  double value = 0.0;
  long long evaluations = 0;
  int steps = 0;
  bool early_accepted = false;
};

// Conditional-gradient descent with Armijo backtracking; on stalls it retries
// along a few random directions before giving up. Never increases the value.
DescentResult local_descent(const DescentObjective& obj, std::vector<double> start,
                            long long budget, double tol, SplitMix64& rng);

// The descent problem for cfg.method ∈ {vhat, valpha, vbar}: value + envelope
// gradient of the chosen merit function, times the integrality penalty when
// cfg.penalized. vhat and valpha descend over the relaxed joint set; vbar is
// unconstrained. No early-accept hook is attached.
DescentObjective descent_objective(const CdfgInstance& inst, const SolveConfig& cfg);

// Multistart local descent with rounding: descends from each start in order,
// rounds componentwise to the nearest integer (ties away from zero), accepts
// the first start index whose rounded point is feasible and an exact
// equilibrium. Requires cfg.method ∈ {vhat, valpha, vbar}.
SolveResult multistart_round(const CdfgInstance& inst, const SolveConfig& cfg);

// Cyclic exact integral best responses from a feasible integral profile.
// A full quiet round (no strict improvement anywhere) is an equilibrium by
// construction; an emptied strategy set or the round cap ends the run with
// status budget_exhausted and a diagnostic.
SolveResult gauss_seidel(const CdfgInstance& inst, const IntProfile& x0, int max_rounds);

// Streams every integral profile, scoring each by the dual value of the
// per-player best-response LPs; the score equals the convexified gap exactly,
// so a zero minimum certifies an equilibrium and a positive minimum certifies
// that none exists. Throws EnumCapExceeded past enum_cap.
SolveResult solve_reformulation_exhaustive(const CdfgInstance& inst,
                                           long long enum_cap = 1000000);

// Dispatch on cfg.method. gauss_seidel starts from the first enumerated
// feasible profile.
SolveResult solve(const CdfgInstance& inst, const SolveConfig& cfg);

// Componentwise nearest integer, ties away from zero.
IntProfile round_profile(const CdfgInstance& inst, const std::vector<double>& flat);

}  // namespace gnep
