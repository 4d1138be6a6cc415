#include "gnep/nikaido.hpp"

#include <cmath>
#include <stdexcept>

namespace gnep {

namespace {

std::vector<double> cost_vector_d(const CdfgInstance& inst, std::size_t player,
                                  const std::vector<double>& load) {
  const std::size_t m = inst.num_arcs();
  std::vector<double> c(m, 0.0);
  if (inst.cost_mode == CostMode::dense) {
    for (std::size_t e = 0; e < m; ++e) {
      double acc = static_cast<double>(inst.c2[player][e]);
      for (std::size_t f = 0; f < m; ++f)
        acc += load[f] * static_cast<double>(inst.c1[player][f][e]);
      c[e] = acc;
    }
  } else {
    for (std::size_t e = 0; e < m; ++e)
      c[e] = static_cast<double>(inst.cong[player][e]) * (1.0 + load[e]);
  }
  return c;
}

std::vector<std::vector<double>> split_flat(const CdfgInstance& inst,
                                            const std::vector<double>& flat) {
  const std::size_t m = inst.num_arcs();
  if (flat.size() != m * inst.num_players())
    throw std::invalid_argument("flat profile size mismatch");
  std::vector<std::vector<double>> blocks(inst.num_players());
  for (std::size_t i = 0; i < inst.num_players(); ++i)
    blocks[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * m),
                     flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
  return blocks;
}

std::vector<double> rival_load_d(const CdfgInstance& inst,
                                 const std::vector<std::vector<double>>& blocks,
                                 std::size_t player) {
  std::vector<double> load(inst.num_arcs(), 0.0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j == player) continue;
    for (std::size_t e = 0; e < load.size(); ++e) load[e] += blocks[j][e];
  }
  return load;
}

}  // namespace

Rational psi(const CdfgInstance& inst, const RatProfile& x, const RatProfile& y) {
  if (x.size() != inst.num_players() || y.size() != inst.num_players())
    throw std::invalid_argument("profile size mismatch");
  Rational total(0);
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    const RatVec c = cost_vector(inst, i, rival_load(inst, x, i));
    total += dot(c, x[i]) - dot(c, y[i]);
  }
  return total;
}

Rational psi(const FiniteGnep& game, const Profile& x, const Profile& y) {
  if (x.size() != game.dims.size() || y.size() != game.dims.size())
    throw std::invalid_argument("profile size mismatch");
  Rational total(0);
  for (std::size_t i = 0; i < game.dims.size(); ++i) {
    const Profile deviated = complete_profile(game.dims, i, y[i], rival_key(x, i));
    total += game.cost(i, x) - game.cost(i, deviated);
  }
  return total;
}

NiEvaluation v_hat_original(const CdfgInstance& inst, const IntProfile& x) {
  NiEvaluation out;
  out.method = "original";
  if (!is_feasible_profile(inst, x)) {
    out.status = EvalStatus::infeasible_point;
    return out;
  }
  const RatProfile xr = to_rational(x);
  out.value = 0;
  out.responses.resize(inst.num_players());
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    const BestResponse br = best_response_flow(inst, i, x);
    if (br.status != BrStatus::ok) {
      out.status = EvalStatus::empty_region;
      return out;
    }
    const RatVec c = cost_vector(inst, i, rival_load(inst, xr, i));
    out.value += dot(c, xr[i]) - br.value;
    out.responses[i].resize(br.flow.size());
    for (std::size_t e = 0; e < br.flow.size(); ++e) out.responses[i][e] = rat(br.flow[e]);
  }
  return out;
}

NiEvaluation v_hat_original(const FiniteGnep& game, const Profile& x) {
  NiEvaluation out;
  out.method = "original";
  if (!is_feasible(game, x)) {
    out.status = EvalStatus::infeasible_point;
    return out;
  }
  out.value = 0;
  out.responses.resize(game.dims.size());
  for (std::size_t i = 0; i < game.dims.size(); ++i) {
    const RivalKey key = rival_key(x, i);
    const std::vector<Point>* options = strategy_set(game, i, key);
    if (options == nullptr || options->empty()) {
      out.status = EvalStatus::empty_region;
      return out;
    }
    bool first = true;
    Rational best(0);
    Point best_point;
    for (const Point& candidate : *options) {
      const Rational cost = game.cost(i, complete_profile(game.dims, i, candidate, key));
      if (first || cost < best) {
        best = cost;
        best_point = candidate;
        first = false;
      }
    }
    out.value += game.cost(i, x) - best;
    out.responses[i] = best_point;
  }
  return out;
}

NiEvaluation v_hat_convexified(const CdfgInstance& inst, const RatProfile& x) {
  NiEvaluation out;
  out.method = "convexified";
  out.value = 0;
  out.responses.resize(inst.num_players());
  out.duals.resize(inst.num_players());
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    const PlayerLp lp = best_response_lp(inst, i, x);
    if (lp.status == LpStatus::infeasible) {
      out.status = EvalStatus::empty_region;
      return out;
    }
    if (lp.status != LpStatus::optimal) {
      out.status = EvalStatus::not_converged;
      return out;
    }
    const RatVec c = cost_vector(inst, i, rival_load(inst, x, i));
    out.value += dot(c, x[i]) - lp.value;
    out.responses[i] = lp.flow;
    out.duals[i] = lp.nu;
  }
  return out;
}

bool is_gne(const CdfgInstance& inst, const IntProfile& x) {
  if (!is_feasible_profile(inst, x)) return false;
  const NiEvaluation eval = v_hat_original(inst, x);
  return eval.status == EvalStatus::ok && eval.value <= 0;
}

bool is_gne(const FiniteGnep& game, const Profile& x) {
  if (!is_feasible(game, x)) return false;
  const NiEvaluation eval = v_hat_original(game, x);
  return eval.status == EvalStatus::ok && eval.value <= 0;
}

AlphaEvaluation v_alpha(const CdfgInstance& inst, const std::vector<double>& x_flat,
                        const AlphaConfig& cfg) {
  AlphaEvaluation out;
  const std::vector<std::vector<double>> blocks = split_flat(inst, x_flat);
  out.responses.resize(inst.num_players());
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    const std::vector<double> load = rival_load_d(inst, blocks, i);
    std::vector<double> resid(inst.num_arcs());
    for (std::size_t e = 0; e < resid.size(); ++e)
      resid[e] = static_cast<double>(inst.capacity[e]) - load[e];
    const std::vector<double> cost = cost_vector_d(inst, i, load);

    QuadraticSubproblem sub;
    sub.a = cost;
    sub.z = blocks[i];
    sub.alpha = cfg.alpha;
    QpConfig qcfg;
    qcfg.tol = cfg.tol;
    qcfg.max_iter = cfg.max_iter;
    const QpResult qp = solve_qp_fw(sub, flow_region_oracle(inst, i, resid), qcfg);
    if (!qp.feasible) {
      out.status = EvalStatus::empty_region;
      return out;
    }
    if (!qp.converged) out.status = EvalStatus::not_converged;
    double own = 0.0;
    for (std::size_t e = 0; e < inst.num_arcs(); ++e) own += cost[e] * blocks[i][e];
    out.value += own - qp.value;
    out.responses[i] = qp.y;
  }
  return out;
}

BarEvaluation v_bar(const CdfgInstance& inst, const std::vector<double>& x_flat,
                    const BarConfig& cfg) {
  BarEvaluation out;
  const std::vector<std::vector<double>> blocks = split_flat(inst, x_flat);

  QpConfig pcfg;
  pcfg.tol = cfg.inner.tol;
  pcfg.max_iter = cfg.inner.max_iter;
  const QpResult proj = project_euclidean(x_flat, relaxed_joint_set_oracle(inst), pcfg);
  if (!proj.feasible) {
    out.status = EvalStatus::empty_region;
    return out;
  }
  out.projection = proj.y;
  const std::vector<std::vector<double>> pblocks = split_flat(inst, proj.y);

  double dist2 = 0.0;
  for (std::size_t j = 0; j < x_flat.size(); ++j) {
    const double d = x_flat[j] - proj.y[j];
    dist2 += d * d;
  }

  out.responses.resize(inst.num_players());
  out.beta_responses.resize(inst.num_players());
  double total = cfg.c * dist2;
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    // Deviation region at the projection, costs and centers at x itself.
    const std::vector<double> pload = rival_load_d(inst, pblocks, i);
    std::vector<double> resid(inst.num_arcs());
    for (std::size_t e = 0; e < resid.size(); ++e)
      resid[e] = static_cast<double>(inst.capacity[e]) - pload[e];
    const LinMinOracle region = flow_region_oracle(inst, i, resid);
    const std::vector<double> cost = cost_vector_d(inst, i, rival_load_d(inst, blocks, i));

    QuadraticSubproblem sub;
    sub.a = cost;
    sub.z = blocks[i];
    QpConfig qcfg;
    qcfg.tol = cfg.inner.tol;
    qcfg.max_iter = cfg.inner.max_iter;

    sub.alpha = cfg.alpha;
    const QpResult qa = solve_qp_fw(sub, region, qcfg);
    sub.alpha = cfg.beta;
    const QpResult qb = solve_qp_fw(sub, region, qcfg);
    if (!qa.feasible || !qb.feasible) {
      out.status = EvalStatus::empty_region;
      return out;
    }
    if (!qa.converged || !qb.converged) out.status = EvalStatus::not_converged;
    // The own-cost terms of the two regularized values cancel in their
    // difference, leaving the two subproblem minima.
    total += qb.value - qa.value;
    out.responses[i] = qa.y;
    out.beta_responses[i] = qb.y;
  }
  out.value = total;
  return out;
}

double penalty_factor(const std::vector<double>& x_flat) {
  if (x_flat.empty()) return 1.0;
  double sum = 0.0;
  for (double v : x_flat) {
    const double frac = v - std::nearbyint(v);
    const double s = std::sin(M_PI * frac);
    sum += s * s;
  }
  return 1.0 + sum / static_cast<double>(x_flat.size());
}

}  // namespace gnep
