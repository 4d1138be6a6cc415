#include "gnep/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gnep/qp.hpp"

namespace gnep {

namespace {

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

std::vector<double> rival_load_d(const std::vector<std::vector<double>>& blocks,
                                 std::size_t player, std::size_t m) {
  std::vector<double> load(m, 0.0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j == player) continue;
    for (std::size_t e = 0; e < m; ++e) load[e] += blocks[j][e];
  }
  return load;
}

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

// d/d(rival load) of player i's cost terms at own block `delta`:
// dense C1_i delta (row action), diagonal cong_i ∘ delta.
std::vector<double> load_coupling(const CdfgInstance& inst, std::size_t player,
                                  const std::vector<double>& delta) {
  const std::size_t m = inst.num_arcs();
  std::vector<double> out(m, 0.0);
  if (inst.cost_mode == CostMode::dense) {
    for (std::size_t f = 0; f < m; ++f) {
      double acc = 0.0;
      for (std::size_t e = 0; e < m; ++e)
        acc += static_cast<double>(inst.c1[player][f][e]) * delta[e];
      out[f] = acc;
    }
  } else {
    for (std::size_t e = 0; e < m; ++e)
      out[e] = static_cast<double>(inst.cong[player][e]) * delta[e];
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Shared gradient shape of the regularized gaps: block j collects the own
// marginal cost, the rivals' cross terms at fixed maximizers, and the
// proximal pull. `weights` scales (x_j - y_j) per player (0 disables it).
std::vector<double> envelope_gradient(const CdfgInstance& inst,
                                      const std::vector<std::vector<double>>& blocks,
                                      const std::vector<std::vector<double>>& responses,
                                      double weight) {
  const std::size_t m = inst.num_arcs();
  const std::size_t n = inst.num_players();
  std::vector<std::vector<double>> delta(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e = 0; e < m; ++e) delta[i][e] = blocks[i][e] - responses[i][e];
  std::vector<std::vector<double>> coupled(n);
  std::vector<double> total(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    coupled[i] = load_coupling(inst, i, delta[i]);
    for (std::size_t e = 0; e < m; ++e) total[e] += coupled[i][e];
  }
  std::vector<double> grad(n * m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<double> own = cost_vector_d(inst, j, rival_load_d(blocks, j, m));
    for (std::size_t e = 0; e < m; ++e)
      grad[j * m + e] = own[e] + total[e] - coupled[j][e] - weight * delta[j][e];
  }
  return grad;
}

ObjectiveFn penalize(ObjectiveFn base) {
  return [base = std::move(base)](const std::vector<double>& x) {
    ObjectiveSample s = base(x);
    const double k = static_cast<double>(x.size());
    double pf = 1.0;
    if (!x.empty()) {
      double sum = 0.0;
      for (double v : x) {
        const double sn = std::sin(M_PI * (v - std::nearbyint(v)));
        sum += sn * sn;
      }
      pf = 1.0 + sum / k;
      for (std::size_t j = 0; j < x.size(); ++j)
        s.gradient[j] = pf * s.gradient[j] + s.value * (M_PI / k) * std::sin(2.0 * M_PI * x[j]);
    }
    s.value *= pf;
    return s;
  };
}

SplitMix64 start_rng(std::uint64_t seed, int start_index) {
  return stream(seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(start_index) + 1),
                kStreamDescent);
}

}  // namespace

IntProfile round_profile(const CdfgInstance& inst, const std::vector<double>& flat) {
  const std::size_t m = inst.num_arcs();
  if (flat.size() != m * inst.num_players())
    throw std::invalid_argument("flat profile size mismatch");
  IntProfile p(inst.num_players(), IntVec(m, 0));
  for (std::size_t i = 0; i < inst.num_players(); ++i)
    for (std::size_t e = 0; e < m; ++e) p[i][e] = std::llround(flat[i * m + e]);
  return p;
}

std::vector<std::vector<double>> random_starts(const CdfgInstance& inst, int count,
                                               std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("need at least one start");
  const std::size_t k = inst.num_arcs() * inst.num_players();
  long long hi = static_cast<long long>(inst.num_players());
  for (const CdfgPlayer& p : inst.players) hi = std::max(hi, p.demand);
  SplitMix64 rng = stream(seed, kStreamStarts);
  const LinMinOracle oracle = relaxed_joint_set_oracle(inst);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    std::vector<double> raw(k, 0.0);
    for (double& v : raw) v = static_cast<double>(hi) * rng.next_unit();
    const QpResult proj = project_euclidean(raw, oracle);
    if (!proj.feasible) throw std::runtime_error("relaxed joint set is empty");
    out.push_back(proj.y);
  }
  return out;
}

DescentResult local_descent(const DescentObjective& obj, std::vector<double> start,
                            long long budget, double tol, SplitMix64& rng) {
  if (budget < 1) budget = 1;
  DescentResult out;
  out.x = std::move(start);
  const std::size_t k = out.x.size();
  ObjectiveSample cur = obj.eval(out.x);
  out.evaluations = 1;

  const auto accept_now = [&]() {
    return obj.early_accept && cur.value < 1e-3 && obj.early_accept(out.x);
  };
  if (accept_now()) {
    out.early_accepted = true;
    out.value = cur.value;
    return out;
  }

  int stalls = 0;
  int tiny_steps = 0;  // consecutive accepted steps with negligible decrease
  while (out.evaluations < budget) {
    // First-order direction: a minimizing vertex of the linearization inside
    // the region, or steepest descent when unconstrained.
    std::vector<double> dir(k, 0.0);
    double gap = 0.0;
    bool have_dir = false;
    if (obj.region) {
      const std::vector<double> s = obj.region(cur.gradient);
      if (!s.empty()) {
        for (std::size_t j = 0; j < k; ++j) dir[j] = s[j] - out.x[j];
        gap = -dot(cur.gradient, dir);
        have_dir = true;
      }
    } else {
      for (std::size_t j = 0; j < k; ++j) dir[j] = -cur.gradient[j];
      gap = dot(cur.gradient, cur.gradient);
      have_dir = true;
    }

    bool progressed = false;
    if (have_dir && gap > tol) {
      double t = 1.0;
      for (int h = 0; h < 24 && out.evaluations < budget; ++h, t *= 0.5) {
        std::vector<double> trial_x = out.x;
        for (std::size_t j = 0; j < k; ++j) trial_x[j] += t * dir[j];
        const ObjectiveSample trial = obj.eval(trial_x);
        ++out.evaluations;
        if (trial.value <= cur.value - 1e-4 * t * gap) {
          const double decrease = cur.value - trial.value;
          tiny_steps = decrease < 1e-10 * (1.0 + std::abs(cur.value)) ? tiny_steps + 1 : 0;
          out.x = std::move(trial_x);
          cur = trial;
          ++out.steps;
          progressed = true;
          break;
        }
      }
    }
    if (progressed) {
      stalls = 0;
      if (accept_now()) {
        out.early_accepted = true;
        break;
      }
      // A long run of vanishing decreases is a plateau, not progress.
      if (tiny_steps >= 25) break;
      continue;
    }

    // Stationary or Armijo failure: probe a few random directions before
    // giving up (stand-in for gradient sampling on the nonsmooth merits).
    if (stalls >= 3) break;
    ++stalls;
    bool improved = false;
    for (int attempt = 0; attempt < 4 && !improved && out.evaluations < budget; ++attempt) {
      std::vector<double> r(k, 0.0);
      for (double& v : r) v = 2.0 * rng.next_unit() - 1.0;
      std::vector<double> d(k, 0.0);
      if (obj.region) {
        const std::vector<double> s = obj.region(r);
        if (s.empty()) break;
        for (std::size_t j = 0; j < k; ++j) d[j] = s[j] - out.x[j];
      } else {
        d = r;
      }
      double t = 1.0;
      for (int h = 0; h < 12 && out.evaluations < budget; ++h, t *= 0.5) {
        std::vector<double> trial_x = out.x;
        for (std::size_t j = 0; j < k; ++j) trial_x[j] += t * d[j];
        const ObjectiveSample trial = obj.eval(trial_x);
        ++out.evaluations;
        if (trial.value < cur.value - 1e-12) {
          out.x = std::move(trial_x);
          cur = trial;
          ++out.steps;
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
    if (accept_now()) {
      out.early_accepted = true;
      break;
    }
  }
  out.value = cur.value;
  return out;
}

DescentObjective descent_objective(const CdfgInstance& inst, const SolveConfig& cfg) {
  DescentObjective obj;
  const std::size_t m = inst.num_arcs();
  switch (cfg.method) {
    case Method::vhat: {
      obj.eval = [inst, m](const std::vector<double>& x) {
        ObjectiveSample s;
        RatProfile xr(inst.num_players(), RatVec(m));
        for (std::size_t i = 0; i < inst.num_players(); ++i)
          for (std::size_t e = 0; e < m; ++e) xr[i][e] = Rational(x[i * m + e]);
        const NiEvaluation ev = v_hat_convexified(inst, xr);
        if (ev.status == EvalStatus::empty_region || ev.status == EvalStatus::infeasible_point) {
          s.value = std::numeric_limits<double>::infinity();
          s.gradient.assign(x.size(), 0.0);
          return s;
        }
        s.value = ev.value.get_d();
        const std::vector<std::vector<double>> blocks = split_flat(inst, x);
        std::vector<std::vector<double>> resp(inst.num_players(), std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < inst.num_players(); ++i)
          for (std::size_t e = 0; e < m; ++e) resp[i][e] = ev.responses[i][e].get_d();
        s.gradient = envelope_gradient(inst, blocks, resp, 0.0);
        return s;
      };
      obj.region = relaxed_joint_set_oracle(inst);
      break;
    }
    case Method::valpha: {
      const double alpha = cfg.alpha;
      obj.eval = [inst, alpha](const std::vector<double>& x) {
        ObjectiveSample s;
        AlphaConfig acfg;
        acfg.alpha = alpha;
        const AlphaEvaluation ev = v_alpha(inst, x, acfg);
        if (ev.status == EvalStatus::empty_region) {
          s.value = std::numeric_limits<double>::infinity();
          s.gradient.assign(x.size(), 0.0);
          return s;
        }
        s.value = ev.value;
        s.gradient = envelope_gradient(inst, split_flat(inst, x), ev.responses, alpha);
        return s;
      };
      obj.region = relaxed_joint_set_oracle(inst);
      break;
    }
    case Method::vbar: {
      const BarConfig bcfg{cfg.alpha, cfg.beta, cfg.c, {}};
      obj.eval = [inst, bcfg, m](const std::vector<double>& x) {
        ObjectiveSample s;
        const BarEvaluation ev = v_bar(inst, x, bcfg);
        if (ev.status == EvalStatus::empty_region) {
          s.value = std::numeric_limits<double>::infinity();
          s.gradient.assign(x.size(), 0.0);
          return s;
        }
        s.value = ev.value;
        const std::size_t n = inst.num_players();
        const std::vector<std::vector<double>> blocks = split_flat(inst, x);
        // Difference of the two regularized gaps at fixed maximizers: the
        // shared cost-at-x terms cancel, leaving the cross terms of the two
        // maximizer sets, the two proximal pulls, and the projection push.
        std::vector<std::vector<double>> coupled(n);
        std::vector<double> total(m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<double> diff(m, 0.0);
          for (std::size_t e = 0; e < m; ++e)
            diff[e] = ev.beta_responses[i][e] - ev.responses[i][e];
          coupled[i] = load_coupling(inst, i, diff);
          for (std::size_t e = 0; e < m; ++e) total[e] += coupled[i][e];
        }
        s.gradient.assign(x.size(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t e = 0; e < m; ++e) {
            const double xj = blocks[j][e];
            s.gradient[j * m + e] = total[e] - coupled[j][e] +
                                    bcfg.beta * (xj - ev.beta_responses[j][e]) -
                                    bcfg.alpha * (xj - ev.responses[j][e]) +
                                    2.0 * bcfg.c * (xj - ev.projection[j * m + e]);
          }
        return s;
      };
      obj.region = {};  // defined on all of R^k
      break;
    }
    default:
      throw std::invalid_argument("descent objective requires vhat, valpha, or vbar");
  }
  if (cfg.penalized) obj.eval = penalize(std::move(obj.eval));
  return obj;
}

SolveResult multistart_round(const CdfgInstance& inst, const SolveConfig& cfg) {
  if (cfg.method != Method::vhat && cfg.method != Method::valpha && cfg.method != Method::vbar)
    throw std::invalid_argument("multistart requires vhat, valpha, or vbar");
  if (cfg.method == Method::vbar && !(cfg.alpha < cfg.beta))
    throw std::invalid_argument("vbar requires alpha < beta");
  if (cfg.starts < 1 || cfg.budget < 1) throw std::invalid_argument("budgets must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const auto expired = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >=
           cfg.time_limit_seconds;
  };

  SolveResult res;
  if (cfg.time_limit_seconds <= 0.0) {
    res.status = SolveStatus::timeout;
    return res;
  }

  const std::vector<std::vector<double>> starts = random_starts(inst, cfg.starts, cfg.seed);

  struct PerStart {
    StartTrace trace;
    IntProfile rounded;
  };

  const int batch = std::max(1, 2 * max_threads(cfg.exec));
  bool hit_time_limit = false;
  for (int base = 0; base < cfg.starts && res.status != SolveStatus::gne_found; base += batch) {
    if (expired()) {
      hit_time_limit = true;
      break;
    }
    const int count = std::min(batch, cfg.starts - base);
    std::vector<PerStart> slots(static_cast<std::size_t>(count));
    for_each_index(cfg.exec, static_cast<std::size_t>(count), [&](std::size_t t) {
      const int idx = base + static_cast<int>(t);
      // The region oracle mutates its captured LP, so every start gets its
      // own objective instance.
      DescentObjective obj = descent_objective(inst, cfg);
      obj.early_accept = [&inst](const std::vector<double>& x) {
        return is_gne(inst, round_profile(inst, x));
      };
      SplitMix64 rng = start_rng(cfg.seed, idx);
      ObjectiveSample first = obj.eval(starts[static_cast<std::size_t>(idx)]);
      DescentResult dr =
          local_descent(obj, starts[static_cast<std::size_t>(idx)], cfg.budget, cfg.tol, rng);
      PerStart& slot = slots[t];
      slot.trace.index = idx;
      slot.trace.initial_value = first.value;
      slot.trace.final_value = dr.value;
      slot.trace.evaluations = dr.evaluations + 1;
      slot.rounded = round_profile(inst, dr.x);
      slot.trace.rounded_feasible = is_feasible_profile(inst, slot.rounded);
      slot.trace.accepted = dr.early_accepted || is_gne(inst, slot.rounded);
    });
    for (const PerStart& slot : slots) {
      res.trace.push_back(slot.trace);
      res.evaluations_used += slot.trace.evaluations;
      res.best_descent_value = std::min(res.best_descent_value, slot.trace.final_value);
      res.starts_used = slot.trace.index + 1;
      if (slot.trace.accepted) {
        res.status = SolveStatus::gne_found;
        res.profile = slot.rounded;
        res.value = 0;
        break;
      }
    }
  }
  if (res.status != SolveStatus::gne_found)
    res.status = hit_time_limit ? SolveStatus::timeout : SolveStatus::budget_exhausted;
  return res;
}

SolveResult gauss_seidel(const CdfgInstance& inst, const IntProfile& x0, int max_rounds) {
  if (!is_feasible_profile(inst, x0)) throw std::invalid_argument("initial profile infeasible");
  SolveResult res;
  IntProfile cur = x0;
  for (int round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < inst.num_players(); ++i) {
      const BestResponse br = best_response_flow(inst, i, cur);
      ++res.evaluations_used;
      if (br.status != BrStatus::ok) {
        res.status = SolveStatus::budget_exhausted;
        res.profile = cur;
        res.diagnostic = "player " + std::to_string(i) + " lost every strategy in round " +
                         std::to_string(round);
        return res;
      }
      if (br.value < player_cost(inst, i, cur)) {
        cur[i] = br.flow;
        changed = true;
      }
    }
    if (!changed) {
      // No player improves strictly, so the profile is an equilibrium.
      res.status = SolveStatus::gne_found;
      res.profile = cur;
      res.value = 0;
      if (!is_gne(inst, cur)) throw std::logic_error("quiet round is not an equilibrium");
      return res;
    }
  }
  res.status = SolveStatus::budget_exhausted;
  res.profile = cur;
  res.diagnostic = "round cap reached without a quiet round";
  return res;
}

SolveResult solve_reformulation_exhaustive(const CdfgInstance& inst, long long enum_cap) {
  // The cap guards |X| itself, so count before scoring anything; counting is
  // orders of magnitude cheaper than the per-profile LP solves and refusal
  // must not depend on where a zero happens to sit in enumeration order.
  for_each_profile(inst, enum_cap, [](const IntProfile&) { return true; });

  SolveResult res;
  bool have = false;
  Rational best;
  IntProfile best_profile;
  long long seen = 0;
  for_each_profile(inst, enum_cap, [&](const IntProfile& p) {
    ++seen;
    const RatProfile xr = to_rational(p);
    Rational score = 0;
    for (std::size_t i = 0; i < inst.num_players(); ++i) {
      const PlayerLp lp = best_response_lp(inst, i, xr);
      if (lp.status != LpStatus::optimal)
        throw std::logic_error("best-response LP failed on a feasible profile");
      // Strong duality: the dual value of the relaxed best response turns the
      // per-player term into the exact convexified gap.
      score += player_cost(inst, i, p) - lp.value;
    }
    if (!have || score < best) {
      have = true;
      best = score;
      best_profile = p;
    }
    return best != 0;  // zero is the global lower bound; stop once reached
  });
  res.evaluations_used = seen;
  if (!have) {
    res.status = SolveStatus::no_gne_certified;
    res.diagnostic = "no feasible integral profile";
    return res;
  }
  res.profile = best_profile;
  res.value = best;
  if (best == 0) {
    res.status = SolveStatus::gne_found;
    if (!is_gne(inst, best_profile)) throw std::logic_error("zero gap is not an equilibrium");
  } else {
    res.status = SolveStatus::no_gne_certified;
  }
  return res;
}

SolveResult solve(const CdfgInstance& inst, const SolveConfig& cfg) {
  switch (cfg.method) {
    case Method::vhat:
    case Method::valpha:
    case Method::vbar:
      return multistart_round(inst, cfg);
    case Method::reformulation_exhaustive:
      return solve_reformulation_exhaustive(inst, cfg.enum_cap);
    case Method::gauss_seidel: {
      IntProfile x0;
      bool found = false;
      for_each_profile(inst, cfg.enum_cap, [&](const IntProfile& p) {
        x0 = p;
        found = true;
        return false;
      });
      if (!found) {
        SolveResult res;
        res.status = SolveStatus::budget_exhausted;
        res.diagnostic = "no feasible integral profile to start from";
        return res;
      }
      return gauss_seidel(inst, x0, cfg.max_rounds);
    }
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace gnep
