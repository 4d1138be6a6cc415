#include "gnep/flowgame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace gnep {

namespace {

IntVec supply_vector(const CdfgInstance& inst, std::size_t player) {
  IntVec b(static_cast<std::size_t>(inst.num_nodes), 0);
  const CdfgPlayer& pl = inst.players[player];
  b[static_cast<std::size_t>(pl.source)] += pl.demand;
  b[static_cast<std::size_t>(pl.sink)] -= pl.demand;
  return b;
}

}  // namespace

void validate(const CdfgInstance& inst) {
  if (inst.num_nodes <= 0) throw std::invalid_argument("instance has no nodes");
  const std::size_t m = inst.arcs.size();
  if (inst.capacity.size() != m) throw std::invalid_argument("capacity size != arc count");
  for (std::size_t e = 0; e < m; ++e) {
    const auto [u, v] = inst.arcs[e];
    if (u < 0 || u >= inst.num_nodes || v < 0 || v >= inst.num_nodes)
      throw std::invalid_argument("arc endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop arcs are not allowed");
    if (inst.capacity[e] < 0) throw std::invalid_argument("negative capacity");
  }
  if (inst.players.empty()) throw std::invalid_argument("instance has no players");
  for (const CdfgPlayer& pl : inst.players) {
    if (pl.source < 0 || pl.source >= inst.num_nodes || pl.sink < 0 || pl.sink >= inst.num_nodes)
      throw std::invalid_argument("player terminal out of range");
    if (pl.source == pl.sink) throw std::invalid_argument("player source equals sink");
    if (pl.demand < 0) throw std::invalid_argument("negative demand");
  }
  const std::size_t n = inst.players.size();
  if (inst.cost_mode == CostMode::dense) {
    if (inst.c1.size() != n || inst.c2.size() != n)
      throw std::invalid_argument("dense cost arrays must have one entry per player");
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.c1[i].size() != m) throw std::invalid_argument("c1 row count != arc count");
      for (const IntVec& row : inst.c1[i])
        if (row.size() != m) throw std::invalid_argument("c1 column count != arc count");
      if (inst.c2[i].size() != m) throw std::invalid_argument("c2 size != arc count");
    }
  } else {
    if (inst.cong.size() != n)
      throw std::invalid_argument("congestion cost array must have one entry per player");
    for (const IntVec& row : inst.cong)
      if (row.size() != m) throw std::invalid_argument("congestion cost size != arc count");
  }
}

std::vector<IntVec> build_incidence(const CdfgInstance& inst) {
  validate(inst);
  std::vector<IntVec> a(static_cast<std::size_t>(inst.num_nodes),
                        IntVec(inst.arcs.size(), 0));
  for (std::size_t e = 0; e < inst.arcs.size(); ++e) {
    a[static_cast<std::size_t>(inst.arcs[e].first)][e] += 1;
    a[static_cast<std::size_t>(inst.arcs[e].second)][e] -= 1;
  }
  return a;
}

IntVec rival_load(const CdfgInstance& inst, const IntProfile& x, std::size_t player) {
  IntVec load(inst.num_arcs(), 0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == player) continue;
    if (x[j].size() != inst.num_arcs()) throw std::invalid_argument("flow block size mismatch");
    for (std::size_t e = 0; e < load.size(); ++e) load[e] += x[j][e];
  }
  return load;
}

RatVec rival_load(const CdfgInstance& inst, const RatProfile& x, std::size_t player) {
  RatVec load(inst.num_arcs(), Rational(0));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == player) continue;
    if (x[j].size() != inst.num_arcs()) throw std::invalid_argument("flow block size mismatch");
    for (std::size_t e = 0; e < load.size(); ++e) load[e] += x[j][e];
  }
  return load;
}

// The first index of c1 pairs with the rival load, the second with the own
// flow: coefficient on x[e] is sum_f load[f] * c1[f][e] + c2[e].
RatVec cost_vector(const CdfgInstance& inst, std::size_t player, const RatVec& load) {
  const std::size_t m = inst.num_arcs();
  if (load.size() != m) throw std::invalid_argument("load size mismatch");
  RatVec c(m, Rational(0));
  if (inst.cost_mode == CostMode::dense) {
    for (std::size_t e = 0; e < m; ++e) {
      Rational acc = rat(inst.c2[player][e]);
      for (std::size_t f = 0; f < m; ++f) acc += load[f] * rat(inst.c1[player][f][e]);
      c[e] = acc;
    }
  } else {
    for (std::size_t e = 0; e < m; ++e)
      c[e] = rat(inst.cong[player][e]) * (rat(1) + load[e]);
  }
  return c;
}

Rational player_cost(const CdfgInstance& inst, std::size_t player, const RatProfile& x) {
  if (player >= x.size()) throw std::invalid_argument("player index out of range");
  return dot(cost_vector(inst, player, rival_load(inst, x, player)), x[player]);
}

Rational player_cost(const CdfgInstance& inst, std::size_t player, const IntProfile& x) {
  return player_cost(inst, player, to_rational(x));
}

RatProfile to_rational(const IntProfile& x) {
  RatProfile out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i].reserve(x[i].size());
    for (long long v : x[i]) out[i].push_back(rat(v));
  }
  return out;
}

RatVec flatten_profile(const RatProfile& x) {
  RatVec flat;
  for (const RatVec& block : x) flat.insert(flat.end(), block.begin(), block.end());
  return flat;
}

RatProfile split_profile(const CdfgInstance& inst, const RatVec& flat) {
  const std::size_t m = inst.num_arcs();
  if (flat.size() != m * inst.num_players())
    throw std::invalid_argument("flat profile size mismatch");
  RatProfile x(inst.num_players());
  for (std::size_t i = 0; i < inst.num_players(); ++i)
    x[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * m),
                flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
  return x;
}

bool is_feasible_profile(const CdfgInstance& inst, const IntProfile& x) {
  if (x.size() != inst.num_players()) return false;
  const std::size_t m = inst.num_arcs();
  IntVec total(m, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != m) return false;
    IntVec balance(static_cast<std::size_t>(inst.num_nodes), 0);
    for (std::size_t e = 0; e < m; ++e) {
      if (x[i][e] < 0) return false;
      balance[static_cast<std::size_t>(inst.arcs[e].first)] += x[i][e];
      balance[static_cast<std::size_t>(inst.arcs[e].second)] -= x[i][e];
      total[e] += x[i][e];
    }
    const IntVec b = supply_vector(inst, i);
    if (balance != b) return false;
  }
  for (std::size_t e = 0; e < m; ++e)
    if (total[e] > inst.capacity[e]) return false;
  return true;
}

namespace {

// Exact successive-shortest-paths min-cost flow. Arc costs are rational;
// capacities and the demand are integral, so every intermediate flow is
// integral. Potentials keep reduced costs nonnegative, which certifies that
// the final flow is optimal among all flows of the same value, including
// ones with cycle components.
class MinCostFlow {
 public:
  MinCostFlow(int num_nodes, const std::vector<std::pair<int, int>>& arcs,
              const IntVec& residual, const RatVec& cost)
      : n_(num_nodes), arcs_(arcs), cap_(residual), cost_(cost),
        flow_(arcs.size(), 0), pot_(static_cast<std::size_t>(num_nodes), Rational(0)) {}

  // Routes `demand` units from s to t. Returns false if the network cannot
  // carry them.
  bool run(int s, int t, long long demand) {
    bool negative = false;
    for (const Rational& c : cost_)
      if (c < 0) negative = true;
    if (negative && !bellman_ford_potentials()) {
      throw std::logic_error("negative-cost cycle in best-response network");
    }
    long long remaining = demand;
    while (remaining > 0) {
      if (!dijkstra(s)) return false;
      if (!reached_[static_cast<std::size_t>(t)]) return false;
      long long push = remaining;
      // Walk the shortest path backwards to find the bottleneck.
      for (int v = t; v != s;) {
        const auto [e, forward] = parent_[static_cast<std::size_t>(v)];
        push = std::min(push, forward ? cap_[e] - flow_[e] : flow_[e]);
        v = forward ? arcs_[e].first : arcs_[e].second;
      }
      for (int v = t; v != s;) {
        const auto [e, forward] = parent_[static_cast<std::size_t>(v)];
        flow_[e] += forward ? push : -push;
        v = forward ? arcs_[e].first : arcs_[e].second;
      }
      remaining -= push;
      for (int v = 0; v < n_; ++v) {
        const std::size_t vi = static_cast<std::size_t>(v);
        pot_[vi] += reached_[vi] ? dist_[vi] : dist_[static_cast<std::size_t>(t)];
      }
    }
    return true;
  }

  const IntVec& flow() const { return flow_; }

  Rational value() const {
    Rational v(0);
    for (std::size_t e = 0; e < arcs_.size(); ++e) v += cost_[e] * rat(flow_[e]);
    return v;
  }

 private:
  bool bellman_ford_potentials() {
    // Virtual-source relaxation over residual arcs; flows are all zero here,
    // so only forward arcs with positive capacity participate.
    RatVec dist(static_cast<std::size_t>(n_), Rational(0));
    for (int round = 0; round < n_; ++round) {
      bool changed = false;
      for (std::size_t e = 0; e < arcs_.size(); ++e) {
        if (cap_[e] <= 0) continue;
        const std::size_t u = static_cast<std::size_t>(arcs_[e].first);
        const std::size_t v = static_cast<std::size_t>(arcs_[e].second);
        Rational cand = dist[u] + cost_[e];
        if (cand < dist[v]) {
          dist[v] = cand;
          changed = true;
        }
      }
      if (!changed) {
        pot_ = dist;
        return true;
      }
    }
    return false;
  }

  bool dijkstra(int s) {
    const std::size_t n = static_cast<std::size_t>(n_);
    dist_.assign(n, Rational(0));
    reached_.assign(n, false);
    settled_.assign(n, false);
    parent_.assign(n, {0, true});
    dist_[static_cast<std::size_t>(s)] = 0;
    reached_[static_cast<std::size_t>(s)] = true;
    for (;;) {
      int best = -1;
      for (int v = 0; v < n_; ++v) {
        const std::size_t vi = static_cast<std::size_t>(v);
        if (!reached_[vi] || settled_[vi]) continue;
        if (best < 0 || dist_[vi] < dist_[static_cast<std::size_t>(best)]) best = v;
      }
      if (best < 0) break;
      const std::size_t u = static_cast<std::size_t>(best);
      settled_[u] = true;
      for (std::size_t e = 0; e < arcs_.size(); ++e) {
        const std::size_t tail = static_cast<std::size_t>(arcs_[e].first);
        const std::size_t head = static_cast<std::size_t>(arcs_[e].second);
        if (tail == u && flow_[e] < cap_[e]) {
          Rational cand = dist_[u] + cost_[e] + pot_[u] - pot_[head];
          relax(head, cand, e, true);
        }
        if (head == u && flow_[e] > 0) {
          Rational cand = dist_[u] - cost_[e] + pot_[u] - pot_[tail];
          relax(tail, cand, e, false);
        }
      }
    }
    return true;
  }

  void relax(std::size_t v, const Rational& cand, std::size_t e, bool forward) {
    if (!reached_[v] || cand < dist_[v]) {
      reached_[v] = true;
      dist_[v] = cand;
      parent_[v] = {e, forward};
    }
  }

  int n_;
  const std::vector<std::pair<int, int>>& arcs_;
  IntVec cap_;
  RatVec cost_;
  IntVec flow_;
  RatVec pot_;
  RatVec dist_;
  std::vector<bool> reached_, settled_;
  std::vector<std::pair<std::size_t, bool>> parent_;
};

IntVec residual_capacity(const CdfgInstance& inst, const IntVec& load) {
  IntVec resid(inst.num_arcs());
  for (std::size_t e = 0; e < resid.size(); ++e) resid[e] = inst.capacity[e] - load[e];
  return resid;
}

}  // namespace

BestResponse best_response_flow(const CdfgInstance& inst, std::size_t player,
                                const IntProfile& x) {
  if (player >= inst.num_players()) throw std::invalid_argument("player index out of range");
  const IntVec load = rival_load(inst, x, player);
  const IntVec resid = residual_capacity(inst, load);
  for (long long r : resid)
    if (r < 0) return {};
  RatVec load_rat(load.size());
  for (std::size_t e = 0; e < load.size(); ++e) load_rat[e] = rat(load[e]);
  const RatVec cost = cost_vector(inst, player, load_rat);
  MinCostFlow mcf(inst.num_nodes, inst.arcs, resid, cost);
  if (!mcf.run(inst.players[player].source, inst.players[player].sink,
               inst.players[player].demand))
    return {};
  BestResponse br;
  br.status = BrStatus::ok;
  br.flow = mcf.flow();
  br.value = mcf.value();
  return br;
}

PlayerLp best_response_lp(const CdfgInstance& inst, std::size_t player, const RatProfile& x) {
  if (player >= inst.num_players()) throw std::invalid_argument("player index out of range");
  const std::size_t m = inst.num_arcs();
  const std::size_t nv = static_cast<std::size_t>(inst.num_nodes);
  const RatVec load = rival_load(inst, x, player);
  const RatVec cost = cost_vector(inst, player, load);
  const IntVec b = supply_vector(inst, player);
  const std::vector<IntVec> a = build_incidence(inst);

  LinearProgram lp;
  lp.direction = Direction::minimize;
  lp.c = cost;
  for (std::size_t v = 0; v < nv; ++v) {
    RatVec row(m);
    for (std::size_t e = 0; e < m; ++e) row[e] = rat(a[v][e]);
    lp.add_row(std::move(row), Sense::eq, rat(b[v]));
  }
  for (std::size_t e = 0; e < m; ++e) {
    RatVec row(m, Rational(0));
    row[e] = 1;
    lp.add_row(std::move(row), Sense::le, rat(inst.capacity[e]) - load[e]);
  }
  LpSolution sol = solve_lp(lp);

  PlayerLp out;
  out.status = sol.status;
  if (sol.status != LpStatus::optimal) return out;
  out.flow = sol.x;
  out.value = sol.value;

  // Map the compact duals (mu on the equalities, sigma <= 0 on the bounds)
  // onto the stacked layout (A; -A; Id; -Id):
  //   nu = (max(mu,0); max(-mu,0); C - A'mu - sigma; -sigma).
  // Then nu >= 0, nu'M = C', and e'nu equals the optimal value.
  out.nu.assign(2 * nv + 2 * m, Rational(0));
  RatVec mu(sol.dual.begin(), sol.dual.begin() + static_cast<std::ptrdiff_t>(nv));
  RatVec sigma(sol.dual.begin() + static_cast<std::ptrdiff_t>(nv), sol.dual.end());
  for (std::size_t v = 0; v < nv; ++v) {
    if (mu[v] > 0)
      out.nu[v] = mu[v];
    else
      out.nu[nv + v] = -mu[v];
  }
  for (std::size_t e = 0; e < m; ++e) {
    Rational col = cost[e] - sigma[e];
    for (std::size_t v = 0; v < nv; ++v) col -= rat(a[v][e]) * mu[v];
    out.nu[2 * nv + e] = col;
    out.nu[2 * nv + m + e] = -sigma[e];
  }
  return out;
}

QuasiLinearData quasi_linear_data(const CdfgInstance& inst, std::size_t player,
                                  const RatProfile& x) {
  const std::size_t m = inst.num_arcs();
  const std::size_t nv = static_cast<std::size_t>(inst.num_nodes);
  const RatVec load = rival_load(inst, x, player);
  const IntVec b = supply_vector(inst, player);
  const std::vector<IntVec> a = build_incidence(inst);

  QuasiLinearData data;
  data.M.assign(2 * nv + 2 * m, RatVec(m, Rational(0)));
  data.e.assign(2 * nv + 2 * m, Rational(0));
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t e = 0; e < m; ++e) {
      data.M[v][e] = rat(a[v][e]);
      data.M[nv + v][e] = rat(-a[v][e]);
    }
    data.e[v] = rat(b[v]);
    data.e[nv + v] = rat(-b[v]);
  }
  for (std::size_t e = 0; e < m; ++e) {
    data.M[2 * nv + e][e] = 1;
    data.M[2 * nv + m + e][e] = -1;
    data.e[2 * nv + e] = 0;
    data.e[2 * nv + m + e] = load[e] - rat(inst.capacity[e]);
  }
  data.C = cost_vector(inst, player, load);
  return data;
}

namespace {

struct EnumState {
  const CdfgInstance* inst;
  std::size_t player;
  const IntVec* resid;
  IntVec supply;
  IntVec fixed;    // decided net outflow per node
  IntVec rem_out;  // undecided outgoing residual per node
  IntVec rem_in;   // undecided incoming residual per node
  IntVec current;
  long long cap = 0;
  long long leaves = 0;
  long long nodes = 0;
  std::vector<IntVec>* out = nullptr;

  bool node_ok(int v) const {
    const std::size_t vi = static_cast<std::size_t>(v);
    const long long need = supply[vi] - fixed[vi];
    return -rem_in[vi] <= need && need <= rem_out[vi];
  }
};

void enum_rec(EnumState& st, std::size_t e) {
  if (++st.nodes > 64 * (st.cap + 1) * static_cast<long long>(st.inst->num_arcs() + 1))
    throw EnumCapExceeded("flow enumeration search budget exceeded");
  if (e == st.inst->num_arcs()) {
    if (++st.leaves > st.cap) throw EnumCapExceeded("flow enumeration cap exceeded");
    st.out->push_back(st.current);
    return;
  }
  const auto [u, w] = st.inst->arcs[e];
  const std::size_t ui = static_cast<std::size_t>(u);
  const std::size_t wi = static_cast<std::size_t>(w);
  const long long r = (*st.resid)[e];
  st.rem_out[ui] -= r;
  st.rem_in[wi] -= r;
  for (long long f = 0; f <= r; ++f) {
    st.fixed[ui] += (f == 0) ? 0 : 1;
    st.fixed[wi] -= (f == 0) ? 0 : 1;
    // The two increments above keep fixed consistent with current[e] = f.
    st.current[e] = f;
    if (st.node_ok(u) && st.node_ok(w)) enum_rec(st, e + 1);
  }
  st.fixed[ui] -= r;
  st.fixed[wi] += r;
  st.rem_out[ui] += r;
  st.rem_in[wi] += r;
  st.current[e] = 0;
}

}  // namespace

std::vector<IntVec> enumerate_integral_flows(const CdfgInstance& inst, std::size_t player,
                                             const IntVec& residual, long long cap) {
  if (player >= inst.num_players()) throw std::invalid_argument("player index out of range");
  if (residual.size() != inst.num_arcs()) throw std::invalid_argument("residual size mismatch");
  for (long long r : residual)
    if (r < 0) return {};
  std::vector<IntVec> out;
  EnumState st;
  st.inst = &inst;
  st.player = player;
  st.resid = &residual;
  st.supply = supply_vector(inst, player);
  st.fixed.assign(static_cast<std::size_t>(inst.num_nodes), 0);
  st.rem_out.assign(static_cast<std::size_t>(inst.num_nodes), 0);
  st.rem_in.assign(static_cast<std::size_t>(inst.num_nodes), 0);
  st.current.assign(inst.num_arcs(), 0);
  st.cap = cap;
  st.out = &out;
  for (std::size_t e = 0; e < inst.num_arcs(); ++e) {
    st.rem_out[static_cast<std::size_t>(inst.arcs[e].first)] += residual[e];
    st.rem_in[static_cast<std::size_t>(inst.arcs[e].second)] += residual[e];
  }
  for (int v = 0; v < inst.num_nodes; ++v)
    if (!st.node_ok(v)) return {};
  enum_rec(st, 0);
  return out;
}

namespace {

bool profile_rec(const CdfgInstance& inst, std::size_t player, IntVec& resid,
                 IntProfile& current, long long cap, long long& count,
                 const std::function<bool(const IntProfile&)>& visit) {
  if (player == inst.num_players()) {
    if (++count > cap) throw EnumCapExceeded("profile enumeration cap exceeded");
    return visit(current);
  }
  const std::vector<IntVec> flows = enumerate_integral_flows(inst, player, resid, cap);
  for (const IntVec& f : flows) {
    current[player] = f;
    for (std::size_t e = 0; e < resid.size(); ++e) resid[e] -= f[e];
    const bool keep_going = profile_rec(inst, player + 1, resid, current, cap, count, visit);
    for (std::size_t e = 0; e < resid.size(); ++e) resid[e] += f[e];
    if (!keep_going) return false;
  }
  current[player].assign(inst.num_arcs(), 0);
  return true;
}

}  // namespace

long long for_each_profile(const CdfgInstance& inst, long long cap,
                           const std::function<bool(const IntProfile&)>& visit) {
  IntVec resid = inst.capacity;
  IntProfile current(inst.num_players(), IntVec(inst.num_arcs(), 0));
  long long count = 0;
  profile_rec(inst, 0, resid, current, cap, count, visit);
  return count;
}

std::vector<IntProfile> enumerate_profiles(const CdfgInstance& inst, long long cap) {
  std::vector<IntProfile> out;
  for_each_profile(inst, cap, [&](const IntProfile& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

namespace {

// Double-precision feasible flow by BFS augmentation (Edmonds-Karp), then
// negative-cycle canceling against the query direction. Falls back to the
// simplex if canceling does not settle within its iteration budget.
class DoubleFlowOracle {
 public:
  DoubleFlowOracle(const CdfgInstance& inst, std::size_t player, std::vector<double> residual)
      : inst_(inst), player_(player), resid_(std::move(residual)) {
    for (double& r : resid_) r = std::max(r, 0.0);
  }

  std::vector<double> minimize(const std::vector<double>& g) {
    const std::size_t m = inst_.num_arcs();
    std::vector<double> y(m, 0.0);
    if (!route_demand(y)) return {};
    double scale = 1.0;
    for (std::size_t e = 0; e < m; ++e)
      scale = std::max(scale, std::abs(g[e]) * (1.0 + resid_[e]));
    const double eps = 1e-11 * scale;
    for (int iter = 0; iter < 300; ++iter) {
      if (!cancel_one_cycle(y, g, eps)) return y;
    }
    return simplex_fallback(g);
  }

 private:
  bool route_demand(std::vector<double>& y) const {
    const double want = static_cast<double>(inst_.players[player_].demand);
    if (want <= 0.0) return true;
    const int s = inst_.players[player_].source;
    const int t = inst_.players[player_].sink;
    double routed = 0.0;
    while (routed < want - 1e-12) {
      // BFS over residual arcs.
      std::vector<int> parent_arc(static_cast<std::size_t>(inst_.num_nodes), -1);
      std::vector<int> parent_dir(static_cast<std::size_t>(inst_.num_nodes), 0);
      std::vector<bool> seen(static_cast<std::size_t>(inst_.num_nodes), false);
      std::queue<int> q;
      q.push(s);
      seen[static_cast<std::size_t>(s)] = true;
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (std::size_t e = 0; e < inst_.num_arcs(); ++e) {
          const auto [a, b] = inst_.arcs[e];
          if (a == u && y[e] < resid_[e] - 1e-12 && !seen[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = true;
            parent_arc[static_cast<std::size_t>(b)] = static_cast<int>(e);
            parent_dir[static_cast<std::size_t>(b)] = +1;
            q.push(b);
          }
          if (b == u && y[e] > 1e-12 && !seen[static_cast<std::size_t>(a)]) {
            seen[static_cast<std::size_t>(a)] = true;
            parent_arc[static_cast<std::size_t>(a)] = static_cast<int>(e);
            parent_dir[static_cast<std::size_t>(a)] = -1;
            q.push(a);
          }
        }
      }
      if (!seen[static_cast<std::size_t>(t)]) return false;
      double push = want - routed;
      for (int v = t; v != s;) {
        const int e = parent_arc[static_cast<std::size_t>(v)];
        const int dir = parent_dir[static_cast<std::size_t>(v)];
        push = std::min(push, dir > 0 ? resid_[static_cast<std::size_t>(e)] -
                                            y[static_cast<std::size_t>(e)]
                                      : y[static_cast<std::size_t>(e)]);
        v = dir > 0 ? inst_.arcs[static_cast<std::size_t>(e)].first
                    : inst_.arcs[static_cast<std::size_t>(e)].second;
      }
      for (int v = t; v != s;) {
        const int e = parent_arc[static_cast<std::size_t>(v)];
        const int dir = parent_dir[static_cast<std::size_t>(v)];
        y[static_cast<std::size_t>(e)] += dir > 0 ? push : -push;
        v = dir > 0 ? inst_.arcs[static_cast<std::size_t>(e)].first
                    : inst_.arcs[static_cast<std::size_t>(e)].second;
      }
      routed += push;
    }
    return true;
  }

  // Bellman-Ford with a virtual source; pushes along one negative residual
  // cycle if it finds one. Returns false when no such cycle exists.
  bool cancel_one_cycle(std::vector<double>& y, const std::vector<double>& g,
                        double eps) const {
    const std::size_t n = static_cast<std::size_t>(inst_.num_nodes);
    std::vector<double> dist(n, 0.0);
    std::vector<int> parent_arc(n, -1);
    std::vector<int> parent_dir(n, 0);
    int touched = -1;
    for (std::size_t round = 0; round <= n; ++round) {
      touched = -1;
      for (std::size_t e = 0; e < inst_.num_arcs(); ++e) {
        const auto [a, b] = inst_.arcs[e];
        const std::size_t ai = static_cast<std::size_t>(a);
        const std::size_t bi = static_cast<std::size_t>(b);
        if (y[e] < resid_[e] - 1e-12 && dist[ai] + g[e] < dist[bi] - eps) {
          dist[bi] = dist[ai] + g[e];
          parent_arc[bi] = static_cast<int>(e);
          parent_dir[bi] = +1;
          touched = b;
        }
        if (y[e] > 1e-12 && dist[bi] - g[e] < dist[ai] - eps) {
          dist[ai] = dist[bi] - g[e];
          parent_arc[ai] = static_cast<int>(e);
          parent_dir[ai] = -1;
          touched = a;
        }
      }
      if (touched < 0) return false;
    }
    // A node relaxed in round n sits under a negative cycle; walk n parents
    // to land on the cycle, then collect it. Parent chains from the virtual
    // source can dead-end; bail out then and let the caller fall back.
    int v = touched;
    for (std::size_t k = 0; k < n; ++k) {
      const int e = parent_arc[static_cast<std::size_t>(v)];
      if (e < 0) return false;
      v = parent_dir[static_cast<std::size_t>(v)] > 0 ? inst_.arcs[static_cast<std::size_t>(e)].first
                                                      : inst_.arcs[static_cast<std::size_t>(e)].second;
    }
    std::vector<std::pair<int, int>> cycle;  // (arc, dir)
    const int start = v;
    double push = std::numeric_limits<double>::infinity();
    do {
      const int e = parent_arc[static_cast<std::size_t>(v)];
      const int dir = parent_dir[static_cast<std::size_t>(v)];
      if (e < 0 || static_cast<std::size_t>(cycle.size()) > n) return false;
      cycle.emplace_back(e, dir);
      push = std::min(push, dir > 0 ? resid_[static_cast<std::size_t>(e)] -
                                          y[static_cast<std::size_t>(e)]
                                    : y[static_cast<std::size_t>(e)]);
      v = dir > 0 ? inst_.arcs[static_cast<std::size_t>(e)].first
                  : inst_.arcs[static_cast<std::size_t>(e)].second;
    } while (v != start);
    if (!(push > 0.0) || !std::isfinite(push)) return false;
    for (const auto [e, dir] : cycle)
      y[static_cast<std::size_t>(e)] += dir > 0 ? push : -push;
    return true;
  }

  std::vector<double> simplex_fallback(const std::vector<double>& g) const {
    const std::size_t m = inst_.num_arcs();
    LinearProgramD lp;
    lp.direction = Direction::minimize;
    lp.c = g;
    const std::vector<IntVec> a = build_incidence(inst_);
    const IntVec b = supply_vector(inst_, player_);
    for (int v = 0; v < inst_.num_nodes; ++v) {
      const std::size_t vi = static_cast<std::size_t>(v);
      std::vector<double> row(a[vi].begin(), a[vi].end());
      lp.add_row(std::move(row), Sense::eq, static_cast<double>(b[vi]));
    }
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> row(m, 0.0);
      row[e] = 1.0;
      lp.add_row(std::move(row), Sense::le, resid_[e]);
    }
    LpSolutionD sol = solve_lp_d(lp);
    if (sol.status != LpStatus::optimal) return {};
    return sol.x;
  }

  const CdfgInstance& inst_;
  std::size_t player_;
  std::vector<double> resid_;
};

}  // namespace

LinMinOracle flow_region_oracle(const CdfgInstance& inst, std::size_t player,
                                std::vector<double> residual) {
  if (player >= inst.num_players()) throw std::invalid_argument("player index out of range");
  if (residual.size() != inst.num_arcs()) throw std::invalid_argument("residual size mismatch");
  return [inst, player, residual = std::move(residual)](const std::vector<double>& g) {
    DoubleFlowOracle oracle(inst, player, residual);
    return oracle.minimize(g);
  };
}

LinearProgram relaxed_joint_set_lp(const CdfgInstance& inst) {
  validate(inst);
  const std::size_t m = inst.num_arcs();
  const std::size_t n = inst.num_players();
  const std::vector<IntVec> a = build_incidence(inst);
  LinearProgram lp;
  lp.direction = Direction::minimize;
  lp.c.assign(n * m, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const IntVec b = supply_vector(inst, i);
    for (int v = 0; v < inst.num_nodes; ++v) {
      RatVec row(n * m, Rational(0));
      for (std::size_t e = 0; e < m; ++e) row[i * m + e] = rat(a[static_cast<std::size_t>(v)][e]);
      lp.add_row(std::move(row), Sense::eq, rat(b[static_cast<std::size_t>(v)]));
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    RatVec row(n * m, Rational(0));
    for (std::size_t i = 0; i < n; ++i) row[i * m + e] = 1;
    lp.add_row(std::move(row), Sense::le, rat(inst.capacity[e]));
  }
  return lp;
}

LinMinOracle relaxed_joint_set_oracle(const CdfgInstance& inst) {
  const LinearProgram lp = relaxed_joint_set_lp(inst);
  LinearProgramD lpd;
  lpd.direction = lp.direction;
  lpd.c.assign(lp.c.size(), 0.0);
  lpd.sense = lp.sense;
  lpd.rhs.resize(lp.rhs.size());
  lpd.rows.resize(lp.rows.size());
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    lpd.rhs[r] = to_double(lp.rhs[r]);
    lpd.rows[r].resize(lp.rows[r].size());
    for (std::size_t j = 0; j < lp.rows[r].size(); ++j) lpd.rows[r][j] = to_double(lp.rows[r][j]);
  }
  return lp_region_oracle(std::move(lpd));
}

bool in_relaxed_joint_set(const CdfgInstance& inst, const RatProfile& x) {
  if (x.size() != inst.num_players()) return false;
  const std::size_t m = inst.num_arcs();
  RatVec total(m, Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != m) return false;
    RatVec balance(static_cast<std::size_t>(inst.num_nodes), Rational(0));
    for (std::size_t e = 0; e < m; ++e) {
      if (x[i][e] < 0) return false;
      balance[static_cast<std::size_t>(inst.arcs[e].first)] += x[i][e];
      balance[static_cast<std::size_t>(inst.arcs[e].second)] -= x[i][e];
      total[e] += x[i][e];
    }
    const IntVec b = supply_vector(inst, i);
    for (int v = 0; v < inst.num_nodes; ++v)
      if (balance[static_cast<std::size_t>(v)] != rat(b[static_cast<std::size_t>(v)]))
        return false;
  }
  for (std::size_t e = 0; e < m; ++e)
    if (total[e] > rat(inst.capacity[e])) return false;
  return true;
}

}  // namespace gnep
