#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gnep/lp.hpp"
#include "gnep/qp.hpp"
#include "gnep/rational.hpp"

namespace gnep {

using IntVec = std::vector<long long>;
using IntProfile = std::vector<IntVec>;
using RatProfile = std::vector<RatVec>;

struct CdfgPlayer {
  int source = 0;
  int sink = 0;
  long long demand = 1;
};

enum class CostMode { dense, diagonal };

// Capacitated discrete flow game. Every player routes `demand` integral units
// from source to sink; capacities are shared across players. Costs on the own
// block are linear once rivals are fixed:
//   dense:    (rival load)' C1_i x_i + C2_i' x_i
//   diagonal: sum_e cong_i[e] * (1 + rival load_e) * x_i[e]
struct CdfgInstance {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> arcs;  // (tail, head); self-loops rejected
  IntVec capacity;
  std::vector<CdfgPlayer> players;
  CostMode cost_mode = CostMode::dense;
  std::vector<std::vector<IntVec>> c1;  // [player][arc][arc], dense mode
  std::vector<IntVec> c2;               // [player][arc], dense mode
  std::vector<IntVec> cong;             // [player][arc], diagonal mode

  struct Meta {
    std::uint64_t seed = 0;
    std::string source_mode;  // "s" or "m"
    std::string weight_mode;  // "unit" or "random"
    int schema_version = 1;
  } meta;

  std::size_t num_arcs() const { return arcs.size(); }
  std::size_t num_players() const { return players.size(); }
};

// Throws std::invalid_argument on malformed instances.
void validate(const CdfgInstance& inst);

// Node-arc incidence: +1 at the tail, -1 at the head of each arc.
std::vector<IntVec> build_incidence(const CdfgInstance& inst);

IntVec rival_load(const CdfgInstance& inst, const IntProfile& x, std::size_t player);
RatVec rival_load(const CdfgInstance& inst, const RatProfile& x, std::size_t player);

// Linear own-block cost vector C_i at a fixed rival load.
RatVec cost_vector(const CdfgInstance& inst, std::size_t player, const RatVec& load);
Rational player_cost(const CdfgInstance& inst, std::size_t player, const RatProfile& x);
Rational player_cost(const CdfgInstance& inst, std::size_t player, const IntProfile& x);

RatProfile to_rational(const IntProfile& x);
RatVec flatten_profile(const RatProfile& x);
RatProfile split_profile(const CdfgInstance& inst, const RatVec& flat);

// Conservation of every player's block plus the shared capacity constraint.
bool is_feasible_profile(const CdfgInstance& inst, const IntProfile& x);

enum class BrStatus { ok, infeasible };

struct BestResponse {
  BrStatus status = BrStatus::infeasible;
  IntVec flow;
  Rational value;
};

// Exact integral best response over X_i(x_{-i}): successive shortest paths on
// reduced costs (Dijkstra; Bellman-Ford seeds the potentials if any cost is
// negative). status == infeasible iff X_i(x_{-i}) is empty.
BestResponse best_response_flow(const CdfgInstance& inst, std::size_t player, const IntProfile& x);

// Same region and objective relaxed to the LP; duals mapped onto the stacked
// row layout of quasi_linear_data (see below).
struct PlayerLp {
  LpStatus status = LpStatus::infeasible;
  RatVec flow;
  Rational value;
  RatVec nu;  // size 2*num_nodes + 2*num_arcs, nonnegative, nu'M = C'
};
PlayerLp best_response_lp(const CdfgInstance& inst, std::size_t player, const RatProfile& x);

// Stacked >=-form description of conv(X_i(x_{-i})) for integral rivals:
// rows (A; -A; Id; -Id), rhs (b_i; -b_i; 0; load - capacity).
struct QuasiLinearData {
  RatMat M;
  RatVec e;
  RatVec C;
};
QuasiLinearData quasi_linear_data(const CdfgInstance& inst, std::size_t player,
                                  const RatProfile& x);

struct EnumCapExceeded : std::runtime_error {
  explicit EnumCapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// All integral vectors of X_i under the given residual capacities, in
// lexicographic arc order. Cycle components are included. Throws
// EnumCapExceeded past the cap.
std::vector<IntVec> enumerate_integral_flows(const CdfgInstance& inst, std::size_t player,
                                             const IntVec& residual, long long cap = 1000000);

// All feasible joint profiles, lexicographic, shared capacity applied.
std::vector<IntProfile> enumerate_profiles(const CdfgInstance& inst, long long cap = 1000000);

// Streaming variant: stops early when the visitor returns false. Returns the
// number of profiles visited; throws EnumCapExceeded past the cap.
long long for_each_profile(const CdfgInstance& inst, long long cap,
                           const std::function<bool(const IntProfile&)>& visit);

// Fast linear-minimization oracle over {y >= 0 : A y = b_i, y <= residual}
// in doubles: feasible flow by BFS augmentation, then negative-cycle
// canceling; falls back to the double simplex on an iteration cap.
LinMinOracle flow_region_oracle(const CdfgInstance& inst, std::size_t player,
                                std::vector<double> residual);

// The relaxed joint strategy set: per-player conservation plus the shared
// capacity bound on the sum of all blocks, over nonnegative flows.
LinearProgram relaxed_joint_set_lp(const CdfgInstance& inst);
LinMinOracle relaxed_joint_set_oracle(const CdfgInstance& inst);
bool in_relaxed_joint_set(const CdfgInstance& inst, const RatProfile& x);

// Seeded instance generation; identical seeds give identical instances.
struct GenParams {
  int num_nodes = 10;
  int num_players = 2;
  char source_mode = 's';    // 's' one shared connected pair, 'm' per player
  bool unit_demands = true;  // unit: d_i = 1 and diagonal costs; else d ~ U(1..10), dense costs
};
CdfgInstance generate_instance(const GenParams& params, std::uint64_t seed);

}  // namespace gnep
