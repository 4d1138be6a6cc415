#pragma once

// Shared hand-built games for the unit tests. Values asserted against these
// are computed by direct evaluation of the defining constraints.

#include "gnep/finite_game.hpp"
#include "gnep/flowgame.hpp"

namespace gnep::fixtures {

// Two scalar players on the integer grid [0,5]^2.
//   X1(x2) = { x1 : (x1-2)^2 + (x2-2)^2 <= 1 }
//   X2(x1) = { x2 >= 0 : x1 + x2 >= 2, 2*x2 - x1 <= 5, x2 + 2*x1 <= 5 }
//   pi1 = x1*x2,  pi2 = (1+|x2|)^(x1-1)
inline FiniteGnep disc_and_wedge() {
  FiniteGnep g;
  g.dims = {1, 1};
  g.table.resize(2);
  for (long long x2 = 0; x2 <= 5; ++x2) {
    std::vector<Point> pts;
    for (long long x1 = 0; x1 <= 5; ++x1)
      if ((x1 - 2) * (x1 - 2) + (x2 - 2) * (x2 - 2) <= 1) pts.push_back({rat(x1)});
    if (!pts.empty()) g.table[0][{rat(x2)}] = std::move(pts);
  }
  for (long long x1 = 0; x1 <= 5; ++x1) {
    std::vector<Point> pts;
    for (long long x2 = 0; x2 <= 5; ++x2)
      if (x1 + x2 >= 2 && 2 * x2 - x1 <= 5 && x2 + 2 * x1 <= 5) pts.push_back({rat(x2)});
    if (!pts.empty()) g.table[1][{rat(x1)}] = std::move(pts);
  }
  g.cost = [](std::size_t i, const Profile& x) -> Rational {
    if (i == 0) return x[0][0] * x[1][0];
    Rational base = 1 + rat_abs(x[1][0]);
    long e = static_cast<long>(x[0][0].get_num().get_si()) - 1;
    return rat_pow(base, e);
  };
  return g;
}

// Three scalar players over {0,1}; player 2's strategy is pinned to x0*x1.
inline FiniteGnep and_gate() {
  FiniteGnep g;
  g.dims = {1, 1, 1};
  g.table.resize(3);
  std::vector<Point> both = {{rat(0)}, {rat(1)}};
  for (long long a = 0; a <= 1; ++a)
    for (long long b = 0; b <= 1; ++b) {
      g.table[0][{rat(a), rat(b)}] = both;
      g.table[1][{rat(a), rat(b)}] = both;
      g.table[2][{rat(a), rat(b)}] = {{rat(a * b)}};
    }
  g.cost = [](std::size_t, const Profile&) -> Rational { return 0; };
  return g;
}

// Two parallel arcs from node 0 to node 1 with per-arc congestion costs
// (1, 3) for every player.
inline CdfgInstance parallel_arcs(std::size_t players, long long cap0, long long cap1,
                                  long long demand) {
  CdfgInstance inst;
  inst.num_nodes = 2;
  inst.arcs = {{0, 1}, {0, 1}};
  inst.capacity = {cap0, cap1};
  inst.players.assign(players, CdfgPlayer{0, 1, demand});
  inst.cost_mode = CostMode::diagonal;
  inst.cong.assign(players, {1, 3});
  return inst;
}

// Single-player diamond 0 -> {1, 2} -> 3, all capacities `cap`.
inline CdfgInstance diamond(long long cap, long long demand) {
  CdfgInstance inst;
  inst.num_nodes = 4;
  inst.arcs = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  inst.capacity.assign(4, cap);
  inst.players = {CdfgPlayer{0, 3, demand}};
  inst.cost_mode = CostMode::diagonal;
  inst.cong = {{1, 1, 1, 1}};
  return inst;
}

// Diamond plus a return arc 3 -> 0, so flows may carry cycle components.
inline CdfgInstance diamond_with_return(long long cap, long long demand) {
  CdfgInstance inst = diamond(cap, demand);
  inst.arcs.emplace_back(3, 0);
  inst.capacity.push_back(cap);
  inst.cong[0].push_back(1);
  return inst;
}

// Two players on an eight-node ring with unit capacities. Player 1 routes
// 0 -> 2 and also has a direct bypass arc; player 2 routes 1 -> 3 through the
// ring only. Every routing of player 2 crosses at least three ring arcs, so
// the only feasible joint profiles send player 1 over the bypass; the ring
// halves stay "reachable" for the relaxed set but not for the hull of the
// feasible profiles.
//
// Node map: 0 = source 1, 1 = source 2, 2 = sink 1, 3 = sink 2,
// 4..7 = lower ring, 8..11 = upper ring.
struct RingFixture {
  CdfgInstance inst;
  // Player-1 routes (as arc index lists): bypass, lower half, upper half.
  std::vector<std::size_t> p1_bypass, p1_lower, p1_upper;
  // Player-2 routes: entry at the upper ring, entry at the lower ring.
  std::vector<std::size_t> p2_upper, p2_lower;
};

inline RingFixture ring_bypass() {
  RingFixture fx;
  CdfgInstance& inst = fx.inst;
  inst.num_nodes = 12;
  auto arc = [&](int u, int v) {
    inst.arcs.emplace_back(u, v);
    return inst.arcs.size() - 1;
  };
  const std::size_t a_s1_lo = arc(0, 4);
  const std::size_t a_s1_up = arc(0, 8);
  const std::size_t a_bypass = arc(0, 2);
  const std::size_t r45 = arc(4, 5);
  const std::size_t r56 = arc(5, 6);
  const std::size_t r67 = arc(6, 7);
  const std::size_t r78 = arc(7, 8);
  const std::size_t r89 = arc(8, 9);
  const std::size_t r9a = arc(9, 10);
  const std::size_t rab = arc(10, 11);
  const std::size_t rb4 = arc(11, 4);
  const std::size_t a_s2_up = arc(1, 10);
  const std::size_t a_s2_lo = arc(1, 6);
  const std::size_t a_up_t2 = arc(9, 3);
  const std::size_t a_lo_t2 = arc(5, 3);
  const std::size_t a_lo_t1 = arc(7, 2);
  const std::size_t a_up_t1 = arc(11, 2);
  inst.capacity.assign(inst.num_arcs(), 1);
  inst.players = {CdfgPlayer{0, 2, 1}, CdfgPlayer{1, 3, 1}};
  inst.cost_mode = CostMode::diagonal;
  inst.cong.assign(2, IntVec(inst.num_arcs(), 1));
  fx.p1_bypass = {a_bypass};
  fx.p1_lower = {a_s1_lo, r45, r56, r67, a_lo_t1};
  fx.p1_upper = {a_s1_up, r89, r9a, rab, a_up_t1};
  fx.p2_upper = {a_s2_up, rab, rb4, r45, a_lo_t2};
  fx.p2_lower = {a_s2_lo, r67, r78, r89, a_up_t2};
  return fx;
}

inline IntVec arcs_to_flow(const CdfgInstance& inst, const std::vector<std::size_t>& arcs) {
  IntVec flow(inst.num_arcs(), 0);
  for (std::size_t e : arcs) flow[e] += 1;
  return flow;
}

// --- point sets for the structural checkers (two scalar players) ---

inline Profile pp(long long a, long long b) { return {{rat(a)}, {rat(b)}}; }

// Four staircase points: the hull of player 0's slice at x1 = 2 spans [1,4],
// so (2,2) is prescribed although player 1 only lists {1} there.
inline std::vector<Profile> staircase_points() {
  return {pp(2, 1), pp(1, 2), pp(4, 2), pp(4, 4)};
}

// Two full columns {1,5} x {1,2,3,4} plus a lone step at (3,1); the step's
// column hull {1} cannot absorb the prescribed heights {1,2,3,4}.
inline std::vector<Profile> pillars_points() {
  std::vector<Profile> pts;
  for (long long a : {1, 5})
    for (long long b = 1; b <= 4; ++b) pts.push_back(pp(a, b));
  pts.push_back(pp(3, 1));
  return pts;
}

// Product set {1,4} x {1,3}: every slice hull equals the listed points' hull.
inline std::vector<Profile> rectangle_points() {
  return {pp(1, 1), pp(4, 1), pp(1, 3), pp(4, 3)};
}

// Square corners plus the center; the center's singleton slices break the
// slice-inclusion property in both directions.
inline std::vector<Profile> square_plus_center_points() {
  return {pp(1, 1), pp(1, 3), pp(3, 1), pp(3, 3), pp(2, 2)};
}

// A triangle with one extra collinear bottom point; the hull slice at
// x0 = 2 is [2, 8/3] while only {2} is listed there.
inline std::vector<Profile> sheared_points() {
  return {pp(1, 2), pp(2, 2), pp(4, 2), pp(4, 4)};
}

// Two scalar players with asymmetric half-integral tables (approximate
// coordinates, at half-integer resolution). Not induced by any common point
// set, yet the slice-inclusion property holds everywhere.
inline FiniteGnep split_tables() {
  FiniteGnep g;
  g.dims = {1, 1};
  g.table.resize(2);
  const Rational h = rat(5, 2);
  g.table[0][{rat(1)}] = {{h}};
  g.table[0][{h}] = {{rat(1)}, {rat(4)}};
  g.table[1][{rat(1)}] = {{h}};
  g.table[1][{h}] = {{rat(1)}, {h}, {rat(4)}};
  g.cost = [](std::size_t, const Profile&) -> Rational { return 0; };
  return g;
}

// Two players over two parallel arcs with capacity 2 and demand 1. Player 0
// pays for sharing an arc with player 1, player 1 pays for avoiding player 0,
// so best responses chase each other in a cycle and no equilibrium exists.
inline CdfgInstance matching_pennies() {
  CdfgInstance inst;
  inst.num_nodes = 2;
  inst.arcs = {{0, 1}, {0, 1}};
  inst.capacity = {2, 2};
  inst.players = {CdfgPlayer{0, 1, 1}, CdfgPlayer{0, 1, 1}};
  inst.cost_mode = CostMode::dense;
  // Player 0: cost 1 when on a different arc than player 1 (identity gives
  // the matcher's complement); player 1: cost 1 when on the same arc.
  inst.c1 = {{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}};
  inst.c2 = {{0, 0}, {0, 0}};
  return inst;
}

}  // namespace gnep::fixtures
