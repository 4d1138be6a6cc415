#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "gnep/flowgame.hpp"
#include "gnep/hull.hpp"
#include "gnep/rng.hpp"

using namespace gnep;

namespace {

Rational flow_cost(const CdfgInstance& inst, std::size_t player, const IntVec& load,
                   const IntVec& flow) {
  RatVec load_rat(load.size()), flow_rat(flow.size());
  for (std::size_t e = 0; e < load.size(); ++e) {
    load_rat[e] = rat(load[e]);
    flow_rat[e] = rat(flow[e]);
  }
  return dot(cost_vector(inst, player, load_rat), flow_rat);
}

// Exhaustive best response: minimum cost over every enumerated flow.
Rational brute_best_response(const CdfgInstance& inst, std::size_t player,
                             const IntProfile& x) {
  const IntVec load = rival_load(inst, x, player);
  IntVec resid(inst.num_arcs());
  for (std::size_t e = 0; e < resid.size(); ++e) resid[e] = inst.capacity[e] - load[e];
  const std::vector<IntVec> flows = enumerate_integral_flows(inst, player, resid, 500000);
  REQUIRE(!flows.empty());
  Rational best = flow_cost(inst, player, load, flows[0]);
  for (const IntVec& f : flows) best = std::min(best, flow_cost(inst, player, load, f));
  return best;
}

bool approx_in_relaxed_set(const CdfgInstance& inst, const std::vector<double>& flat,
                           double tol) {
  const std::size_t m = inst.num_arcs();
  if (flat.size() != m * inst.num_players()) return false;
  std::vector<double> total(m, 0.0);
  for (std::size_t i = 0; i < inst.num_players(); ++i) {
    std::vector<double> balance(static_cast<std::size_t>(inst.num_nodes), 0.0);
    for (std::size_t e = 0; e < m; ++e) {
      const double v = flat[i * m + e];
      if (v < -tol) return false;
      balance[static_cast<std::size_t>(inst.arcs[e].first)] += v;
      balance[static_cast<std::size_t>(inst.arcs[e].second)] -= v;
      total[e] += v;
    }
    balance[static_cast<std::size_t>(inst.players[i].source)] -=
        static_cast<double>(inst.players[i].demand);
    balance[static_cast<std::size_t>(inst.players[i].sink)] +=
        static_cast<double>(inst.players[i].demand);
    for (double b : balance)
      if (std::abs(b) > tol) return false;
  }
  for (std::size_t e = 0; e < m; ++e)
    if (total[e] > static_cast<double>(inst.capacity[e]) + tol) return false;
  return true;
}

}  // namespace

TEST_CASE("incidence matrix and validation") {
  const CdfgInstance inst = fixtures::diamond(1, 1);
  const std::vector<IntVec> a = build_incidence(inst);
  const std::vector<IntVec> expected = {
      {1, 1, 0, 0}, {-1, 0, 1, 0}, {0, -1, 0, 1}, {0, 0, -1, -1}};
  CHECK(a == expected);

  CdfgInstance bad = inst;
  bad.arcs[1] = {2, 2};
  CHECK_THROWS_AS(build_incidence(bad), std::invalid_argument);

  bad = inst;
  bad.capacity.pop_back();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  bad = inst;
  bad.players[0].sink = bad.players[0].source;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("best response on parallel arcs") {
  // Alone with demand 2 and unit capacities both arcs are forced.
  CdfgInstance solo = fixtures::parallel_arcs(1, 1, 1, 2);
  BestResponse br = best_response_flow(solo, 0, {{0, 0}});
  REQUIRE(br.status == BrStatus::ok);
  CHECK(br.flow == IntVec{1, 1});
  CHECK(br.value == rat(4));

  // A rival saturating the cheap arc pushes the response to the other one.
  CdfgInstance duo = fixtures::parallel_arcs(2, 1, 1, 1);
  br = best_response_flow(duo, 0, {{0, 0}, {1, 0}});
  REQUIRE(br.status == BrStatus::ok);
  CHECK(br.flow == IntVec{0, 1});
  CHECK(br.value == rat(3));

  // With room on both arcs the congested cheap arc still wins: 1*(1+1) < 3.
  CdfgInstance wide = fixtures::parallel_arcs(2, 2, 2, 1);
  br = best_response_flow(wide, 0, {{0, 0}, {1, 0}});
  REQUIRE(br.status == BrStatus::ok);
  CHECK(br.flow == IntVec{1, 0});
  CHECK(br.value == rat(2));
}

TEST_CASE("best response detects an empty strategy set") {
  CdfgInstance duo = fixtures::parallel_arcs(2, 1, 1, 2);
  const BestResponse br = best_response_flow(duo, 0, {{0, 0}, {1, 1}});
  CHECK(br.status == BrStatus::infeasible);
}

TEST_CASE("flow enumeration matches hand counts") {
  const CdfgInstance d11 = fixtures::diamond(1, 1);
  CHECK(enumerate_integral_flows(d11, 0, d11.capacity).size() == 2);

  const CdfgInstance d22 = fixtures::diamond(2, 2);
  const auto flows = enumerate_integral_flows(d22, 0, d22.capacity);
  REQUIRE(flows.size() == 3);
  // Lexicographic in arc order: 0, 1 or 2 units over the top branch.
  CHECK(flows[0] == IntVec{0, 2, 0, 2});
  CHECK(flows[1] == IntVec{1, 1, 1, 1});
  CHECK(flows[2] == IntVec{2, 0, 2, 0});

  // The return arc admits exactly one cycle-augmented routing: both paths
  // plus the return arc. (Path one plus the complementary cycle and path two
  // plus its complementary cycle are the same vector.)
  const CdfgInstance ret = fixtures::diamond_with_return(1, 1);
  CHECK(enumerate_integral_flows(ret, 0, ret.capacity).size() == 3);

  // Demand zero keeps the circulations: zero flow and the two unit cycles.
  CdfgInstance circ = fixtures::diamond_with_return(1, 0);
  CHECK(enumerate_integral_flows(circ, 0, circ.capacity).size() == 3);

  CHECK_THROWS_AS(enumerate_integral_flows(d22, 0, d22.capacity, 2), EnumCapExceeded);
}

TEST_CASE("best response matches exhaustive search on generated instances") {
  int used = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenParams params;
    params.num_nodes = 6;
    params.num_players = 2;
    params.unit_demands = (seed % 2 == 0);
    const CdfgInstance inst = generate_instance(params, seed);
    std::vector<IntProfile> profiles;
    try {
      profiles = enumerate_profiles(inst, 20000);
    } catch (const EnumCapExceeded&) {
      continue;
    }
    REQUIRE(!profiles.empty());
    ++used;
    const IntProfile& x = profiles.front();
    for (std::size_t i = 0; i < inst.num_players(); ++i) {
      const BestResponse br = best_response_flow(inst, i, x);
      REQUIRE(br.status == BrStatus::ok);
      CHECK(br.value == brute_best_response(inst, i, x));
      // The reported flow must itself be feasible at the reported value.
      const IntVec load = rival_load(inst, x, i);
      CHECK(flow_cost(inst, i, load, br.flow) == br.value);
      IntProfile swapped = x;
      swapped[i] = br.flow;
      CHECK(is_feasible_profile(inst, swapped));
    }
  }
  CHECK(used >= 10);
}

TEST_CASE("per-player LP equals the integral best response") {
  // The constraint matrix is an incidence matrix plus box rows, so the LP
  // relaxation of the best response always has an integral optimum.
  int checked = 0;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    GenParams params;
    params.num_nodes = 5 + static_cast<int>(seed % 3);
    params.num_players = 2;
    params.unit_demands = (seed % 2 == 0);
    const CdfgInstance inst = generate_instance(params, seed);
    std::vector<IntProfile> profiles;
    try {
      profiles = enumerate_profiles(inst, 20000);
    } catch (const EnumCapExceeded&) {
      continue;
    }
    REQUIRE(!profiles.empty());
    const IntProfile& x = profiles.front();
    for (std::size_t i = 0; i < inst.num_players(); ++i) {
      const BestResponse br = best_response_flow(inst, i, x);
      REQUIRE(br.status == BrStatus::ok);
      const PlayerLp lp = best_response_lp(inst, i, to_rational(x));
      REQUIRE(lp.status == LpStatus::optimal);
      CHECK(lp.value == br.value);
      ++checked;
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("LP duals certify the stacked description") {
  for (std::uint64_t seed = 200; seed < 212; ++seed) {
    GenParams params;
    params.num_nodes = 5;
    params.num_players = 2;
    params.unit_demands = (seed % 2 == 0);
    const CdfgInstance inst = generate_instance(params, seed);
    const std::size_t m = inst.num_arcs();
    const std::size_t nv = static_cast<std::size_t>(inst.num_nodes);
    RatProfile zero(inst.num_players(), RatVec(m, Rational(0)));
    // Zero rivals leave the full capacities; the region is nonempty because
    // generation certifies a feasible joint profile.
    for (std::size_t i = 0; i < inst.num_players(); ++i) {
      const PlayerLp lp = best_response_lp(inst, i, zero);
      REQUIRE(lp.status == LpStatus::optimal);
      const QuasiLinearData data = quasi_linear_data(inst, i, zero);
      REQUIRE(data.M.size() == 2 * nv + 2 * m);
      REQUIRE(data.e.size() == 2 * nv + 2 * m);
      REQUIRE(lp.nu.size() == 2 * nv + 2 * m);
      // nu >= 0, nu'M = C', e'nu = optimal value -- all exact.
      for (const Rational& v : lp.nu) CHECK(v >= 0);
      for (std::size_t col = 0; col < m; ++col) {
        Rational acc(0);
        for (std::size_t r = 0; r < data.M.size(); ++r) acc += lp.nu[r] * data.M[r][col];
        CHECK(acc == data.C[col]);
      }
      CHECK(dot(data.e, lp.nu) == lp.value);
      // The primal flow satisfies the stacked rows.
      for (std::size_t r = 0; r < data.M.size(); ++r)
        CHECK(dot(data.M[r], lp.flow) >= data.e[r]);
    }
  }
}

TEST_CASE("dense representation of diagonal costs agrees") {
  const CdfgInstance diag = fixtures::parallel_arcs(2, 2, 2, 1);
  CdfgInstance dense = diag;
  dense.cost_mode = CostMode::dense;
  dense.cong.clear();
  // sum_e cong_e (1 + load_e) x_e  =  cong'x + load' diag(cong) x.
  dense.c1.assign(2, {{1, 0}, {0, 3}});
  dense.c2.assign(2, {1, 3});
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    RatProfile x(2);
    for (auto& block : x) block = {rat(rng.next_int(0, 2)), rat(rng.next_int(0, 2))};
    for (std::size_t i = 0; i < 2; ++i) {
      const RatVec load = rival_load(diag, x, i);
      CHECK(cost_vector(diag, i, load) == cost_vector(dense, i, load));
      CHECK(player_cost(diag, i, x) == player_cost(dense, i, x));
    }
  }
}

TEST_CASE("joint profile enumeration") {
  const CdfgInstance tight = fixtures::parallel_arcs(2, 1, 1, 1);
  const auto tight_profiles = enumerate_profiles(tight);
  REQUIRE(tight_profiles.size() == 2);
  for (const IntProfile& p : tight_profiles) CHECK(is_feasible_profile(tight, p));

  const CdfgInstance pennies = fixtures::matching_pennies();
  CHECK(enumerate_profiles(pennies).size() == 4);

  const fixtures::RingFixture fx = fixtures::ring_bypass();
  const auto ring_profiles = enumerate_profiles(fx.inst);
  REQUIRE(ring_profiles.size() == 4);
  const IntVec bypass = fixtures::arcs_to_flow(fx.inst, fx.p1_bypass);
  std::set<IntVec> second_blocks;
  for (const IntProfile& p : ring_profiles) {
    CHECK(is_feasible_profile(fx.inst, p));
    CHECK(p[0] == bypass);
    second_blocks.insert(p[1]);
  }
  CHECK(second_blocks.size() == 4);
  CHECK(second_blocks.count(fixtures::arcs_to_flow(fx.inst, fx.p2_upper)) == 1);
  CHECK(second_blocks.count(fixtures::arcs_to_flow(fx.inst, fx.p2_lower)) == 1);

  // Early-exit streaming visits exactly one profile.
  long long seen = 0;
  for_each_profile(fx.inst, 1000, [&](const IntProfile&) {
    ++seen;
    return false;
  });
  CHECK(seen == 1);
}

TEST_CASE("ring midpoint separates the relaxed set from the hull") {
  const fixtures::RingFixture fx = fixtures::ring_bypass();
  const auto profiles = enumerate_profiles(fx.inst);
  REQUIRE(profiles.size() == 4);

  auto halves = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    RatVec v(fx.inst.num_arcs(), Rational(0));
    for (std::size_t e : a) v[e] += rat(1, 2);
    for (std::size_t e : b) v[e] += rat(1, 2);
    return v;
  };
  RatProfile mid(2);
  mid[0] = halves(fx.p1_lower, fx.p1_upper);
  mid[1] = halves(fx.p2_upper, fx.p2_lower);
  CHECK(in_relaxed_joint_set(fx.inst, mid));

  std::vector<RatVec> hull_points;
  for (const IntProfile& p : profiles) hull_points.push_back(flatten_profile(to_rational(p)));
  const HullResult hr = hull_membership(flatten_profile(mid), hull_points);
  CHECK_FALSE(hr.inside);
  // Every feasible profile itself sits in both sets.
  for (const IntProfile& p : profiles) {
    CHECK(in_relaxed_joint_set(fx.inst, to_rational(p)));
    CHECK(hull_membership(flatten_profile(to_rational(p)), hull_points).inside);
  }
}

TEST_CASE("relaxed-set oracle minimizes linear objectives") {
  const fixtures::RingFixture fx = fixtures::ring_bypass();
  const LinMinOracle oracle = relaxed_joint_set_oracle(fx.inst);
  const LinearProgram base = relaxed_joint_set_lp(fx.inst);
  const std::size_t k = base.c.size();
  SplitMix64 rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<double> g(k);
    for (double& v : g) v = 2.0 * rng.next_unit() - 1.0;
    const std::vector<double> y = oracle(g);
    REQUIRE(!y.empty());
    CHECK(approx_in_relaxed_set(fx.inst, y, 1e-7));
    // Cross-check the optimum against the exact solver: rationalize the
    // direction through a fixed denominator so both sides see the same data.
    LinearProgram lp = base;
    for (std::size_t j = 0; j < k; ++j)
      lp.c[j] = rat(static_cast<long long>(std::llround(g[j] * 65536)), 65536);
    std::vector<double> gq(k);
    for (std::size_t j = 0; j < k; ++j) gq[j] = to_double(lp.c[j]);
    const LpSolution exact = solve_lp(lp);
    REQUIRE(exact.status == LpStatus::optimal);
    const std::vector<double> yq = oracle(gq);
    REQUIRE(!yq.empty());
    double got = 0.0;
    for (std::size_t j = 0; j < k; ++j) got += gq[j] * yq[j];
    CHECK(got == doctest::Approx(to_double(exact.value)).epsilon(1e-6));
  }
}

TEST_CASE("per-player flow oracle agrees with the simplex") {
  SplitMix64 rng(2024);
  for (std::uint64_t seed = 300; seed < 312; ++seed) {
    GenParams params;
    params.num_nodes = 5 + static_cast<int>(seed % 2);
    params.num_players = 2;
    const CdfgInstance inst = generate_instance(params, seed);
    const std::size_t m = inst.num_arcs();
    std::vector<double> resid(m);
    for (std::size_t e = 0; e < m; ++e) resid[e] = static_cast<double>(inst.capacity[e]);
    const LinMinOracle oracle = flow_region_oracle(inst, 0, resid);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<double> g(m);
      for (double& v : g) v = 2.0 * rng.next_unit() - 1.0;
      const std::vector<double> y = oracle(g);
      REQUIRE(!y.empty());
      // Feasibility of the oracle's answer.
      std::vector<double> balance(static_cast<std::size_t>(inst.num_nodes), 0.0);
      for (std::size_t e = 0; e < m; ++e) {
        CHECK(y[e] >= -1e-9);
        CHECK(y[e] <= resid[e] + 1e-9);
        balance[static_cast<std::size_t>(inst.arcs[e].first)] += y[e];
        balance[static_cast<std::size_t>(inst.arcs[e].second)] -= y[e];
      }
      balance[static_cast<std::size_t>(inst.players[0].source)] -= 1.0;
      balance[static_cast<std::size_t>(inst.players[0].sink)] += 1.0;
      for (double b : balance) CHECK(std::abs(b) <= 1e-7);
      // Optimality against the double simplex on the same region.
      LinearProgramD lp;
      lp.direction = Direction::minimize;
      lp.c = g;
      const std::vector<IntVec> a = build_incidence(inst);
      for (int v = 0; v < inst.num_nodes; ++v) {
        std::vector<double> row(a[static_cast<std::size_t>(v)].begin(),
                                a[static_cast<std::size_t>(v)].end());
        double rhs = 0.0;
        if (v == inst.players[0].source) rhs = 1.0;
        if (v == inst.players[0].sink) rhs = -1.0;
        lp.add_row(std::move(row), Sense::eq, rhs);
      }
      for (std::size_t e = 0; e < m; ++e) {
        std::vector<double> row(m, 0.0);
        row[e] = 1.0;
        lp.add_row(std::move(row), Sense::le, resid[e]);
      }
      const LpSolutionD ref = solve_lp_d(lp);
      REQUIRE(ref.status == LpStatus::optimal);
      double got = 0.0;
      for (std::size_t e = 0; e < m; ++e) got += g[e] * y[e];
      CHECK(got <= ref.value + 1e-6);
      CHECK(got >= ref.value - 1e-6);
    }
  }
}

TEST_CASE("generator is deterministic and certifies feasibility") {
  GenParams params;
  params.num_nodes = 10;
  params.num_players = 2;
  params.unit_demands = true;
  const CdfgInstance a = generate_instance(params, 42);
  const CdfgInstance b = generate_instance(params, 42);
  CHECK(a.arcs == b.arcs);
  CHECK(a.capacity == b.capacity);
  CHECK(a.cong == b.cong);
  CHECK(a.players.size() == b.players.size());
  for (std::size_t i = 0; i < a.players.size(); ++i) {
    CHECK(a.players[i].source == b.players[i].source);
    CHECK(a.players[i].sink == b.players[i].sink);
    CHECK(a.players[i].demand == b.players[i].demand);
  }
  CHECK(a.meta.seed == 42);
  CHECK(a.meta.weight_mode == "unit");
  CHECK(a.cost_mode == CostMode::diagonal);
  for (const CdfgPlayer& pl : a.players) CHECK(pl.demand == 1);

  const CdfgInstance c = generate_instance(params, 43);
  CHECK((a.arcs != c.arcs || a.capacity != c.capacity || a.cong != c.cong));

  // Shared-pair mode gives every player the same terminals.
  for (const CdfgPlayer& pl : a.players) {
    CHECK(pl.source == a.players[0].source);
    CHECK(pl.sink == a.players[0].sink);
  }

  GenParams rnd;
  rnd.num_nodes = 6;
  rnd.num_players = 3;
  rnd.source_mode = 'm';
  rnd.unit_demands = false;
  const CdfgInstance d = generate_instance(rnd, 7);
  CHECK(d.cost_mode == CostMode::dense);
  CHECK(d.meta.weight_mode == "random");
  CHECK(d.meta.source_mode == "m");
  for (const CdfgPlayer& pl : d.players) {
    CHECK(pl.demand >= 1);
    CHECK(pl.demand <= 10);
  }

  // Generated instances admit at least one feasible joint profile.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GenParams small;
    small.num_nodes = 6;
    small.num_players = 2;
    small.unit_demands = (seed % 2 == 0);
    const CdfgInstance inst = generate_instance(small, seed);
    bool found = false;
    for_each_profile(inst, 2000000, [&](const IntProfile& p) {
      found = is_feasible_profile(inst, p);
      return false;
    });
    CHECK(found);
  }
}
