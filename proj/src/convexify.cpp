#include "gnep/convexify.hpp"

#include <algorithm>
#include <stdexcept>

#include "gnep/hull.hpp"
#include "gnep/lp.hpp"
#include "gnep/rng.hpp"

namespace gnep {

namespace {

bool profile_less(const Profile& a, const Profile& b) { return flatten(a) < flatten(b); }

void sort_dedup_profiles(std::vector<Profile>& v) {
  std::sort(v.begin(), v.end(), profile_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Point> sorted_points(const std::vector<Point>& pts) {
  std::vector<Point> out = pts;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Lexicographically refined support maximizer of one slice of conv(S): the
// free block is player i's, every other block is pinned to `key`. Works in
// convex-weight variables, one per element of S, so every answer is exact and
// automatically a point of the slice. The lexicographic refinement (objective
// value pinned, then coordinate by coordinate) always lands on an extreme
// point of the slice.
class SliceSupport {
 public:
  SliceSupport(const FiniteGnep& game, std::size_t i, const std::vector<Profile>& S,
               const RivalKey& key)
      : k_(static_cast<std::size_t>(game.dims[i])) {
    const std::size_t cols = S.size();
    proj_.reserve(cols);
    for (const Profile& s : S) proj_.push_back(s[i]);
    base_.direction = Direction::maximize;
    base_.c.assign(cols, Rational(0));
    // One equality row per pinned coordinate, matching the concatenated key.
    std::size_t pos = 0;
    for (std::size_t b = 0; b < game.num_players(); ++b) {
      if (b == i) continue;
      for (std::size_t t = 0; t < static_cast<std::size_t>(game.dims[b]); ++t, ++pos) {
        std::vector<Rational> row(cols, Rational(0));
        for (std::size_t s = 0; s < cols; ++s) row[s] = S[s][b][t];
        base_.add_row(std::move(row), Sense::eq, key[pos]);
      }
    }
    std::vector<Rational> ones(cols, Rational(1));
    base_.add_row(std::move(ones), Sense::eq, Rational(1));
  }

  std::size_t block_dim() const { return k_; }

  // One support solve, no refinement: some maximizer of d over the slice,
  // read off the convex weights. Not necessarily extreme.
  std::optional<Point> maximizer(const RatVec& d) const {
    LinearProgram lp = base_;
    for (std::size_t s = 0; s < lp.num_vars(); ++s) {
      Rational v(0);
      for (std::size_t t = 0; t < k_; ++t) v += d[t] * proj_[s][t];
      lp.c[s] = v;
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) return std::nullopt;
    Point out(k_, Rational(0));
    for (std::size_t s = 0; s < lp.num_vars(); ++s)
      for (std::size_t t = 0; t < k_; ++t) out[t] += sol.x[s] * proj_[s][t];
    return out;
  }

  // Maximize d over the slice, then lexicographically maximize the block
  // coordinates within the optimal face. Empty optional when the slice is
  // empty (the key never appears in conv(S)). Always an extreme point.
  std::optional<Point> vertex(const RatVec& d) const {
    LinearProgram lp = base_;
    Point out(k_, Rational(0));
    RatVec dir = d;
    for (std::size_t stage = 0; stage <= k_; ++stage) {
      for (std::size_t s = 0; s < lp.num_vars(); ++s) {
        Rational v(0);
        for (std::size_t t = 0; t < k_; ++t) v += dir[t] * proj_[s][t];
        lp.c[s] = v;
      }
      LpSolution sol = solve_lp(lp);
      if (sol.status != LpStatus::optimal) return std::nullopt;
      if (stage > 0) out[stage - 1] = sol.value;
      if (stage == k_) break;
      lp.add_row(lp.c, Sense::eq, sol.value);
      dir.assign(k_, Rational(0));
      dir[stage] = Rational(1);
    }
    return out;
  }

 private:
  std::size_t k_;
  std::vector<Point> proj_;
  LinearProgram base_;
};

// Quickhull over a support oracle: every vertex of a 2-d slice, exactly.
// a and b are known vertices; recursion adds the farthest vertex on the left
// of a->b whenever one lies strictly outside the line through a and b.
void expand_chain(const SliceSupport& oracle, const Point& a, const Point& b,
                  std::vector<Point>& verts, int depth) {
  if (depth > 256) throw std::logic_error("slice vertex enumeration runaway");
  RatVec n = {a[1] - b[1], b[0] - a[0]};
  if (n[0] == 0 && n[1] == 0) return;
  std::optional<Point> v = oracle.vertex(n);
  if (!v) return;
  Rational h = n[0] * (*v)[0] + n[1] * (*v)[1];
  Rational ha = n[0] * a[0] + n[1] * a[1];
  if (h > ha) {
    verts.push_back(*v);
    expand_chain(oracle, a, *v, verts, depth + 1);
    expand_chain(oracle, *v, b, verts, depth + 1);
  }
}

// All extreme points of the slice for block dimension 1 or 2.
std::vector<Point> slice_vertices(const SliceSupport& oracle) {
  std::vector<Point> verts;
  const std::size_t k = oracle.block_dim();
  if (k == 1) {
    std::optional<Point> lo = oracle.vertex({Rational(-1)});
    std::optional<Point> hi = oracle.vertex({Rational(1)});
    if (lo) verts.push_back(*lo);
    if (hi) verts.push_back(*hi);
  } else {
    // Axis supports seed the expansion; two of them always differ unless the
    // slice is a single point (covers segments in any orientation).
    const RatVec axes[4] = {{Rational(-1), Rational(0)},
                            {Rational(1), Rational(0)},
                            {Rational(0), Rational(-1)},
                            {Rational(0), Rational(1)}};
    for (const RatVec& d : axes) {
      std::optional<Point> v = oracle.vertex(d);
      if (!v) return {};
      verts.push_back(*v);
    }
    std::vector<Point> seeds = verts;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.size() >= 2) {
      expand_chain(oracle, seeds[0], seeds[1], verts, 0);
      expand_chain(oracle, seeds[1], seeds[0], verts, 0);
    }
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

}  // namespace

CompleteStrategySets complete_strategy_sets(const FiniteGnep& game) {
  CompleteStrategySets out;
  out.per_player.resize(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (const RivalKey& key : refined_domain(game, i)) {
      const std::vector<Point>* own = strategy_set(game, i, key);
      if (!own) continue;
      for (const Point& p : *own)
        out.per_player[i].push_back(complete_profile(game.dims, i, p, key));
    }
    sort_dedup_profiles(out.per_player[i]);
    out.joint.insert(out.joint.end(), out.per_player[i].begin(), out.per_player[i].end());
  }
  sort_dedup_profiles(out.joint);
  return out;
}

std::vector<Point> prescribed_slice(const FiniteGnep& game, std::size_t i, std::size_t j,
                                    const RivalKey& rivals_of_j) {
  const std::size_t n = game.num_players();
  if (i >= n || j >= n) throw std::invalid_argument("prescribed_slice: player out of range");
  if (i == j) {
    // Self-slice: the finite generators of player j's own hull restriction,
    // i.e. the listed strategies when the key is in the refined domain.
    for (const RivalKey& key : refined_domain(game, j))
      if (key == rivals_of_j) {
        const std::vector<Point>* own = strategy_set(game, j, key);
        return own ? sorted_points(*own) : std::vector<Point>{};
      }
    return {};
  }
  Point dummy_j(static_cast<std::size_t>(game.dims[j]), Rational(0));
  Profile base = complete_profile(game.dims, j, dummy_j, rivals_of_j);
  Point dummy_i(static_cast<std::size_t>(game.dims[i]), Rational(0));
  std::vector<Point> out;
  for (const RivalKey& key : refined_domain(game, i)) {
    // A key contributes a candidate j-block iff it agrees with rivals_of_j on
    // every block other than i's and j's.
    Profile expanded = complete_profile(game.dims, i, dummy_i, key);
    bool consistent = true;
    for (std::size_t b = 0; b < n && consistent; ++b)
      if (b != i && b != j && expanded[b] != base[b]) consistent = false;
    if (!consistent) continue;
    const std::vector<Point>* own = strategy_set(game, i, key);
    if (!own) continue;
    Profile full = complete_profile(game.dims, j, expanded[j], rivals_of_j);
    if (hull_membership(full[i], *own).inside) out.push_back(expanded[j]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CheckReport check_k_restrictive_closed(const FiniteGnep& game, Exec policy) {
  const std::size_t n = game.num_players();
  struct Task {
    std::size_t j;
    RivalKey key;
  };
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < n; ++j)
    for (const RivalKey& key : refined_domain(game, j)) tasks.push_back({j, key});

  std::vector<std::optional<CheckWitness>> found(tasks.size());
  std::vector<long long> counts(tasks.size(), 0);
  for_each_index(policy, tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::vector<Point>* own_j = strategy_set(game, task.j, task.key);
    if (!own_j) return;
    for (std::size_t i = 0; i < n && !found[t]; ++i) {
      if (i == task.j) continue;
      for (const Point& cand : prescribed_slice(game, i, task.j, task.key)) {
        ++counts[t];
        if (!hull_membership(cand, *own_j).inside) {
          found[t] = CheckWitness{i, task.j, task.key,
                                  complete_profile(game.dims, task.j, cand, task.key)};
          break;
        }
      }
    }
  });

  CheckReport rep;
  rep.method = "slice-inclusion";
  for (long long c : counts) rep.checks += c;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (found[t]) {
      rep.verdict = Verdict::fails;
      rep.witness = found[t];
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

CheckReport check_restrictive_closed(const FiniteGnep& game, Exec policy,
                                     std::uint64_t falsifier_seed, int samples) {
  const std::size_t n = game.num_players();
  CompleteStrategySets sets = complete_strategy_sets(game);
  bool exact = true;
  for (int d : game.dims)
    if (d > 2) exact = false;

  struct Task {
    std::size_t i;
    RivalKey key;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < n; ++i)
    for (const RivalKey& key : refined_domain(game, i)) tasks.push_back({i, key});

  std::vector<std::optional<CheckWitness>> found(tasks.size());
  std::vector<long long> counts(tasks.size(), 0);
  for_each_index(policy, tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::vector<Point>* own = strategy_set(game, task.i, task.key);
    if (!own || sets.joint.empty()) return;
    std::vector<Point> listed = sorted_points(*own);
    SliceSupport oracle(game, task.i, sets.joint, task.key);
    const std::size_t k = oracle.block_dim();

    auto flag = [&](const Point& v) {
      if (!found[t])
        found[t] = CheckWitness{task.i, task.i, task.key,
                                complete_profile(game.dims, task.i, v, task.key)};
    };

    if (exact) {
      // Every slice vertex must be listed; an unlisted vertex cannot sit in
      // the hull of the listed points either (it is extreme in the slice).
      for (const Point& v : slice_vertices(oracle)) {
        ++counts[t];
        if (found[t]) break;
        if (!std::binary_search(listed.begin(), listed.end(), v)) flag(v);
      }
    } else {
      // Sound one-sided search: any slice point outside the hull of the
      // listed strategies already separates the slice from that hull.
      SplitMix64 rng((falsifier_seed + 1) * 0x9E3779B97F4A7C15ULL + t);
      for (int s = 0; s < samples && !found[t]; ++s) {
        RatVec d(k);
        bool zero = true;
        for (std::size_t c = 0; c < k; ++c) {
          long long coeff =
              s < static_cast<int>(2 * k)
                  ? (static_cast<std::size_t>(s) % k == c ? (s < static_cast<int>(k) ? 1 : -1) : 0)
                  : rng.next_int(-1048576, 1048576);
          d[c] = rat(coeff);
          if (coeff != 0) zero = false;
        }
        if (zero) d[0] = Rational(1);
        std::optional<Point> v = oracle.maximizer(d);
        ++counts[t];
        if (v && !hull_membership(*v, listed).inside) flag(*v);
      }
    }
  });

  CheckReport rep;
  rep.method = exact ? "support-vertex-enumeration" : "randomized-falsifier";
  for (long long c : counts) rep.checks += c;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (found[t]) {
      rep.verdict = Verdict::fails;
      rep.witness = found[t];
      return rep;
    }
  }
  rep.verdict = exact ? Verdict::holds : Verdict::undecided;
  return rep;
}

bool check_zero_one_sufficiency(const FiniteGnep& game) {
  const std::size_t n = game.num_players();
  CompleteStrategySets sets = complete_strategy_sets(game);

  // Pseudo-jointly-constrained: every listed strategy set over the refined
  // domain is exactly the corresponding slice of the joint relevant set.
  for (std::size_t i = 0; i < n; ++i) {
    for (const RivalKey& key : refined_domain(game, i)) {
      const std::vector<Point>* own = strategy_set(game, i, key);
      if (!own) return false;
      std::vector<Point> listed = sorted_points(*own);
      std::vector<Point> slice;
      for (const Profile& s : sets.joint)
        if (rival_key(s, i) == key) slice.push_back(s[i]);
      std::sort(slice.begin(), slice.end());
      slice.erase(std::unique(slice.begin(), slice.end()), slice.end());
      if (slice != listed) return false;
    }
  }

  // Every per-player projection of the joint relevant set must consist of
  // extreme points only: no projected block inside the hull of the others.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<RatVec> proj;
    for (const Profile& s : sets.joint) proj.push_back(s[i]);
    std::sort(proj.begin(), proj.end());
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    for (std::size_t a = 0; a < proj.size(); ++a) {
      std::vector<RatVec> others;
      for (std::size_t b = 0; b < proj.size(); ++b)
        if (b != a) others.push_back(proj[b]);
      if (!others.empty() && hull_membership(proj[a], others).inside) return false;
    }
  }
  return true;
}

FiniteGnep cdfg_to_finite(const CdfgInstance& inst, long long enum_cap) {
  const std::size_t n = inst.players.size();
  const std::size_t m = inst.arcs.size();
  FiniteGnep g;
  g.dims.assign(n, static_cast<int>(m));
  g.table.resize(n);

  std::vector<std::vector<IntVec>> solo(n);
  for (std::size_t i = 0; i < n; ++i)
    solo[i] = enumerate_integral_flows(inst, i, inst.capacity, enum_cap);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rivals;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) rivals.push_back(j);
    std::vector<std::size_t> idx(rivals.size(), 0);
    bool more = true;
    for (const std::size_t r : rivals)
      if (solo[r].empty()) more = false;
    while (more) {
      IntVec resid = inst.capacity;
      bool ok = true;
      for (std::size_t r = 0; r < rivals.size() && ok; ++r) {
        const IntVec& f = solo[rivals[r]][idx[r]];
        for (std::size_t e = 0; e < m; ++e) {
          resid[e] -= f[e];
          if (resid[e] < 0) ok = false;
        }
      }
      if (ok) {
        std::vector<IntVec> own = enumerate_integral_flows(inst, i, resid, enum_cap);
        if (!own.empty()) {
          RivalKey key;
          for (std::size_t r = 0; r < rivals.size(); ++r)
            for (long long v : solo[rivals[r]][idx[r]]) key.push_back(rat(v));
          std::vector<Point>& slot = g.table[i][key];
          for (const IntVec& f : own) {
            Point p;
            for (long long v : f) p.push_back(rat(v));
            slot.push_back(p);
          }
          std::sort(slot.begin(), slot.end());
          slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
        }
      }
      // odometer over rival flow choices; an empty odometer runs exactly once
      std::size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < solo[rivals[pos]].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) more = false;
    }
  }

  CdfgInstance copy = inst;
  g.cost = [copy](std::size_t player, const Profile& x) { return player_cost(copy, player, x); };
  return g;
}

FiniteGnep point_set_game(const std::vector<int>& dims, const std::vector<Profile>& points) {
  FiniteGnep g;
  g.dims = dims;
  g.table.resize(dims.size());
  for (const Profile& p : points) {
    if (p.size() != dims.size()) throw std::invalid_argument("point_set_game: bad profile arity");
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (p[i].size() != static_cast<std::size_t>(dims[i]))
        throw std::invalid_argument("point_set_game: bad block size");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    for (const Profile& p : points) g.table[i][rival_key(p, i)].push_back(p[i]);
    for (auto& entry : g.table[i]) {
      std::sort(entry.second.begin(), entry.second.end());
      entry.second.erase(std::unique(entry.second.begin(), entry.second.end()),
                         entry.second.end());
    }
  }
  g.cost = [](std::size_t, const Profile&) { return Rational(0); };
  return g;
}

}  // namespace gnep
