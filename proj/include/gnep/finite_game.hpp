#pragma once

#include <functional>
#include <map>
#include <vector>

#include "gnep/rational.hpp"

namespace gnep {

// One block per player; profile[i] has length dims[i].
using Point = RatVec;
using Profile = std::vector<Point>;

// Rival sub-profile: blocks of every player except one, concatenated in
// ascending player order.
using RivalKey = RatVec;

// Finite GNEP given by per-player strategy tables over rival sub-profiles and
// an exact cost oracle. A rival key missing from a table means the strategy
// set is empty there. Ordered maps keep every enumeration deterministic.
struct FiniteGnep {
  std::vector<int> dims;
  std::vector<std::map<RivalKey, std::vector<Point>>> table;
  std::function<Rational(std::size_t, const Profile&)> cost;

  std::size_t num_players() const { return dims.size(); }
};

RivalKey rival_key(const Profile& x, std::size_t player);
RatVec flatten(const Profile& x);
Profile unflatten(const std::vector<int>& dims, const RatVec& flat);
// Rebuilds a full profile from player `i`'s block and a rival key.
Profile complete_profile(const std::vector<int>& dims, std::size_t player, const Point& own,
                         const RivalKey& rivals);

// x is feasible iff every player's block is listed in their table at the
// rival key induced by x.
bool is_feasible(const FiniteGnep& g, const Profile& x);

// All feasible profiles, lexicographic over the per-player candidate points
// (sorted union of each player's table entries).
std::vector<Profile> enumerate_feasible_profiles(const FiniteGnep& g);

// Refined domain of player i: rival keys admitting a completion feasible for
// every player simultaneously.
std::vector<RivalKey> refined_domain(const FiniteGnep& g, std::size_t player);

Rational player_cost(const FiniteGnep& g, std::size_t player, const Profile& x);

// X_i(rivals); nullptr when the key is absent (empty strategy set).
const std::vector<Point>* strategy_set(const FiniteGnep& g, std::size_t player, const RivalKey& k);

}  // namespace gnep
