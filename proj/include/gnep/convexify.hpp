#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnep/finite_game.hpp"
#include "gnep/flowgame.hpp"
#include "gnep/parallel.hpp"

namespace gnep {

// Per-player relevant strategy profiles: every full profile obtained by
// pairing a refined-domain rival key of player i with one of the strategies
// listed there, plus their union. Sorted and deduplicated.
struct CompleteStrategySets {
  std::vector<std::vector<Profile>> per_player;
  std::vector<Profile> joint;
};

CompleteStrategySets complete_strategy_sets(const FiniteGnep& game);

// The finite slice of player i's per-rival hull structure at a fixed rival
// profile of player j: all candidate j-blocks x_j such that the full profile
// (x_j, rivals_of_j) has its i-rivals in player i's refined domain and its
// i-block inside the hull of player i's strategies there. Candidates are
// finite because they are read off the refined-domain keys. For i == j this
// degenerates to the finite generator set of player j's own restriction:
// the listed strategies at the key, when it is in the refined domain.
std::vector<Point> prescribed_slice(const FiniteGnep& game, std::size_t i, std::size_t j,
                                    const RivalKey& rivals_of_j);

enum class Verdict { holds, fails, undecided };

struct CheckWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  RivalKey rivals;  // the fixed rival profile of player j
  Profile point;    // offending full profile
};

struct CheckReport {
  Verdict verdict = Verdict::holds;
  std::optional<CheckWitness> witness;
  std::string method;
  long long checks = 0;
};

// Slice-inclusion test over all ordered player pairs: for every player j,
// every refined-domain rival profile of j, and every other player i, each
// candidate in prescribed_slice(i, j, .) must lie in the hull of player j's
// strategies there. Exact; the first violation in scan order is returned as
// a witness that re-verifies by hull membership.
CheckReport check_k_restrictive_closed(const FiniteGnep& game, Exec policy = Exec::serial);

// Extreme-point test against the joint relevant set: for every player i and
// refined-domain rival key, every extreme point of the slice of
// conv(joint set) at that key must be one of the listed strategies. Exact
// vertex enumeration when every block is one- or two-dimensional (support
// LPs with lexicographic refinement); otherwise a seeded randomized
// falsifier that can only return fails (with a sound witness) or undecided.
CheckReport check_restrictive_closed(const FiniteGnep& game, Exec policy = Exec::serial,
                                     std::uint64_t falsifier_seed = 0, int samples = 200);

// True iff the game is pseudo-jointly-constrained (every listed strategy set
// is exactly the slice of the joint relevant set at its key) and every
// per-player projection of the joint relevant set consists of extreme points
// only. A sufficient condition for restrictive-closedness.
bool check_zero_one_sufficiency(const FiniteGnep& game);

// Finite-table view of a flow game: per player, every combination of rival
// flows (each drawn from that rival's standalone flow set) that leaves a
// nonempty residual strategy set becomes a table entry. Costs carry over.
FiniteGnep cdfg_to_finite(const CdfgInstance& inst, long long enum_cap = 200000);

// Jointly constrained game over an explicit finite point set: each player's
// strategy set at a rival profile is the slice of the point set there.
// Costs are zero (the structural checkers ignore them).
FiniteGnep point_set_game(const std::vector<int>& dims, const std::vector<Profile>& points);

}  // namespace gnep
