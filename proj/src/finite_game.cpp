#include "gnep/finite_game.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gnep {

RivalKey rival_key(const Profile& x, std::size_t player) {
  RivalKey k;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == player) continue;
    k.insert(k.end(), x[j].begin(), x[j].end());
  }
  return k;
}

RatVec flatten(const Profile& x) {
  RatVec f;
  for (const auto& block : x) f.insert(f.end(), block.begin(), block.end());
  return f;
}

Profile unflatten(const std::vector<int>& dims, const RatVec& flat) {
  Profile x(dims.size());
  std::size_t at = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (at + dims[i] > flat.size()) throw std::invalid_argument("unflatten: size mismatch");
    x[i].assign(flat.begin() + at, flat.begin() + at + dims[i]);
    at += dims[i];
  }
  if (at != flat.size()) throw std::invalid_argument("unflatten: size mismatch");
  return x;
}

Profile complete_profile(const std::vector<int>& dims, std::size_t player, const Point& own,
                         const RivalKey& rivals) {
  Profile x(dims.size());
  std::size_t at = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j == player) {
      x[j] = own;
      continue;
    }
    x[j].assign(rivals.begin() + at, rivals.begin() + at + dims[j]);
    at += dims[j];
  }
  if (at != rivals.size() || own.size() != static_cast<std::size_t>(dims[player]))
    throw std::invalid_argument("complete_profile: size mismatch");
  return x;
}

const std::vector<Point>* strategy_set(const FiniteGnep& g, std::size_t player, const RivalKey& k) {
  auto it = g.table[player].find(k);
  return it == g.table[player].end() ? nullptr : &it->second;
}

bool is_feasible(const FiniteGnep& g, const Profile& x) {
  if (x.size() != g.num_players()) throw std::invalid_argument("is_feasible: profile size mismatch");
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    const auto* set = strategy_set(g, i, rival_key(x, i));
    if (!set) return false;
    if (std::find(set->begin(), set->end(), x[i]) == set->end()) return false;
  }
  return true;
}

std::vector<Profile> enumerate_feasible_profiles(const FiniteGnep& g) {
  const std::size_t n = g.num_players();
  std::vector<std::vector<Point>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<Point> seen;
    for (const auto& [key, pts] : g.table[i]) seen.insert(pts.begin(), pts.end());
    candidates[i].assign(seen.begin(), seen.end());
    if (candidates[i].empty()) return {};
  }
  std::vector<Profile> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Profile x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = candidates[i][idx[i]];
    if (is_feasible(g, x)) out.push_back(std::move(x));
    std::size_t at = n;
    while (at > 0) {
      --at;
      if (++idx[at] < candidates[at].size()) break;
      idx[at] = 0;
      if (at == 0) return out;
    }
  }
}

std::vector<RivalKey> refined_domain(const FiniteGnep& g, std::size_t player) {
  std::vector<RivalKey> out;
  for (const auto& [key, pts] : g.table[player]) {
    for (const auto& own : pts) {
      Profile x = complete_profile(g.dims, player, own, key);
      if (is_feasible(g, x)) {
        out.push_back(key);
        break;
      }
    }
  }
  return out;
}

Rational player_cost(const FiniteGnep& g, std::size_t player, const Profile& x) {
  return g.cost(player, x);
}

}  // namespace gnep
