#pragma once

#include <string>
#include <vector>

#include "gnep/finite_game.hpp"
#include "gnep/flowgame.hpp"

namespace gnep {

// Flow-game instances serialize to schema-versioned JSON with sorted keys and
// fixed indentation, so re-serializing a parsed document is byte-identical.
// Parsers throw std::runtime_error with a location on any schema violation.
std::string instance_to_json(const CdfgInstance& inst);
CdfgInstance instance_from_json(const std::string& text);
void save_instance(const CdfgInstance& inst, const std::string& path);
CdfgInstance load_instance(const std::string& path);

// Finite-game fixture files. Two kinds: "point_set" (a jointly constrained
// game over explicit profiles) and "strategy_tables" (explicit per-player
// tables). Rationals are encoded as strings ("8/3").
FiniteGnep finite_game_from_json(const std::string& text);
FiniteGnep load_finite_game(const std::string& path);
std::string point_set_to_json(const std::string& name, const std::vector<int>& dims,
                              const std::vector<Profile>& points);

// One benchmark run. The type tuple follows (players, nodes, source mode,
// demand class); demand_class is 1 for unit demands and 10 for drawn demands.
struct BenchmarkRecord {
  std::string instance_id;
  int players = 0;
  int nodes = 0;
  char source_mode = 's';
  int demand_class = 1;
  std::string method;
  bool penalized = false;
  bool found = false;
  double wall_seconds = 0.0;
  long long starts_used = 0;
  double value = 0.0;
};

// Fixed-column CSV: one row per record, then one aggregate row per
// (type tuple, method, penalized) group with the success rate and the mean
// wall time over successful runs only.
std::string benchmark_csv(const std::vector<BenchmarkRecord>& rows);

}  // namespace gnep
