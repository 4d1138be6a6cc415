#include "gnep/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "gnep/convexify.hpp"

namespace gnep {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("parse error at " + where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

long long to_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

Rational to_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return rat(j.get<long long>());
  if (!j.is_string()) fail(where, "expected a rational string");
  try {
    mpq_class q(j.get<std::string>(), 10);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    fail(where, "malformed rational '" + j.get<std::string>() + "'");
  }
}

std::string rational_str(const Rational& q) { return q.get_str(); }

json int_matrix(const std::vector<IntVec>& rows) {
  json out = json::array();
  for (const IntVec& r : rows) out.push_back(r);
  return out;
}

std::vector<IntVec> parse_int_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<IntVec> out;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array()) fail(where + "[" + std::to_string(r) + "]", "expected an array");
    IntVec v;
    for (std::size_t c = 0; c < row.size(); ++c)
      v.push_back(to_int(row[c], where + "[" + std::to_string(r) + "]"));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::string instance_to_json(const CdfgInstance& inst) {
  json j;
  j["nodes"] = inst.num_nodes;
  json arcs = json::array();
  for (const auto& [u, v] : inst.arcs) arcs.push_back(json::array({u, v}));
  j["arcs"] = arcs;
  j["capacities"] = inst.capacity;
  json players = json::array();
  for (const CdfgPlayer& p : inst.players)
    players.push_back(json{{"source", p.source}, {"sink", p.sink}, {"demand", p.demand}});
  j["players"] = players;
  json cost;
  if (inst.cost_mode == CostMode::dense) {
    cost["mode"] = "dense";
    json c1 = json::array();
    for (const auto& mat : inst.c1) c1.push_back(int_matrix(mat));
    cost["c1"] = c1;
    cost["c2"] = int_matrix(inst.c2);
  } else {
    cost["mode"] = "diagonal";
    cost["cong"] = int_matrix(inst.cong);
  }
  j["cost"] = cost;
  j["meta"] = json{{"schema_version", inst.meta.schema_version},
                   {"seed", inst.meta.seed},
                   {"source_mode", inst.meta.source_mode},
                   {"weight_mode", inst.meta.weight_mode}};
  return j.dump(2) + "\n";
}

CdfgInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("parse error: ") + e.what());
  }
  CdfgInstance inst;
  inst.num_nodes = static_cast<int>(to_int(require(j, "nodes", "instance"), "nodes"));
  const json& arcs = require(j, "arcs", "instance");
  if (!arcs.is_array()) fail("arcs", "expected an array");
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    const json& a = arcs[e];
    const std::string where = "arcs[" + std::to_string(e) + "]";
    if (!a.is_array() || a.size() != 2) fail(where, "expected [tail, head]");
    inst.arcs.emplace_back(static_cast<int>(to_int(a[0], where)),
                           static_cast<int>(to_int(a[1], where)));
  }
  const json& caps = require(j, "capacities", "instance");
  if (!caps.is_array()) fail("capacities", "expected an array");
  for (std::size_t e = 0; e < caps.size(); ++e)
    inst.capacity.push_back(to_int(caps[e], "capacities[" + std::to_string(e) + "]"));
  const json& players = require(j, "players", "instance");
  if (!players.is_array()) fail("players", "expected an array");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const json& p = players[i];
    const std::string where = "players[" + std::to_string(i) + "]";
    CdfgPlayer pl;
    pl.source = static_cast<int>(to_int(require(p, "source", where), where + ".source"));
    pl.sink = static_cast<int>(to_int(require(p, "sink", where), where + ".sink"));
    pl.demand = to_int(require(p, "demand", where), where + ".demand");
    inst.players.push_back(pl);
  }
  const json& cost = require(j, "cost", "instance");
  const json& mode = require(cost, "mode", "cost");
  if (!mode.is_string()) fail("cost.mode", "expected a string");
  if (mode.get<std::string>() == "dense") {
    inst.cost_mode = CostMode::dense;
    const json& c1 = require(cost, "c1", "cost");
    if (!c1.is_array()) fail("cost.c1", "expected an array");
    for (std::size_t i = 0; i < c1.size(); ++i)
      inst.c1.push_back(parse_int_matrix(c1[i], "cost.c1[" + std::to_string(i) + "]"));
    inst.c2 = parse_int_matrix(require(cost, "c2", "cost"), "cost.c2");
  } else if (mode.get<std::string>() == "diagonal") {
    inst.cost_mode = CostMode::diagonal;
    inst.cong = parse_int_matrix(require(cost, "cong", "cost"), "cost.cong");
  } else {
    fail("cost.mode", "unknown mode '" + mode.get<std::string>() + "'");
  }
  const json& meta = require(j, "meta", "instance");
  inst.meta.schema_version =
      static_cast<int>(to_int(require(meta, "schema_version", "meta"), "meta.schema_version"));
  if (inst.meta.schema_version != 1) fail("meta.schema_version", "unsupported schema version");
  inst.meta.seed = static_cast<std::uint64_t>(to_int(require(meta, "seed", "meta"), "meta.seed"));
  const json& sm = require(meta, "source_mode", "meta");
  const json& wm = require(meta, "weight_mode", "meta");
  if (!sm.is_string() || !wm.is_string()) fail("meta", "modes must be strings");
  inst.meta.source_mode = sm.get<std::string>();
  inst.meta.weight_mode = wm.get<std::string>();
  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("parse error: invalid instance: ") + e.what());
  }
  return inst;
}

void save_instance(const CdfgInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst);
}

CdfgInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

FiniteGnep finite_game_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("parse error: ") + e.what());
  }
  if (to_int(require(j, "schema_version", "fixture"), "schema_version") != 1)
    fail("schema_version", "unsupported schema version");
  const json& kind = require(j, "kind", "fixture");
  if (!kind.is_string()) fail("kind", "expected a string");
  const json& jdims = require(j, "dims", "fixture");
  if (!jdims.is_array() || jdims.empty()) fail("dims", "expected a nonempty array");
  std::vector<int> dims;
  for (std::size_t i = 0; i < jdims.size(); ++i)
    dims.push_back(static_cast<int>(to_int(jdims[i], "dims[" + std::to_string(i) + "]")));
  std::size_t total = 0;
  for (int d : dims) {
    if (d <= 0) fail("dims", "block sizes must be positive");
    total += static_cast<std::size_t>(d);
  }

  auto parse_vec = [&](const json& arr, std::size_t want, const std::string& where) -> RatVec {
    if (!arr.is_array() || arr.size() != want)
      fail(where, "expected an array of length " + std::to_string(want));
    RatVec v;
    for (std::size_t c = 0; c < arr.size(); ++c)
      v.push_back(to_rational(arr[c], where + "[" + std::to_string(c) + "]"));
    return v;
  };

  if (kind.get<std::string>() == "point_set") {
    const json& pts = require(j, "points", "fixture");
    if (!pts.is_array()) fail("points", "expected an array");
    std::vector<Profile> profiles;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      RatVec flat = parse_vec(pts[p], total, "points[" + std::to_string(p) + "]");
      profiles.push_back(unflatten(dims, flat));
    }
    return point_set_game(dims, profiles);
  }
  if (kind.get<std::string>() == "strategy_tables") {
    FiniteGnep g;
    g.dims = dims;
    g.table.resize(dims.size());
    const json& tables = require(j, "tables", "fixture");
    if (!tables.is_array()) fail("tables", "expected an array");
    for (std::size_t t = 0; t < tables.size(); ++t) {
      const std::string where = "tables[" + std::to_string(t) + "]";
      const json& tab = tables[t];
      long long player = to_int(require(tab, "player", where), where + ".player");
      if (player < 0 || player >= static_cast<long long>(dims.size()))
        fail(where + ".player", "player index out of range");
      const std::size_t own = static_cast<std::size_t>(dims[player]);
      const json& entries = require(tab, "entries", where);
      if (!entries.is_array()) fail(where + ".entries", "expected an array");
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string ew = where + ".entries[" + std::to_string(e) + "]";
        RivalKey key = parse_vec(require(entries[e], "rivals", ew), total - own, ew + ".rivals");
        const json& pts = require(entries[e], "points", ew);
        if (!pts.is_array()) fail(ew + ".points", "expected an array");
        std::vector<Point> list;
        for (std::size_t p = 0; p < pts.size(); ++p)
          list.push_back(parse_vec(pts[p], own, ew + ".points[" + std::to_string(p) + "]"));
        g.table[static_cast<std::size_t>(player)][key] = std::move(list);
      }
    }
    g.cost = [](std::size_t, const Profile&) -> Rational { return 0; };
    return g;
  }
  fail("kind", "unknown kind '" + kind.get<std::string>() + "'");
}

FiniteGnep load_finite_game(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return finite_game_from_json(buf.str());
}

std::string point_set_to_json(const std::string& name, const std::vector<int>& dims,
                              const std::vector<Profile>& points) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = "point_set";
  j["name"] = name;
  j["dims"] = dims;
  json pts = json::array();
  for (const Profile& p : points) {
    json row = json::array();
    for (const Rational& q : flatten(p)) row.push_back(rational_str(q));
    pts.push_back(row);
  }
  j["points"] = pts;
  return j.dump(2) + "\n";
}

std::string benchmark_csv(const std::vector<BenchmarkRecord>& rows) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  out << "instance_id,players,nodes,source_mode,demand_class,method,penalized,found,"
         "wall_seconds,starts_used,value\n";
  using Key = std::tuple<int, int, char, int, std::string, bool>;
  std::map<Key, std::tuple<int, int, double>> agg;  // runs, successes, success time
  for (const BenchmarkRecord& r : rows) {
    out << r.instance_id << ',' << r.players << ',' << r.nodes << ',' << r.source_mode << ','
        << r.demand_class << ',' << r.method << ',' << (r.penalized ? 1 : 0) << ','
        << (r.found ? 1 : 0) << ',' << num(r.wall_seconds) << ',' << r.starts_used << ','
        << num(r.value) << '\n';
    auto& slot = agg[{r.players, r.nodes, r.source_mode, r.demand_class, r.method, r.penalized}];
    std::get<0>(slot) += 1;
    if (r.found) {
      std::get<1>(slot) += 1;
      std::get<2>(slot) += r.wall_seconds;
    }
  }
  out << "aggregate,players,nodes,source_mode,demand_class,method,penalized,runs,gne_rate,"
         "mean_success_seconds\n";
  for (const auto& [key, val] : agg) {
    const auto& [players, nodes, mode, demand, method, penalized] = key;
    const auto& [runs, wins, time] = val;
    out << "aggregate," << players << ',' << nodes << ',' << mode << ',' << demand << ','
        << method << ',' << (penalized ? 1 : 0) << ',' << runs << ','
        << num(runs ? static_cast<double>(wins) / runs : 0.0) << ','
        << (wins ? num(time / wins) : "nan") << '\n';
  }
  return out.str();
}

}  // namespace gnep
