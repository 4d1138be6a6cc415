// gnep: command-line driver for the constrained flow game toolkit.
//
// Subcommands:
//   gen     generate a seeded random instance and write it as JSON
//   solve   run a solver on an instance file
//   check   run a structural property check on a game or instance file
//   oracle  certified exhaustive equilibrium search
//   bench   run a benchmark sweep from a config file and emit CSV
//
// Exit codes: 0 ok/holds, 1 no equilibrium certified, 2 input error,
// 3 property fails, 4 undecided, 5 timeout.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnep/convexify.hpp"
#include "gnep/io.hpp"
#include "gnep/parallel.hpp"
#include "gnep/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoGne = 1;
constexpr int kExitInput = 2;
constexpr int kExitFails = 3;
constexpr int kExitUndecided = 4;
constexpr int kExitTimeout = 5;

struct SolveFlags {
  std::string in;
  std::string out;
  std::string method = "valpha";
  bool penalized = false;
  bool parallel = false;
  double alpha = 0.02;
  double beta = 0.05;
  int starts = 100;
  std::uint64_t seed = 0;
  double time_limit = 60.0;
  long long enum_cap = 1000000;
};

gnep::Method parse_method(const std::string& name) {
  if (name == "vhat") return gnep::Method::vhat;
  if (name == "valpha") return gnep::Method::valpha;
  if (name == "vbar") return gnep::Method::vbar;
  if (name == "exhaustive") return gnep::Method::reformulation_exhaustive;
  if (name == "gauss-seidel") return gnep::Method::gauss_seidel;
  throw std::runtime_error("unknown method: " + name);
}

std::string status_str(gnep::SolveStatus s) {
  switch (s) {
    case gnep::SolveStatus::gne_found: return "gne-found";
    case gnep::SolveStatus::no_gne_certified: return "no-gne-certified";
    case gnep::SolveStatus::timeout: return "timeout";
    case gnep::SolveStatus::budget_exhausted: return "budget-exhausted";
  }
  return "unknown";
}

int status_exit(gnep::SolveStatus s) {
  switch (s) {
    case gnep::SolveStatus::gne_found: return kExitOk;
    case gnep::SolveStatus::no_gne_certified: return kExitNoGne;
    case gnep::SolveStatus::timeout: return kExitTimeout;
    case gnep::SolveStatus::budget_exhausted: return kExitUndecided;
  }
  return kExitUndecided;
}

std::string profile_str(const gnep::IntProfile& p) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t e = 0; e < p[i].size(); ++e) os << (e ? "," : "") << p[i][e];
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string ratvec_str(const gnep::RatVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
  os << ")";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

gnep::SolveConfig make_config(const SolveFlags& f) {
  gnep::SolveConfig cfg;
  cfg.method = parse_method(f.method);
  cfg.penalized = f.penalized;
  cfg.alpha = f.alpha;
  cfg.beta = f.beta;
  cfg.starts = f.starts;
  cfg.seed = f.seed;
  cfg.time_limit_seconds = f.time_limit;
  cfg.enum_cap = f.enum_cap;
  cfg.exec = f.parallel ? gnep::Exec::parallel : gnep::Exec::serial;
  return cfg;
}

int cmd_gen(int nodes, int players, const std::string& source_mode, const std::string& weight_mode,
            std::uint64_t seed, const std::string& out) {
  gnep::GenParams params;
  params.num_nodes = nodes;
  params.num_players = players;
  params.source_mode = source_mode == "m" ? 'm' : 's';
  params.unit_demands = weight_mode == "unit";
  const gnep::CdfgInstance inst = gnep::generate_instance(params, seed);
  const std::string text = gnep::instance_to_json(inst);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
    std::cout << "wrote " << out << " (" << inst.num_nodes << " nodes, " << inst.num_arcs()
              << " arcs, " << inst.num_players() << " players)\n";
  }
  return kExitOk;
}

int cmd_solve(const SolveFlags& f) {
  const gnep::CdfgInstance inst = gnep::load_instance(f.in);
  const gnep::SolveConfig cfg = make_config(f);
  const auto t0 = std::chrono::steady_clock::now();
  const gnep::SolveResult res = gnep::solve(inst, cfg);
  const double wall = wall_since(t0);

  if (res.status == gnep::SolveStatus::gne_found && !gnep::is_gne(inst, res.profile)) {
    std::cerr << "internal error: reported profile failed re-verification\n";
    return kExitUndecided;
  }

  std::cout << "status: " << status_str(res.status) << "\n";
  std::cout << "method: " << f.method << (f.penalized ? " (penalized)" : "") << "\n";
  std::cout << "wall-seconds: " << wall << "\n";
  if (res.starts_used > 0) std::cout << "starts-used: " << res.starts_used << "\n";
  if (res.evaluations_used > 0) std::cout << "evaluations: " << res.evaluations_used << "\n";
  switch (res.status) {
    case gnep::SolveStatus::gne_found:
      std::cout << "equilibrium: " << profile_str(res.profile) << " (re-verified exactly)\n";
      break;
    case gnep::SolveStatus::no_gne_certified:
      std::cout << "certified minimum gap: " << res.value.get_str() << " at "
                << profile_str(res.profile) << "\n";
      break;
    default:
      if (std::isfinite(res.best_descent_value))
        std::cout << "best descent value: " << res.best_descent_value << "\n";
      break;
  }
  if (!res.diagnostic.empty()) std::cout << "note: " << res.diagnostic << "\n";

  if (!f.out.empty()) {
    nlohmann::json doc{{"status", status_str(res.status)},
                       {"method", f.method},
                       {"penalized", f.penalized},
                       {"seed", f.seed},
                       {"wall_seconds", wall},
                       {"starts_used", res.starts_used},
                       {"evaluations", res.evaluations_used},
                       {"value", res.value.get_str()},
                       {"profile", res.profile},
                       {"diagnostic", res.diagnostic}};
    write_text(f.out, doc.dump(2) + "\n");
  }
  return status_exit(res.status);
}

int cmd_oracle(const std::string& in, long long enum_cap) {
  const gnep::CdfgInstance inst = gnep::load_instance(in);
  const auto t0 = std::chrono::steady_clock::now();
  const gnep::SolveResult res = gnep::solve_reformulation_exhaustive(inst, enum_cap);
  std::cout << "profiles-scored: " << res.evaluations_used << "\n";
  std::cout << "wall-seconds: " << wall_since(t0) << "\n";
  if (res.status == gnep::SolveStatus::gne_found) {
    if (!gnep::is_gne(inst, res.profile)) {
      std::cerr << "internal error: reported profile failed re-verification\n";
      return kExitUndecided;
    }
    std::cout << "equilibrium: " << profile_str(res.profile) << "\n";
    return kExitOk;
  }
  std::cout << "no equilibrium: " << res.diagnostic << "\n";
  if (!res.profile.empty())
    std::cout << "minimum gap: " << res.value.get_str() << " at " << profile_str(res.profile)
              << "\n";
  return kExitNoGne;
}

int cmd_check(const std::string& in, const std::string& property, std::uint64_t seed,
              long long enum_cap, bool parallel) {
  gnep::FiniteGnep game;
  try {
    game = gnep::load_finite_game(in);
  } catch (const std::exception& game_err) {
    try {
      game = gnep::cdfg_to_finite(gnep::load_instance(in), enum_cap);
    } catch (const std::exception& inst_err) {
      std::cerr << "error: not a finite-game file (" << game_err.what()
                << ") and not an instance file (" << inst_err.what() << ")\n";
      return kExitInput;
    }
  }

  const gnep::Exec exec = parallel ? gnep::Exec::parallel : gnep::Exec::serial;
  if (property == "zero-one") {
    const bool ok = gnep::check_zero_one_sufficiency(game);
    if (ok) {
      std::cout << "zero-one sufficiency: holds (implies restrictive-closed)\n";
      return kExitOk;
    }
    std::cout << "zero-one sufficiency: fails (does not rule out restrictive-closedness)\n";
    return kExitFails;
  }

  const gnep::CheckReport report = property == "krc"
                                       ? gnep::check_k_restrictive_closed(game, exec)
                                       : gnep::check_restrictive_closed(game, exec, seed);
  const char* name = property == "krc" ? "k-restrictive-closed" : "restrictive-closed";
  std::cout << name << ": ";
  switch (report.verdict) {
    case gnep::Verdict::holds:
      std::cout << "holds (" << report.checks << " checks, " << report.method << ")\n";
      return kExitOk;
    case gnep::Verdict::fails:
      std::cout << "fails (" << report.method << ")\n";
      if (report.witness) {
        std::cout << "witness: player " << report.witness->j << " at rivals "
                  << ratvec_str(report.witness->rivals) << ": point "
                  << ratvec_str(gnep::flatten(report.witness->point))
                  << " violates the restriction prescribed for player " << report.witness->i
                  << "\n";
      }
      return kExitFails;
    case gnep::Verdict::undecided:
      std::cout << "undecided (" << report.checks << " checks, " << report.method << ")\n";
      return kExitUndecided;
  }
  return kExitUndecided;
}

struct BenchJob {
  gnep::GenParams params;
  int demand_class = 1;
  std::uint64_t seed = 0;
  std::string method;
  bool penalized = false;
};

int cmd_bench(const std::string& config_path, const std::string& out, bool parallel) {
  std::ifstream file(config_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open config: " + config_path);
  std::stringstream buf;
  buf << file.rdbuf();
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }

  SolveFlags defaults;
  defaults.starts = cfg.value("starts", 100);
  defaults.time_limit = cfg.value("time_limit", 60.0);
  defaults.alpha = cfg.value("alpha", 0.02);
  defaults.beta = cfg.value("beta", 0.05);
  defaults.enum_cap = cfg.value<long long>("enum_cap", 1000000);
  const long long budget = cfg.value<long long>("budget", 15000);

  if (!cfg.contains("types") || !cfg.contains("seeds") || !cfg.contains("methods"))
    throw std::runtime_error("config needs types, seeds, and methods arrays");

  // Job list in fixed sweep order: type-major, then seed, then method. The
  // collector writes rows in this order no matter how many workers run.
  std::vector<BenchJob> jobs;
  for (const nlohmann::json& type : cfg.at("types")) {
    BenchJob base;
    base.params.num_players = type.at("players").get<int>();
    base.params.num_nodes = type.at("nodes").get<int>();
    base.params.source_mode = type.value("source_mode", "s") == "m" ? 'm' : 's';
    base.demand_class = type.value("demand_class", 1);
    base.params.unit_demands = base.demand_class == 1;
    for (const nlohmann::json& seed : cfg.at("seeds")) {
      base.seed = seed.get<std::uint64_t>();
      for (const nlohmann::json& method : cfg.at("methods")) {
        BenchJob job = base;
        job.method = method.at("method").get<std::string>();
        job.penalized = method.value("penalized", false);
        parse_method(job.method);  // reject bad names before the sweep starts
        jobs.push_back(job);
      }
    }
  }

  std::vector<gnep::BenchmarkRecord> records(jobs.size());
  gnep::for_each_index(parallel ? gnep::Exec::parallel : gnep::Exec::serial, jobs.size(),
                       [&](std::size_t idx) {
    const BenchJob& job = jobs[idx];
    gnep::BenchmarkRecord& rec = records[idx];
    rec.players = job.params.num_players;
    rec.nodes = job.params.num_nodes;
    rec.source_mode = job.params.source_mode;
    rec.demand_class = job.demand_class;
    rec.method = job.method;
    rec.penalized = job.penalized;
    rec.instance_id = "p" + std::to_string(rec.players) + "n" + std::to_string(rec.nodes) +
                      rec.source_mode + "d" + std::to_string(rec.demand_class) + "s" +
                      std::to_string(job.seed);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const gnep::CdfgInstance inst = gnep::generate_instance(job.params, job.seed);
      SolveFlags flags = defaults;
      flags.method = job.method;
      flags.penalized = job.penalized;
      flags.seed = job.seed;
      gnep::SolveConfig scfg = make_config(flags);
      scfg.budget = budget;
      const gnep::SolveResult res = gnep::solve(inst, scfg);
      rec.wall_seconds = wall_since(t0);
      rec.starts_used = res.starts_used;
      // Rows only claim success for profiles that re-verify exactly.
      rec.found = res.status == gnep::SolveStatus::gne_found && gnep::is_gne(inst, res.profile);
      if (rec.found)
        rec.value = 0.0;
      else if (res.status == gnep::SolveStatus::no_gne_certified)
        rec.value = res.value.get_d();
      else
        rec.value = res.best_descent_value;
    } catch (const std::exception&) {
      // A failed run is recorded, never fatal to the sweep.
      rec.wall_seconds = wall_since(t0);
      rec.found = false;
      rec.value = std::numeric_limits<double>::quiet_NaN();
    }
  });

  const std::string csv = gnep::benchmark_csv(records);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text(out, csv);
    std::cout << "wrote " << out << " (" << records.size() << " rows)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained flow game toolkit"};
  app.require_subcommand(1);

  // gen
  int nodes = 10;
  int players = 2;
  std::string source_mode = "s";
  std::string weight_mode = "unit";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--nodes", nodes, "Number of nodes")->check(CLI::Range(2, 64));
  gen->add_option("--players", players, "Number of players")->check(CLI::Range(1, 16));
  gen->add_option("--source-mode", source_mode, "s: shared terminals, m: per player")
      ->check(CLI::IsMember({"s", "m"}));
  gen->add_option("--weight-mode", weight_mode, "unit: unit demands, random: demands in 1..10")
      ->check(CLI::IsMember({"unit", "random"}));
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output path (stdout when omitted)");

  // solve
  SolveFlags sf;
  CLI::App* solve = app.add_subcommand("solve", "Run a solver on an instance file");
  solve->add_option("--in", sf.in, "Instance JSON file")->required();
  solve->add_option("--method", sf.method, "Solver")
      ->check(CLI::IsMember({"vhat", "valpha", "vbar", "exhaustive", "gauss-seidel"}));
  solve->add_flag("--penalized", sf.penalized, "Multiply the objective by the integrality penalty");
  solve->add_option("--alpha", sf.alpha, "Proximal weight of the regularized gap");
  solve->add_option("--beta", sf.beta, "Second proximal weight (vbar only)");
  solve->add_option("--starts", sf.starts, "Multistart count")->check(CLI::PositiveNumber);
  solve->add_option("--seed", sf.seed, "Start-sampling seed");
  solve->add_option("--time-limit", sf.time_limit, "Wall-clock limit in seconds");
  solve->add_option("--enum-cap", sf.enum_cap, "Refusal threshold for exhaustive enumeration");
  solve->add_option("--out", sf.out, "Write a JSON result document here");
  solve->add_flag("--parallel", sf.parallel, "Run starts on OpenMP workers");

  // check
  std::string check_in;
  std::string property;
  std::uint64_t check_seed = 0;
  long long check_cap = 200000;
  bool check_parallel = false;
  CLI::App* check = app.add_subcommand("check", "Check a structural property");
  check->add_option("--in", check_in, "Finite-game or instance JSON file")->required();
  check->add_option("--property", property, "Property to check")
      ->required()
      ->check(CLI::IsMember({"krc", "rc", "zero-one"}));
  check->add_option("--seed", check_seed, "Falsifier seed (rc in high dimension)");
  check->add_option("--enum-cap", check_cap, "Strategy enumeration cap for instance files");
  check->add_flag("--parallel", check_parallel, "Scan on OpenMP workers");

  // oracle
  std::string oracle_in;
  long long oracle_cap = 1000000;
  CLI::App* oracle = app.add_subcommand("oracle", "Certified exhaustive equilibrium search");
  oracle->add_option("--in", oracle_in, "Instance JSON file")->required();
  oracle->add_option("--enum-cap", oracle_cap, "Refusal threshold for enumeration");

  // bench
  std::string bench_config;
  std::string bench_out;
  bool bench_parallel = false;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark sweep from a config file");
  bench->add_option("--config", bench_config, "Sweep config JSON")->required();
  bench->add_option("--out", bench_out, "CSV output path (stdout when omitted)");
  bench->add_flag("--parallel", bench_parallel, "Fan jobs out to OpenMP workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) return cmd_gen(nodes, players, source_mode, weight_mode, gen_seed, gen_out);
    if (solve->parsed()) return cmd_solve(sf);
    if (check->parsed()) return cmd_check(check_in, property, check_seed, check_cap, check_parallel);
    if (oracle->parsed()) return cmd_oracle(oracle_in, oracle_cap);
    if (bench->parsed()) return cmd_bench(bench_config, bench_out, bench_parallel);
  } catch (const gnep::EnumCapExceeded& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
