// Times the parallel kernels against their serial reference on fixed seeded
// workloads and verifies that both produce identical results while doing so.
#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "gnep/convexify.hpp"
#include "gnep/parallel.hpp"
#include "gnep/rng.hpp"
#include "gnep/solvers.hpp"

using namespace gnep;

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Three players with one-dimensional blocks over a seeded random subset of a
// small lattice: enough rival keys to keep every worker busy.
FiniteGnep lattice_game(std::uint64_t seed, int side, int count) {
  SplitMix64 rng(seed);
  std::vector<Profile> points;
  for (int c = 0; c < count; ++c) {
    Profile p;
    for (int i = 0; i < 3; ++i)
      p.push_back({Rational(static_cast<long>(rng.next() % static_cast<unsigned>(side)))});
    points.push_back(std::move(p));
  }
  return point_set_game({1, 1, 1}, points);
}

// Two-arc game whose players chase each other's routes forever; every
// multistart run exhausts all starts, which is the worst case worth timing.
CdfgInstance chasing_costs() {
  CdfgInstance inst;
  inst.num_nodes = 2;
  inst.arcs = {{0, 1}, {0, 1}};
  inst.capacity = {2, 2};
  inst.players = {CdfgPlayer{0, 1, 1}, CdfgPlayer{0, 1, 1}};
  inst.cost_mode = CostMode::dense;
  inst.c1 = {{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}};
  inst.c2 = {{0, 0}, {0, 0}};
  return inst;
}

struct Row {
  std::string name;
  double serial = 0;
  double parallel = 0;
  bool agree = false;
};

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-28s %10s %10s %8s %s\n", "workload", "serial[s]", "parallel[s]", "speedup",
              "agree");
  bool all_agree = true;
  for (const Row& r : rows) {
    std::printf("%-28s %10.3f %10.3f %7.2fx %s\n", r.name.c_str(), r.serial, r.parallel,
                r.serial / r.parallel, r.agree ? "yes" : "NO");
    all_agree = all_agree && r.agree;
  }
  if (!all_agree) std::printf("\nRESULT MISMATCH between serial and parallel runs\n");
}

bool same_report(const CheckReport& a, const CheckReport& b) {
  return a.verdict == b.verdict && a.checks == b.checks &&
         a.witness.has_value() == b.witness.has_value() &&
         (!a.witness || (a.witness->i == b.witness->i && a.witness->j == b.witness->j &&
                         a.witness->rivals == b.witness->rivals &&
                         a.witness->point == b.witness->point));
}

bool same_solve(const SolveResult& a, const SolveResult& b) {
  return a.status == b.status && a.profile == b.profile && a.starts_used == b.starts_used &&
         a.evaluations_used == b.evaluations_used &&
         a.best_descent_value == b.best_descent_value;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads available: %d on %d processor(s)\n\n", max_threads(Exec::parallel),
              omp_get_num_procs());
#else
  std::printf("built without OpenMP; both columns run the serial path\n\n");
#endif
  std::vector<Row> rows;

  {
    const FiniteGnep lattice = lattice_game(42, 8, 220);
    Row row;
    row.name = "slice-inclusion check";
    double t = now_s();
    const CheckReport a = check_k_restrictive_closed(lattice, Exec::serial);
    row.serial = now_s() - t;
    t = now_s();
    const CheckReport b = check_k_restrictive_closed(lattice, Exec::parallel);
    row.parallel = now_s() - t;
    row.agree = same_report(a, b);
    rows.push_back(row);

    row.name = "extreme-point check";
    t = now_s();
    const CheckReport c = check_restrictive_closed(lattice, Exec::serial, 11);
    row.serial = now_s() - t;
    t = now_s();
    const CheckReport d = check_restrictive_closed(lattice, Exec::parallel, 11);
    row.parallel = now_s() - t;
    row.agree = same_report(c, d);
    rows.push_back(row);
  }

  {
    const CdfgInstance mp = chasing_costs();
    SolveConfig cfg;
    cfg.method = Method::valpha;
    cfg.starts = 64;
    cfg.seed = 7;
    cfg.time_limit_seconds = 600.0;
    Row row;
    row.name = "multistart descent (64)";
    double t = now_s();
    const SolveResult a = multistart_round(mp, cfg);
    row.serial = now_s() - t;
    cfg.exec = Exec::parallel;
    t = now_s();
    const SolveResult b = multistart_round(mp, cfg);
    row.parallel = now_s() - t;
    row.agree = same_solve(a, b);
    rows.push_back(row);
  }

  print_rows(rows);
  return 0;
}
