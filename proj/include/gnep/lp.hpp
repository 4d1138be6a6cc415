#pragma once

#include <vector>

#include "gnep/rational.hpp"

namespace gnep {

enum class Sense { le, eq, ge };
enum class Direction { minimize, maximize };

// `iteration_limit` can only surface from the double-precision instantiation;
// the exact path is protected by Bland's rule.
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

template <class T>
struct BasicLinearProgram {
  Direction direction = Direction::minimize;
  std::vector<T> c;
  std::vector<std::vector<T>> rows;
  std::vector<Sense> sense;
  std::vector<T> rhs;
  // Per-variable: true = x_j >= 0, false = free. Defaults to nonnegative when
  // left empty. Box bounds are expressed as explicit rows (add_box) so that
  // LpSolution::dual stays one entry per row.
  std::vector<bool> nonneg;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<T> coeffs, Sense s, T b) {
    rows.push_back(std::move(coeffs));
    sense.push_back(s);
    rhs.push_back(std::move(b));
  }

  void add_box(std::size_t j, T lo, T hi) {
    std::vector<T> lo_row(num_vars(), T(0)), hi_row(num_vars(), T(0));
    lo_row[j] = T(1);
    hi_row[j] = T(1);
    add_row(std::move(lo_row), Sense::ge, std::move(lo));
    add_row(std::move(hi_row), Sense::le, std::move(hi));
  }
};

// Dual sign convention, for minimize problems: dual[r] >= 0 on >= rows,
// dual[r] <= 0 on <= rows, free on = rows, and at an optimum
//   value == dual . rhs   and   rows^T dual <= c  (componentwise),
// with equality on every column whose variable is free or strictly positive.
// For maximize problems all dual signs flip and rows^T dual >= c instead;
// value == dual . rhs still holds.
template <class T>
struct BasicLpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<T> x;
  std::vector<T> dual;
  T value = T(0);
};

using LinearProgram = BasicLinearProgram<Rational>;
using LpSolution = BasicLpSolution<Rational>;
using LinearProgramD = BasicLinearProgram<double>;
using LpSolutionD = BasicLpSolution<double>;

// Two-phase dense tableau simplex. Exact over Rational (Bland's rule, no
// tolerances); the double instantiation uses fixed tolerances and an
// iteration cap and exists for the Frank-Wolfe oracles only.
LpSolution solve_lp(const LinearProgram& lp);
LpSolutionD solve_lp_d(const LinearProgramD& lp);

}  // namespace gnep
