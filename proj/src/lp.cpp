#include "gnep/lp.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace gnep {
namespace {

template <class T>
struct Tol;

template <>
struct Tol<Rational> {
  static bool neg(const Rational& v) { return v < 0; }
  static bool pos(const Rational& v) { return v > 0; }
  static bool nonzero(const Rational& v) { return v != 0; }
  static bool feas_gap(const Rational& v) { return v > 0; }
  static constexpr long long max_iters = 1000000;
};

template <>
struct Tol<double> {
  static bool neg(double v) { return v < -1e-9; }
  static bool pos(double v) { return v > 1e-11; }
  static bool nonzero(double v) { return v > 1e-11 || v < -1e-11; }
  static bool feas_gap(double v) { return v > 1e-7; }
  static constexpr long long max_iters = 20000;
};

// Column classes, laid out structural | slack | artificial. Bland's rule
// scans this fixed order, which makes every solve deterministic.
template <class T>
class Simplex {
 public:
  explicit Simplex(const BasicLinearProgram<T>& lp) : lp_(lp) {}

  BasicLpSolution<T> run() {
    validate();
    build();
    BasicLpSolution<T> sol;
    if (!phase(/*phase1=*/true)) {
      sol.status = LpStatus::iteration_limit;
      return sol;
    }
    if (Tol<T>::feas_gap(-t_[m_ + 1][width_ - 1])) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    drive_out_artificials();
    if (!phase(/*phase1=*/false)) {
      sol.status = unbounded_ ? LpStatus::unbounded : LpStatus::iteration_limit;
      return sol;
    }
    extract(sol);
    return sol;
  }

 private:
  void validate() const {
    const std::size_t n = lp_.num_vars(), m = lp_.num_rows();
    if (lp_.sense.size() != m || lp_.rhs.size() != m)
      throw std::invalid_argument("solve_lp: row metadata size mismatch");
    for (const auto& r : lp_.rows)
      if (r.size() != n) throw std::invalid_argument("solve_lp: row width mismatch");
    if (!lp_.nonneg.empty() && lp_.nonneg.size() != n)
      throw std::invalid_argument("solve_lp: nonneg flag size mismatch");
  }

  bool var_nonneg(std::size_t j) const { return lp_.nonneg.empty() || lp_.nonneg[j]; }

  void build() {
    const std::size_t n = lp_.num_vars();
    m_ = lp_.num_rows();
    // Structural columns: +x_j, plus a -x_j column for free variables.
    for (std::size_t j = 0; j < n; ++j) {
      col_var_.push_back({j, 1});
      if (!var_nonneg(j)) col_var_.push_back({j, -1});
    }
    const std::size_t nstruct = col_var_.size();
    std::size_t nslack = 0;
    for (std::size_t r = 0; r < m_; ++r)
      if (lp_.sense[r] != Sense::eq) ++nslack;
    slack_start_ = nstruct;
    art_start_ = nstruct + nslack;
    ncols_ = art_start_ + m_;
    width_ = ncols_ + 1;

    row_flip_.assign(m_, false);
    t_.assign(m_ + 2, std::vector<T>(width_, T(0)));
    basis_.assign(m_, 0);
    banned_.assign(ncols_, false);

    std::size_t slack = slack_start_;
    for (std::size_t r = 0; r < m_; ++r) {
      const bool flip = lp_.rhs[r] < T(0);
      row_flip_[r] = flip;
      Sense s = lp_.sense[r];
      if (flip && s == Sense::le) s = Sense::ge;
      else if (flip && s == Sense::ge) s = Sense::le;
      for (std::size_t cc = 0; cc < nstruct; ++cc) {
        T v = lp_.rows[r][col_var_[cc].first] * T(col_var_[cc].second);
        t_[r][cc] = flip ? -v : v;
      }
      if (s != Sense::eq) {
        t_[r][slack] = (s == Sense::le) ? T(1) : T(-1);
        ++slack;
      }
      t_[r][art_start_ + r] = T(1);
      banned_[art_start_ + r] = true;  // artificials never (re-)enter
      t_[r][width_ - 1] = flip ? -lp_.rhs[r] : lp_.rhs[r];
    }

    // Phase-2 reduced costs relative to the all-artificial basis (artificial
    // cost 0, so the raw costs are already reduced).
    const T dir = (lp_.direction == Direction::maximize) ? T(-1) : T(1);
    for (std::size_t cc = 0; cc < nstruct; ++cc)
      t_[m_][cc] = dir * lp_.c[col_var_[cc].first] * T(col_var_[cc].second);
    // Phase-1 reduced costs: cost 1 on artificials, so subtract each row.
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t cc = 0; cc < width_; ++cc)
        if (cc < art_start_ || cc >= ncols_) t_[m_ + 1][cc] -= t_[r][cc];
    for (std::size_t r = 0; r < m_; ++r) t_[m_ + 1][art_start_ + r] = T(0);

    for (std::size_t r = 0; r < m_; ++r) basis_[r] = art_start_ + r;
  }

  void pivot(std::size_t r, std::size_t c) {
    const T piv = t_[r][c];
    for (auto& v : t_[r]) v /= piv;
    t_[r][c] = T(1);
    for (std::size_t rr = 0; rr < m_ + 2; ++rr) {
      if (rr == r) continue;
      const T f = t_[rr][c];
      if (!Tol<T>::nonzero(f)) {
        t_[rr][c] = T(0);
        continue;
      }
      for (std::size_t cc = 0; cc < width_; ++cc) t_[rr][cc] -= f * t_[r][cc];
      t_[rr][c] = T(0);
    }
    basis_[r] = c;
  }

  // Bland: lowest-index entering column, lowest basic index on ratio ties.
  bool phase(bool phase1) {
    const std::size_t obj = phase1 ? m_ + 1 : m_;
    while (true) {
      if (++iters_ > Tol<T>::max_iters) return false;
      std::size_t enter = ncols_;
      for (std::size_t cc = 0; cc < ncols_; ++cc) {
        if (banned_[cc]) continue;
        if (Tol<T>::neg(t_[obj][cc])) {
          enter = cc;
          break;
        }
      }
      if (enter == ncols_) return true;
      std::size_t leave = m_;
      T best_ratio(0);
      for (std::size_t r = 0; r < m_; ++r) {
        if (!Tol<T>::pos(t_[r][enter])) continue;
        T ratio = t_[r][width_ - 1] / t_[r][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == m_) {
        unbounded_ = !phase1;
        return false;
      }
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < art_start_) continue;
      for (std::size_t cc = 0; cc < art_start_; ++cc) {
        if (!banned_[cc] && Tol<T>::nonzero(t_[r][cc])) {
          pivot(r, cc);
          break;
        }
      }
      // Rows with no eligible column are redundant; the artificial stays
      // basic at zero and cannot grow (zero rhs wins every ratio test).
    }
  }

  void extract(BasicLpSolution<T>& sol) const {
    sol.status = LpStatus::optimal;
    sol.x.assign(lp_.num_vars(), T(0));
    std::vector<T> colval(ncols_, T(0));
    for (std::size_t r = 0; r < m_; ++r) colval[basis_[r]] = t_[r][width_ - 1];
    for (std::size_t cc = 0; cc < col_var_.size(); ++cc)
      sol.x[col_var_[cc].first] += T(col_var_[cc].second) * colval[cc];
    const bool maximize = lp_.direction == Direction::maximize;
    sol.value = maximize ? t_[m_][width_ - 1] : -t_[m_][width_ - 1];
    sol.dual.assign(m_, T(0));
    for (std::size_t r = 0; r < m_; ++r) {
      T y = -t_[m_][art_start_ + r];
      if (row_flip_[r]) y = -y;
      sol.dual[r] = maximize ? -y : y;
    }
  }

  const BasicLinearProgram<T>& lp_;
  std::vector<std::pair<std::size_t, int>> col_var_;  // structural col -> (var, sign)
  std::vector<std::vector<T>> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> banned_, row_flip_;
  std::size_t m_ = 0, slack_start_ = 0, art_start_ = 0, ncols_ = 0, width_ = 0;
  long long iters_ = 0;
  bool unbounded_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) { return Simplex<Rational>(lp).run(); }

LpSolutionD solve_lp_d(const LinearProgramD& lp) { return Simplex<double>(lp).run(); }

}  // namespace gnep
