#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "martin_games/errors.hpp"

namespace martin_games {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// maximize objective . x  subject to  rows[r] . x (relation) rhs[r],  x >= 0.
template <class T>
struct LinearProgram {
  int num_vars = 0;
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<Relation> relations;
  std::vector<T> rhs;

  void add(std::vector<T> row, Relation rel, T b) {
    rows.push_back(std::move(row));
    relations.push_back(rel);
    rhs.push_back(std::move(b));
  }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  T objective{};
  std::vector<T> x;
  // Some nonbasic column had zero reduced cost at the optimum.
  bool alternative_optima = false;
  int pivots = 0;
};

namespace lp_detail {

template <class T>
bool positive(const T& v, const T& tol) { return v > tol; }

// Dense tableau simplex with Bland's rule. Column `rhs_col` holds b; the last
// row holds reduced profits (maximization: entering columns have profit > tol).
template <class T>
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1)), basis_(rows) {}

  T& at(int r, int c) { return a_[r * (n_ + 1) + c]; }
  const T& at(int r, int c) const { return a_[r * (n_ + 1) + c]; }
  T& rhs(int r) { return at(r, n_); }
  T& profit(int c) { return at(m_, c); }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const T inv = T(1) / at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, c) = T(1);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const T f = at(i, c);
      if (f == T(0)) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = T(0);
    }
    basis_[r] = c;
  }

  // Returns false when unbounded.
  bool optimize(const std::vector<char>& allowed, const T& tol, int& pivots, int max_pivots) {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < n_; ++c)
        if (allowed[c] && positive(profit(c), tol)) {
          enter = c;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      T best{};
      for (int r = 0; r < m_; ++r) {
        if (!positive(at(r, enter), tol)) continue;
        const T ratio = rhs(r) / at(r, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (++pivots > max_pivots) throw SolverError("simplex pivot budget exhausted");
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_;
  int n_;
  std::vector<T> a_;
  std::vector<int> basis_;
};

}  // namespace lp_detail

// Two-phase primal simplex. `tol` is the pivot tolerance (use 0 for exact types).
template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp, T tol = T(0), int max_pivots = 100000) {
  const int m = static_cast<int>(lp.rows.size());
  const int nv = lp.num_vars;
  int slacks = 0, artificials = 0;
  for (int r = 0; r < m; ++r) {
    const bool flip = lp.rhs[r] < T(0);
    Relation rel = lp.relations[r];
    if (flip && rel != Relation::kEqual)
      rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual : Relation::kLessEqual;
    if (rel != Relation::kEqual) ++slacks;
    if (rel != Relation::kLessEqual) ++artificials;
  }
  const int cols = nv + slacks + artificials;
  lp_detail::Tableau<T> tab(m, cols);
  std::vector<char> is_artificial(cols, 0);
  int next_slack = nv, next_art = nv + slacks;
  for (int r = 0; r < m; ++r) {
    const bool flip = lp.rhs[r] < T(0);
    Relation rel = lp.relations[r];
    if (flip && rel != Relation::kEqual)
      rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual : Relation::kLessEqual;
    for (int j = 0; j < nv; ++j) tab.at(r, j) = flip ? T(-lp.rows[r][j]) : lp.rows[r][j];
    tab.rhs(r) = flip ? T(-lp.rhs[r]) : lp.rhs[r];
    if (rel == Relation::kLessEqual) {
      tab.at(r, next_slack) = T(1);
      tab.basis()[r] = next_slack++;
    } else {
      if (rel == Relation::kGreaterEqual) tab.at(r, next_slack++) = T(-1);
      tab.at(r, next_art) = T(1);
      is_artificial[next_art] = 1;
      tab.basis()[r] = next_art++;
    }
  }

  LpSolution<T> sol;
  std::vector<char> allowed(cols, 1);
  if (artificials > 0) {
    // Phase 1: maximize -sum(artificials); profits = sum of artificial rows.
    for (int c = 0; c < cols; ++c) tab.profit(c) = T(0);
    tab.at(m, cols) = T(0);
    for (int r = 0; r < m; ++r) {
      if (!is_artificial[tab.basis()[r]]) continue;
      for (int c = 0; c <= cols; ++c)
        if (!is_artificial[c] || c == cols) tab.at(m, c) += tab.at(r, c);
    }
    tab.optimize(allowed, tol, sol.pivots, max_pivots);
    // Remaining infeasibility is the phase-1 objective value.
    const T infeasibility = tab.at(m, cols);
    const T scale_tol = tol == T(0) ? T(0) : T(tol * T(1000));
    if (infeasibility > scale_tol) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (!is_artificial[tab.basis()[r]]) continue;
      for (int c = 0; c < cols; ++c) {
        if (is_artificial[c]) continue;
        const T v = tab.at(r, c);
        if (v > tol || v < T(-tol)) {
          tab.pivot(r, c);
          break;
        }
      }
    }
    for (int c = 0; c < cols; ++c)
      if (is_artificial[c]) allowed[c] = 0;
  }

  // Phase 2 profits: c_j - c_B B^-1 A_j, written into the last row.
  std::vector<T> cost(cols, T(0));
  for (int j = 0; j < nv; ++j) cost[j] = lp.objective[j];
  for (int c = 0; c <= cols; ++c) tab.at(m, c) = c < cols ? cost[c] : T(0);
  for (int r = 0; r < m; ++r) {
    const T cb = cost[tab.basis()[r]];
    if (cb == T(0)) continue;
    for (int c = 0; c <= cols; ++c) tab.at(m, c) -= cb * tab.at(r, c);
  }
  if (!tab.optimize(allowed, tol, sol.pivots, max_pivots)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  sol.status = LpStatus::kOptimal;
  sol.x.assign(nv, T(0));
  std::vector<char> basic(cols, 0);
  for (int r = 0; r < m; ++r) {
    basic[tab.basis()[r]] = 1;
    if (tab.basis()[r] < nv) sol.x[tab.basis()[r]] = tab.rhs(r);
  }
  sol.objective = T(0);
  for (int j = 0; j < nv; ++j) sol.objective += lp.objective[j] * sol.x[j];
  for (int c = 0; c < cols; ++c) {
    if (basic[c] || !allowed[c]) continue;
    const T p = tab.profit(c);
    if (!(p < T(-tol) || p > tol)) sol.alternative_optima = true;
  }
  return sol;
}

}  // namespace martin_games
