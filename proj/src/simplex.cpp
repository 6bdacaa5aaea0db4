// SPDX-License-Identifier: Apache-2.0
#include "riskcr/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskcr {
namespace {

constexpr double kPivotEps = 1e-10;

struct Tableau {
  // rows x (cols + 1); last column is the right-hand side.
  std::vector<std::vector<double>> rows;
  std::vector<double> obj;  // cols + 1; last entry is -objective value
  std::vector<int> basis;   // basic column per row
  int cols = 0;

  void pivot(int r, int col) {
    auto& prow = rows[static_cast<std::size_t>(r)];
    const double piv = prow[static_cast<std::size_t>(col)];
    for (double& v : prow) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      auto& row = rows[i];
      const double factor = row[static_cast<std::size_t>(col)];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < row.size(); ++j) row[j] -= factor * prow[j];
      row[static_cast<std::size_t>(col)] = 0.0;
    }
    const double ofac = obj[static_cast<std::size_t>(col)];
    if (ofac != 0.0) {
      for (std::size_t j = 0; j < obj.size(); ++j) obj[j] -= ofac * prow[j];
      obj[static_cast<std::size_t>(col)] = 0.0;
    }
    basis[static_cast<std::size_t>(r)] = col;
  }

  // Returns false if unbounded.
  bool run(int active_cols, int max_iters) {
    for (int it = 0; it < max_iters; ++it) {
      int entering = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (obj[static_cast<std::size_t>(j)] < -kPivotEps) {
          entering = j;  // Bland: smallest index
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double a = rows[i][static_cast<std::size_t>(entering)];
        if (a <= kPivotEps) continue;
        const double ratio = rows[i].back() / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leaving >= 0 &&
             basis[i] < basis[static_cast<std::size_t>(leaving)])) {
          best_ratio = ratio;
          leaving = static_cast<int>(i);
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m_ub = static_cast<int>(lp.a_ub.size());
  const int m_eq = static_cast<int>(lp.a_eq.size());
  const int m = m_ub + m_eq;
  const int n_slack = m_ub;

  // Assemble equality rows [A | slack] x = b with b >= 0.
  std::vector<std::vector<double>> a(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(n + n_slack), 0.0));
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m_ub; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lp.a_ub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1.0;
    b[static_cast<std::size_t>(i)] = lp.b_ub[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < m_eq; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(m_ub + i)][static_cast<std::size_t>(j)] = lp.a_eq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(m_ub + i)] = lp.b_eq[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < m; ++i) {
    if (b[static_cast<std::size_t>(i)] < 0.0) {
      for (double& v : a[static_cast<std::size_t>(i)]) v = -v;
      b[static_cast<std::size_t>(i)] = -b[static_cast<std::size_t>(i)];
    }
  }

  // Basic column per row: a positive slack if available, else an artificial.
  Tableau t;
  t.basis.assign(static_cast<std::size_t>(m), -1);
  std::vector<int> artificial_rows;
  for (int i = 0; i < m_ub; ++i) {
    if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] > 0.0) t.basis[static_cast<std::size_t>(i)] = n + i;
  }
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (t.basis[static_cast<std::size_t>(i)] < 0) ++n_art;

  t.cols = n + n_slack + n_art;
  t.rows.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(t.cols) + 1, 0.0));
  int art = 0;
  for (int i = 0; i < m; ++i) {
    auto& row = t.rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < n + n_slack; ++j) row[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    row.back() = b[static_cast<std::size_t>(i)];
    if (t.basis[static_cast<std::size_t>(i)] < 0) {
      const int col = n + n_slack + art++;
      row[static_cast<std::size_t>(col)] = 1.0;
      t.basis[static_cast<std::size_t>(i)] = col;
      artificial_rows.push_back(i);
    }
  }

  LpSolution sol;
  const int max_iters = 2000 * (t.cols + m + 16);

  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials.
    t.obj.assign(static_cast<std::size_t>(t.cols) + 1, 0.0);
    for (int j = n + n_slack; j < t.cols; ++j) t.obj[static_cast<std::size_t>(j)] = 1.0;
    for (int i : artificial_rows) {
      const auto& row = t.rows[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < t.obj.size(); ++j) t.obj[j] -= row[j];
    }
    if (!t.run(t.cols, max_iters)) return sol;
    if (-t.obj.back() > 1e-7) return sol;  // infeasible
    // Pivot remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis[static_cast<std::size_t>(i)] < n + n_slack) continue;
      int col = -1;
      for (int j = 0; j < n + n_slack; ++j) {
        if (std::abs(t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col >= 0) t.pivot(i, col);
      // A fully zero row is redundant; its artificial stays basic at zero.
    }
  }

  // Phase 2 with the real objective, priced out over the basis.
  t.obj.assign(static_cast<std::size_t>(t.cols) + 1, 0.0);
  for (int j = 0; j < n; ++j) t.obj[static_cast<std::size_t>(j)] = lp.c[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) {
    const int bc = t.basis[static_cast<std::size_t>(i)];
    const double cb = bc < n ? lp.c[static_cast<std::size_t>(bc)] : 0.0;
    if (cb == 0.0) continue;
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < t.obj.size(); ++j) t.obj[j] -= cb * row[j];
  }
  // Artificial columns must not re-enter.
  if (!t.run(n + n_slack, max_iters)) return sol;

  sol.feasible = true;
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    const int bc = t.basis[static_cast<std::size_t>(i)];
    if (bc < n) sol.x[static_cast<std::size_t>(bc)] = t.rows[static_cast<std::size_t>(i)].back();
  }
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += lp.c[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  return sol;
}

}  // namespace riskcr
