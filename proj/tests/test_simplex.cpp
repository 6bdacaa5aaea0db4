// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "riskcr/rng.hpp"
#include "riskcr/simplex.hpp"

using namespace riskcr;

TEST_CASE("simplex solves a textbook LP") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  (min of the negative)
  LpProblem lp;
  lp.c = {-3.0, -5.0};
  lp.a_ub = {{1.0, 0.0}, {0.0, 2.0}, {3.0, 2.0}};
  lp.b_ub = {4.0, 12.0, 18.0};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.feasible);
  CHECK(sol.value == doctest::Approx(-36.0).epsilon(1e-9));
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("simplex handles equality constraints and negative rhs") {
  // min x + y s.t. x + y = 1, x - y <= -0.5  =>  y >= 0.75 at x = 0.25
  LpProblem lp;
  lp.c = {1.0, 2.0};
  lp.a_eq = {{1.0, 1.0}};
  lp.b_eq = {1.0};
  lp.a_ub = {{1.0, -1.0}};
  lp.b_ub = {-0.5};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.feasible);
  CHECK(sol.x[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("simplex detects infeasibility") {
  LpProblem lp;
  lp.c = {1.0};
  lp.a_eq = {{1.0}};
  lp.b_eq = {2.0};
  lp.a_ub = {{1.0}};
  lp.b_ub = {1.0};
  CHECK_FALSE(solve_lp(lp).feasible);
}

TEST_CASE("simplex matrix-game master matches brute force over the simplex") {
  // min over the simplex of max_i (g_i + c_i . p), solved as an LP with an
  // epigraph variable, cross-checked by dense grid search.
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_double() * 2.0);  // 2 or 3
    const int rows = 2 + static_cast<int>(rng.next_double() * 3.0);
    std::vector<double> g(static_cast<std::size_t>(rows));
    std::vector<std::vector<double>> cuts(static_cast<std::size_t>(rows),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& v : g) v = rng.next_double();
    for (auto& row : cuts)
      for (auto& v : row) v = rng.next_double() * 2.0;

    LpProblem lp;
    lp.c.assign(static_cast<std::size_t>(n) + 1, 0.0);
    lp.c.back() = 1.0;
    for (int i = 0; i < rows; ++i) {
      std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
      for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = cuts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      row.back() = -1.0;
      lp.a_ub.push_back(std::move(row));
      lp.b_ub.push_back(-g[static_cast<std::size_t>(i)]);
    }
    std::vector<double> eq(static_cast<std::size_t>(n) + 1, 1.0);
    eq.back() = 0.0;
    lp.a_eq.push_back(std::move(eq));
    lp.b_eq.push_back(1.0);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.feasible);

    double best = 1e300;
    const int m = 60;
    std::vector<double> p(static_cast<std::size_t>(n));
    const auto eval = [&]() {
      double worst = -1e300;
      for (int i = 0; i < rows; ++i) {
        double v = g[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) v += cuts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
        worst = std::max(worst, v);
      }
      best = std::min(best, worst);
    };
    if (n == 2) {
      for (int a = 0; a <= m; ++a) {
        p[0] = static_cast<double>(a) / m;
        p[1] = 1.0 - p[0];
        eval();
      }
    } else {
      for (int a = 0; a <= m; ++a) {
        for (int b = 0; a + b <= m; ++b) {
          p[0] = static_cast<double>(a) / m;
          p[1] = static_cast<double>(b) / m;
          p[2] = 1.0 - p[0] - p[1];
          eval();
        }
      }
    }
    CHECK(sol.value <= best + 1e-9);
    CHECK(sol.value >= best - 0.1);  // grid is coarse; LP must not be worse
  }
}
