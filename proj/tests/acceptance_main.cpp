// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Every tolerance is pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "riskcr/cli.hpp"
#include "riskcr/one_max_search.hpp"
#include "riskcr/rng.hpp"
#include "riskcr/simulation.hpp"
#include "riskcr/ski_rental_continuous.hpp"
#include "riskcr/ski_rental_discrete.hpp"
#include "riskcr/special_functions.hpp"

using namespace riskcr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --- criterion 11 oracles ------------------------------------------------
// Exact brute force over the q-polytope vertices (all coordinates at a bound
// except one absorbing the budget); the true LP maximum sits at a vertex.
double vertex_cvar_oracle(const std::vector<double>& outcome, const std::vector<double>& p,
                          double delta) {
  const std::size_t n = outcome.size();
  const double budget = 1.0 - delta;
  double best = -1e300;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t free = 0; free < n; ++free) {
      double total = 0.0, value = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == free) continue;
        const double q = (mask >> j) & 1 ? p[j] : 0.0;
        total += q;
        value += q * outcome[j];
      }
      const double rest = budget - total;
      if (rest < -1e-12 || rest > p[free] + 1e-12) continue;
      best = std::max(best, value + std::max(0.0, rest) * outcome[free]);
    }
  }
  return best / budget;
}

// Brute force over the q-polytope restricted to a 1e-3 grid: coordinates
// before the last two run over grid multiples plus {p_j, remainder}; given
// those, the objective is linear in the split between the last two
// coordinates, so its grid maximum sits at an endpoint of the feasible grid
// range (or at the box/remainder corners), which are all enumerated.
double grid_cvar_oracle(const std::vector<double>& outcome, const std::vector<double>& p,
                        double delta, double res) {
  const std::size_t n = outcome.size();
  const double budget = 1.0 - delta;
  double best = -1e300;

  const auto last_two = [&](double used, double partial) {
    const std::size_t a = n - 2, z = n - 1;
    const double rest = budget - used;
    if (rest < -1e-12) return;
    // q_a in [max(0, rest - p_z), min(p_a, rest)]
    const double lo = std::max(0.0, rest - p[z]);
    const double hi = std::min(p[a], rest);
    if (lo > hi + 1e-12) return;
    std::vector<double> candidates{lo, hi, std::ceil(lo / res) * res, std::floor(hi / res) * res,
                                   p[a], rest};
    for (double qa : candidates) {
      if (qa < lo - 1e-12 || qa > hi + 1e-12) continue;
      const double qz = rest - qa;
      best = std::max(best, partial + qa * outcome[a] + qz * outcome[z]);
    }
  };

  const auto rec = [&](auto&& self, std::size_t j, double used, double partial) -> void {
    if (used > budget + 1e-12) return;
    if (j + 2 == n) {
      last_two(used, partial);
      return;
    }
    for (double q = 0.0;; q += res) {
      const double take = std::min(q, p[j]);
      self(self, j + 1, used + take, partial + take * outcome[j]);
      if (q >= p[j]) break;
    }
    const double rest = budget - used;
    if (rest >= 0.0 && rest <= p[j]) self(self, j + 1, used + rest, partial + rest * outcome[j]);
  };

  if (n == 2)
    last_two(0.0, 0.0);
  else
    rec(rec, 0, 0.0, 0.0);
  return best / budget;
}

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli_run({"csr", "solve", "--delta", "0", "--json"}, out, err);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double alpha = 0.0;
  std::sscanf(out.str().c_str(), "{\"alpha\":%lf", &alpha);
  const double target = std::exp(1.0) / (std::exp(1.0) - 1.0);
  const bool pass = code == 0 && std::abs(alpha - target) <= 1e-3 && secs < 5.0;
  report(1, pass,
         "csr solve --delta 0: alpha=" + fmt(alpha) + " vs e/(e-1)=" + fmt(target) + " in " +
             fmt(secs) + "s");
}

void criterion_2() {
  const double c = constant_c();
  const double formula = 2.0 - 1.0 / (std::exp(c) - 1.0);
  const double value = csr_suboptimal_dcr(RiskLevel(0.0));
  const double optimum = csr_solve_optimal(RiskLevel(0.0)).alpha_star;
  const double excess = value - optimum;
  const bool pass =
      std::abs(value - formula) <= 1e-9 && excess > 0.0 && std::abs(excess - 0.018) <= 0.004;
  report(2, pass,
         "closed-form DCR at delta 0: " + fmt(value) + " (formula gap " +
             fmt(std::abs(value - formula)) + "), exceeds optimum by " + fmt(excess));
}

void criterion_3() {
  bool pass = true;
  std::string detail;
  for (int k = 0; k <= 9; ++k) {
    const RiskLevel d(k / 10.0);
    const double lower = csr_lower_bound(d);
    const double optimal = csr_solve_optimal(d).alpha_star;
    const double subopt = csr_suboptimal_dcr(d);
    if (!(lower <= optimal + 1e-3 && optimal <= subopt + 1e-3)) {
      pass = false;
      detail = " violated at delta=" + fmt(d.delta);
    }
  }
  const double lb075 = csr_lower_bound(RiskLevel(0.75));
  const double opt075 = csr_solve_optimal(RiskLevel(0.75)).alpha_star;
  if (std::abs(lb075 - 1.875) > 1e-12) {
    pass = false;
    detail += " lower(0.75) != 1.875";
  }
  if (!(opt075 >= 1.875 && opt075 <= 1.99)) {
    pass = false;
    // Known-red interval check: three independent integrations (one-step
    // solver + bisection here, and two external re-derivations including an
    // integral-equation fixed point) all give 1.9925674 at delta = 0.75,
    // which the closed-form bound pair provably sandwiches in
    // [1.875, 1.99339]; the asserted 1.99 upper end sits below the optimum.
    detail += " outside asserted [1.875, 1.99] though inside the provable sandwich"
              " [1.875, 1.99339]";
  }
  const fs::path csv = fs::temp_directory_path() / "riskcr_acceptance_csr_sweep.csv";
  std::ostringstream out, err;
  const int code = cli_run({"csr", "sweep", "--delta", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                            "--out", csv.string()},
                           out, err);
  if (code != 0 || !fs::exists(csv)) {
    pass = false;
    detail += " sweep CSV not emitted";
  }
  fs::remove(csv);
  report(3, pass, "CSR sandwich over delta grid, lower(0.75)=" + fmt(lb075) +
                      ", optimal(0.75)=" + fmt(opt075) + detail);
}

void criterion_4() {
  bool pass = true;
  double worst = 0.0;
  for (double d : {0.25, 0.5}) {
    const double alpha = csr_solve_optimal(RiskLevel(d)).alpha_star;
    const CsrStrategy dde = csr_solve_dde(alpha, RiskLevel(d));
    for (int k = 0; k <= 49; ++k) {
      const double t = (1.0 - d) + d * (k + 1) / 50.0;
      const double gap =
          std::abs(csr_analytic_phi_small_delta(alpha, RiskLevel(d), t) - dde.inverse_cdf(t));
      worst = std::max(worst, gap);
      if (gap > 1e-4) pass = false;
    }
  }
  report(4, pass, "closed form vs DDE integration, worst |gap| = " + fmt(worst));
}

void criterion_5() {
  bool pass = true;
  double worst = 0.0;
  const double tol = 1e-8;  // default solver tolerance, pinned
  for (double d : {0.3, 0.75}) {
    const SolverConfig cfg;
    const CsrOptimum opt = csr_solve_optimal(RiskLevel(d), cfg);
    const DcrReport rep = csr_dcr(opt.strategy, RiskLevel(d), cfg);
    for (std::size_t i = 0; i < rep.decisions.size(); ++i) {
      if (rep.decisions[i] < 1.0 / 2000.0 - 1e-12) continue;
      const double dev = std::abs(rep.ratios[i] - opt.alpha_star);
      worst = std::max(worst, dev);
      if (dev > 10.0 * tol) pass = false;
    }
  }
  report(5, pass, "optimal CSR strategy indifference: worst |ratio - alpha*| = " + fmt(worst) +
                      " vs 10*tol = " + fmt(10.0 * tol));
}

void criterion_6() {
  bool pass = true;
  std::string detail;
  for (int b : {2, 3, 4, 8}) {
    const double d = dsr_analytic_threshold(b) / 2.0;
    const DsrOptimum expected = dsr_analytic_optimal(b, RiskLevel(d));
    const DsrOptimum got = dsr_solve_optimal(b, RiskLevel(d));
    if (std::abs(got.alpha - expected.alpha) > 1e-3) {
      pass = false;
      detail += " alpha mismatch at B=" + std::to_string(b);
    }
    for (int j = 0; j < b; ++j) {
      if (std::abs(got.strategy.probs[static_cast<std::size_t>(j)] -
                   expected.strategy.probs[static_cast<std::size_t>(j)]) > 1e-3) {
        pass = false;
        detail += " p mismatch at B=" + std::to_string(b);
        break;
      }
    }
  }
  const double a40 = dsr_solve_optimal(4, RiskLevel(0.0)).alpha;
  if (std::abs(a40 - 256.0 / 175.0) > 1e-3) {
    pass = false;
    detail += " B=4 delta=0 off 256/175";
  }
  report(6, pass, "DSR analytic regime; alpha(4, 0) = " + fmt(a40) + detail);
}

void criterion_7() {
  const double det = dsr_solve_optimal(4, RiskLevel(0.85)).alpha;
  const double rnd = dsr_solve_optimal(64, RiskLevel(0.5)).alpha;
  const bool pass = std::abs(det - 1.75) <= 1e-3 && rnd < 2.0 - 1.0 / 64.0 - 1e-3;
  report(7, pass, "DSR phase transition: alpha(4, .85) = " + fmt(det) + ", alpha(64, .5) = " +
                      fmt(rnd) + " < " + fmt(2.0 - 1.0 / 64.0 - 1e-3));
}

void criterion_8() {
  bool pass = true;
  double worst = -1e300;
  for (int b : {2, 4, 8}) {
    for (double d : {0.0, 0.3, 0.6}) {
      const double dsr = dsr_solve_optimal(b, RiskLevel(d)).alpha;
      const double csr = csr_solve_optimal(RiskLevel(d)).alpha_star;
      worst = std::max(worst, dsr - csr);
      if (dsr > csr + 2e-3) pass = false;
    }
  }
  report(8, pass, "DSR <= CSR embedding, worst (dsr - csr) = " + fmt(worst));
}

void criterion_9() {
  const double a1 = oms_solve_alpha(OmsProblem(1.0, 1.0 + std::exp(2.0)), RiskLevel(0.0)).alpha;
  const OmsProblem p100(1.0, 100.0);
  const double a2 = oms_solve_alpha(p100, RiskLevel(0.5)).alpha;
  const double a3 = oms_solve_alpha(p100, RiskLevel(0.75)).alpha;
  const bool pass =
      std::abs(a1 - 2.0) <= 1e-6 && std::abs(a2 - 10.0) <= 1e-6 && std::abs(a3 - 10.0) <= 1e-6;
  report(9, pass, "OMS endpoints: alpha(theta=1+e^2, 0) = " + fmt(a1) +
                      ", alpha(100, .5) = " + fmt(a2) + ", alpha(100, .75) = " + fmt(a3));
}

void criterion_10() {
  const OmsProblem p(1.0, 100.0);
  bool pass = true;
  std::string detail;
  for (double d : {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0}) {
    const double lower = oms_lower_bound_root(p, RiskLevel(d));
    const double upper = oms_upper_bound_root(p, RiskLevel(d));
    const double alpha = oms_solve_alpha(p, RiskLevel(d)).alpha;
    if (!(lower <= alpha + 1e-6 && alpha <= upper + 1e-6)) {
      pass = false;
      detail += " sandwich broken at delta=" + fmt(d);
    }
    if (d >= 0.5 && (std::abs(lower - 10.0) > 1e-6 || std::abs(upper - 10.0) > 1e-6)) {
      pass = false;
      detail += " bounds differ from sqrt(theta) at delta=" + fmt(d);
    }
  }
  const fs::path csv = fs::temp_directory_path() / "riskcr_acceptance_oms_sweep.csv";
  std::ostringstream out, err;
  const int code = cli_run({"oms", "sweep", "--L", "1", "--U", "100", "--delta",
                            "0,0.05,0.1,0.2,0.3,0.4,0.5,0.7,1", "--out", csv.string()},
                           out, err);
  if (code != 0 || !fs::exists(csv)) {
    pass = false;
    detail += " sweep CSV not emitted";
  }
  fs::remove(csv);
  report(10, pass, "OMS sandwich over delta grid" + (detail.empty() ? "" : detail));
}

void criterion_11() {
  Xoshiro256 rng(2024);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int b = 2 + static_cast<int>(rng.next_double() * 3);  // 2..4
    std::vector<double> p(static_cast<std::size_t>(b));
    double total = 0.0;
    for (double& x : p) {
      x = -std::log(1.0 - rng.next_double());
      total += x;
    }
    for (double& x : p) x /= total;
    const double delta = rng.next_double() * 0.9;
    const int i = 1 + static_cast<int>(rng.next_double() * b);
    const CostMatrix m(b);
    const double greedy =
        dsr_dcr_at(DiscreteStrategy{b, p}, i, RiskLevel(delta));
    const double oracle = std::max(grid_cvar_oracle(m.row(i), p, delta, 1e-3),
                                   vertex_cvar_oracle(m.row(i), p, delta));
    const double gap = std::abs(greedy - oracle);
    worst = std::max(worst, gap);
    if (gap > 2e-3) pass = false;
  }
  report(11, pass, "greedy CVaR vs 1e-3 grid brute force over 200 triples, worst gap = " +
                       fmt(worst));
}

void criterion_12() {
  bool pass = true;
  std::string detail;
  const CsrOptimum csr = csr_solve_optimal(RiskLevel(0.5));
  const DsrOptimum dsr = dsr_solve_optimal(4, RiskLevel(0.3));
  const OmsProblem prob(1.0, 100.0);
  const OmsSolution oms = oms_solve_alpha(prob, RiskLevel(0.3));
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SimConfig cfg;
    cfg.samples = 1'000'000;
    cfg.seed = seed;
    const SimReport a = simulate_csr(csr.strategy, RiskLevel(0.5), cfg);
    const SimReport b = simulate_dsr(dsr.strategy, RiskLevel(0.3), cfg);
    const SimReport c = simulate_oms(oms.strategy, prob, RiskLevel(0.3), cfg);
    if (!a.within(3.0)) detail += " csr seed " + std::to_string(seed);
    if (!b.within(3.0)) detail += " dsr seed " + std::to_string(seed);
    if (!c.within(3.0)) detail += " oms seed " + std::to_string(seed);
  }
  if (!detail.empty()) pass = false;
  // cmd_simulate as a CI gate
  std::ostringstream out, err;
  const int code = cli_run({"csr", "simulate", "--delta", "0.5", "--samples", "1000000", "--seed",
                            "7", "--out",
                            (fs::temp_directory_path() / "riskcr_acceptance_sim.csv").string()},
                           out, err);
  fs::remove(fs::temp_directory_path() / "riskcr_acceptance_sim.csv");
  if (code != 0) {
    pass = false;
    detail += " cmd_simulate exit " + std::to_string(code);
  }
  report(12, pass, "Monte Carlo agreement within 3 stderr, 3 seeds, n=1e6" +
                       (detail.empty() ? "" : " (failed:" + detail + ")"));
}

void criterion_13() {
  const double c = constant_c();
  const double residual = std::abs(1.0 + 2.0 * c - std::exp(c));
  // series oracle for Ei(1) in long double
  long double sum = 0.0L, term = 1.0L;
  for (int n = 1; n <= 60; ++n) {
    term *= 1.0L / n;
    sum += term / n;
  }
  const double ei1_oracle =
      static_cast<double>(0.577215664901532860606512090082402431042L + sum);
  const double w_resid =
      std::abs(lambert_w(WBranch::principal, 2.5) * std::exp(lambert_w(WBranch::principal, 2.5)) -
               2.5);
  const bool pass = std::abs(c - 1.25643) <= 1e-5 && residual <= 1e-12 &&
                    std::abs(exp_integral_ei(1.0) - ei1_oracle) <= 1e-8 && w_resid <= 1e-12;
  report(13, pass, "special functions: c = " + fmt(c) + " (residual " + fmt(residual) +
                       "), |Ei(1) - oracle| = " + fmt(std::abs(exp_integral_ei(1.0) - ei1_oracle)));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  if (g_failures == 0)
    std::printf("all 13 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures;
}
