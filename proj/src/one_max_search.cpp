// SPDX-License-Identifier: Apache-2.0
#include "riskcr/one_max_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcr {
namespace {

// Solves g(r) = (r-1) * growth(r) - (theta - 1) = 0 on [1, sqrt(theta)] for a
// growth factor that makes g strictly increasing.
template <typename Growth>
double increasing_root(double theta, Growth growth) {
  if (theta <= 1.0) return 1.0;
  double lo = 1.0, hi = std::sqrt(theta);
  const auto g = [&](double r) { return (r - 1.0) * growth(r) - (theta - 1.0); };
  // g(lo) = -(theta-1) < 0 and g(hi) >= 0 for both growth factors used here.
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double root_for_pieces(double theta, double n) {
  if (n <= 0.0) {  // limit form (r-1) e^r = theta - 1
    return increasing_root(theta, [](double r) { return std::exp(r); });
  }
  return increasing_root(theta, [n](double r) { return std::pow(1.0 + r / n, n); });
}

double floor_guarded(double x) { return std::floor(x + 1e-12); }
double ceil_guarded(double x) { return std::ceil(x - 1e-12); }

}  // namespace

OmsProblem::OmsProblem(double l, double u) : low(l), high(u), fluctuation(u / l) {
  if (!(l > 0.0)) throw std::invalid_argument("OmsProblem: L must be positive");
  if (!(u >= l)) throw std::invalid_argument("OmsProblem: U must be at least L");
}

OmsStrategy oms_deterministic_strategy(const OmsProblem& problem) {
  const double threshold = std::sqrt(problem.low * problem.high);
  return OmsStrategy{MonotoneGrid({0.0, 1.0}, {threshold, threshold})};
}

double oms_reward_cvar_at(const OmsStrategy& strategy, const OmsProblem& problem, double v,
                          RiskLevel delta) {
  if (v < problem.low - 1e-12 || v > problem.high + 1e-12)
    throw std::invalid_argument("oms_reward_cvar_at: price out of [L, U]");
  const MonotoneGrid& phi = strategy.inverse_cdf;
  const double d = delta.delta;
  const double y = phi.cdf(v);
  if (d >= 1.0) {
    // Worst realized profit on the support.
    if (y < 1.0) return problem.low;       // some thresholds never sell
    return std::max(problem.low, phi(0.0));  // always sells; worst is the lowest threshold
  }
  if (y <= d) return problem.low;
  return ((1.0 - y) * problem.low + phi.integral(0.0, y - d)) / (1.0 - d);
}

DcrReport oms_dcr(const OmsStrategy& strategy, const OmsProblem& problem, RiskLevel delta,
                  const SolverConfig& cfg) {
  const int m = std::max(2, cfg.adversary_grid_points);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(m) + strategy.inverse_cdf.size() + 1);
  for (int j = 0; j <= m; ++j)
    grid.push_back(problem.low + (problem.high - problem.low) * static_cast<double>(j) /
                                     static_cast<double>(m));
  for (double v : strategy.inverse_cdf.values())
    if (v >= problem.low && v <= problem.high) grid.push_back(v);
  grid.push_back(problem.high);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  DcrReport report;
  report.decisions = grid;
  report.ratios.reserve(grid.size());
  report.sup_ratio = -1.0;
  for (double v : grid) {
    const double r = v / oms_reward_cvar_at(strategy, problem, v, delta);
    report.ratios.push_back(r);
    if (r > report.sup_ratio) {
      report.sup_ratio = r;
      report.argmax_decision = v;
    }
  }
  return report;
}

double oms_phi_analytic(double alpha, RiskLevel delta, const OmsProblem& problem, double t) {
  if (delta.delta >= 1.0) throw std::invalid_argument("oms_phi_analytic: delta must be < 1");
  if (!(alpha > 1.0)) throw std::invalid_argument("oms_phi_analytic: alpha must exceed 1");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("oms_phi_analytic: t must lie in [0, 1]");
  const double d = delta.delta;
  const double l = problem.low;
  if (d == 0.0) return l + (alpha - 1.0) * l * std::exp(alpha * t);

  // Sum over j with t - j delta > 0; term_j = (alpha x_j / (1-d))^j / j!.
  double sum = 1.0;  // j = 0
  const double peak = alpha * t / (1.0 - d);
  for (int j = 1;; ++j) {
    const double x = t - static_cast<double>(j) * d;
    if (x <= 0.0) break;
    const double base = alpha * x / (1.0 - d);
    const double term = std::exp(static_cast<double>(j) * std::log(base) - std::lgamma(j + 1.0));
    sum += term;
    if (static_cast<double>(j) > peak && term < 1e-18 * sum) break;
    if (sum > 1e300) break;  // off-solution alpha during bracketing; sign is all that matters
  }
  return l + (alpha - 1.0) * l * sum;
}

OmsSolution oms_solve_alpha(const OmsProblem& problem, RiskLevel delta, const SolverConfig& cfg) {
  const double theta = problem.fluctuation;
  const int n = cfg.grid_points > 0 ? cfg.grid_points : 20001;
  const double tol = cfg.bisect_tol > 0.0 ? cfg.bisect_tol : 1e-9;

  if (theta <= 1.0) {
    return {1.0, OmsStrategy{MonotoneGrid({0.0, 1.0}, {problem.low, problem.low})}};
  }
  if (delta.delta >= 1.0) {
    return {std::sqrt(theta), oms_deterministic_strategy(problem)};
  }

  double lo = 1.0 + 1e-9, hi = std::sqrt(theta);
  // phi(1) increases in alpha; phi(1; hi) >= U always, phi(1; lo) < U.
  int iters = 0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    if (++iters > cfg.max_bisect_iters)
      throw std::runtime_error("oms_solve_alpha: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (oms_phi_analytic(mid, delta, problem, 1.0) < problem.high)
      lo = mid;
    else
      hi = mid;
  }
  const double alpha = 0.5 * (lo + hi);

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    values[static_cast<std::size_t>(i)] =
        std::clamp(oms_phi_analytic(alpha, delta, problem, t), problem.low, problem.high);
  }
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  return {alpha, OmsStrategy{MonotoneGrid::uniform(std::move(values))}};
}

double oms_upper_bound_root(const OmsProblem& problem, RiskLevel delta) {
  const double theta = problem.fluctuation;
  if (delta.delta == 0.0) return root_for_pieces(theta, 0.0);
  const double pieces =
      std::max(1.0, floor_guarded((floor_guarded(1.0 / delta.delta) - 1.0) / 2.0));
  return root_for_pieces(theta, pieces);
}

double oms_lower_bound_root(const OmsProblem& problem, RiskLevel delta) {
  const double theta = problem.fluctuation;
  if (delta.delta == 0.0) return root_for_pieces(theta, 0.0);
  const double pieces = std::max(1.0, ceil_guarded(1.0 / delta.delta) - 1.0);
  return root_for_pieces(theta, pieces);
}

std::vector<double> oms_kmax_thresholds(const OmsProblem& problem, RiskLevel delta) {
  if (!(delta.delta > 0.0 && delta.delta < 1.0))
    throw std::invalid_argument("oms_kmax_thresholds: delta must lie strictly in (0, 1)");
  const double k = std::max(1.0, ceil_guarded(1.0 / delta.delta) - 1.0);
  const double r = oms_lower_bound_root(problem, delta);
  std::vector<double> thresholds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    thresholds[i] = 1.0 + (r - 1.0) * std::pow(1.0 + r / k, static_cast<double>(i));
  return thresholds;
}

}  // namespace riskcr
