// SPDX-License-Identifier: Apache-2.0
#include "riskcr/ski_rental_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "riskcr/special_functions.hpp"

namespace riskcr {
namespace {

constexpr double kEulerRatio = 1.5819767068693265;  // e/(e-1)

int effective_grid_points(const SolverConfig& cfg, double delta) {
  const double tau = 1.0 - delta;
  // Resolution must scale with the inverse delay; explicit values below the
  // floor are rejected by the caller's spacing check rather than bumped.
  if (cfg.grid_points > 0) return cfg.grid_points;
  return std::max(20000, static_cast<int>(std::ceil(200.0 / tau)));
}

double initial_condition(double t, double alpha, double tau) {
  return std::log1p(t / ((alpha - 1.0) * tau));
}

}  // namespace

bool CsrStrategy::valid_strategy(double tol) const {
  return inverse_cdf.min_value() >= -tol && inverse_cdf.max_value() <= 1.0 + tol &&
         std::abs(inverse_cdf.values().back() - 1.0) <= tol;
}

CsrStrategy csr_buy_at_one() {
  return CsrStrategy{MonotoneGrid({0.0, 1.0}, {1.0, 1.0})};
}

double csr_cost_inverse_cdf(const CsrStrategy& strategy, double s, double p) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("csr_cost_inverse_cdf: s must lie in (0, 1]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("csr_cost_inverse_cdf: p must lie in [0, 1]");
  const double fs = strategy.inverse_cdf.cdf(s);
  if (p <= 1.0 - fs) return s;
  return 1.0 + strategy.inverse_cdf(p + fs - 1.0);
}

double csr_dcr_at(const CsrStrategy& strategy, double s, RiskLevel delta) {
  if (!(s > 0.0)) throw std::invalid_argument("csr_dcr_at: s must be positive");
  if (s > 1.0) throw std::invalid_argument("csr_dcr_at: s must lie in (0, 1]");
  const MonotoneGrid& phi = strategy.inverse_cdf;
  const double d = delta.delta;
  const double y = phi.cdf(s);

  if (d >= 1.0) {
    // Worst-case cost over the support.
    double worst = y < 1.0 ? s : -1.0;
    if (y > 0.0) worst = std::max(worst, 1.0 + phi(y));
    return worst / s;
  }

  double cvar;
  if (y <= 1.0 - d) {
    cvar = ((1.0 - d - y) * s + y + phi.integral(0.0, y)) / (1.0 - d);
  } else {
    cvar = ((1.0 - d) + phi.integral(y - (1.0 - d), y)) / (1.0 - d);
  }
  return cvar / s;
}

DcrReport csr_dcr(const CsrStrategy& strategy, RiskLevel delta, const SolverConfig& cfg) {
  const int m = std::max(2, cfg.adversary_grid_points);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(m) + strategy.inverse_cdf.size() + 1);
  for (int j = 1; j <= m; ++j) grid.push_back(static_cast<double>(j) / static_cast<double>(m));
  for (double v : strategy.inverse_cdf.values())
    if (v > 0.0 && v <= 1.0) grid.push_back(v);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  DcrReport report;
  report.decisions = grid;
  report.ratios.reserve(grid.size());
  report.sup_ratio = -1.0;
  for (double s : grid) {
    const double r = csr_dcr_at(strategy, s, delta);
    report.ratios.push_back(r);
    if (r > report.sup_ratio) {
      report.sup_ratio = r;
      report.argmax_decision = s;
    }
  }
  return report;
}

CsrStrategy csr_suboptimal_strategy(RiskLevel delta, int grid_points) {
  if (delta.delta >= 1.0) return csr_buy_at_one();
  const int n = std::max(2, grid_points);
  const double c = constant_c();
  const double rate = c / (1.0 - delta.delta);
  const double denom = -std::expm1(-rate);  // 1 - e^{-c/(1-delta)}
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double y = static_cast<double>(i) / static_cast<double>(n - 1);
    values[static_cast<std::size_t>(i)] = -std::expm1(-rate * y) / denom;
  }
  values.back() = 1.0;
  return CsrStrategy{MonotoneGrid::uniform(std::move(values))};
}

double csr_suboptimal_dcr(RiskLevel delta) {
  if (delta.delta >= 1.0) return 2.0;
  const double c = constant_c();
  return 2.0 - 1.0 / std::expm1(c / (1.0 - delta.delta));
}

CsrStrategy csr_solve_dde(double alpha, RiskLevel delta, const SolverConfig& cfg) {
  if (!(alpha > 1.0)) throw std::invalid_argument("csr_solve_dde: alpha must exceed 1");
  if (delta.delta >= 1.0) throw std::invalid_argument("csr_solve_dde: delta must be < 1");
  const double tau = 1.0 - delta.delta;
  const int n = effective_grid_points(cfg, delta.delta);
  const double h = 1.0 / static_cast<double>(n);
  if (h >= tau / 10.0) throw std::invalid_argument("csr_solve_dde: grid too coarse for the delay");

  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) * h;
  nodes.back() = 1.0;

  // History lookup: exact initial condition up to tau, otherwise linear
  // interpolation of already-computed nodes.
  const auto history = [&](double t) {
    if (t <= tau) return initial_condition(t, alpha, tau);
    const double x = t / h;
    auto i = static_cast<std::size_t>(x);
    i = std::min(i, values.size() - 2);
    const double w = x - static_cast<double>(i);
    return values[i] + w * (values[i + 1] - values[i]);
  };
  const double a = 1.0 / (alpha * tau);
  const auto deriv = [&](double t, double v) { return a * (v - history(t - tau)); };
  const auto rk4 = [&](double t, double v, double step) {
    const double k1 = deriv(t, v);
    const double k2 = deriv(t + 0.5 * step, v + 0.5 * step * k1);
    const double k3 = deriv(t + 0.5 * step, v + 0.5 * step * k2);
    const double k4 = deriv(t + step, v + step * k3);
    return v + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  int i = 0;
  for (; i <= n && nodes[static_cast<std::size_t>(i)] <= tau; ++i)
    values[static_cast<std::size_t>(i)] = initial_condition(nodes[static_cast<std::size_t>(i)], alpha, tau);
  if (i <= n) {
    // Partial step from tau to the first node beyond it, then full steps.
    double v = rk4(tau, initial_condition(tau, alpha, tau), nodes[static_cast<std::size_t>(i)] - tau);
    values[static_cast<std::size_t>(i)] = v;
    for (++i; i <= n; ++i) {
      v = rk4(nodes[static_cast<std::size_t>(i) - 1], v, h);
      values[static_cast<std::size_t>(i)] = v;
    }
  }
  // Guard against roundoff-level dips; the solution is nondecreasing.
  for (std::size_t k = 1; k < values.size(); ++k)
    values[k] = std::max(values[k], values[k - 1]);
  return CsrStrategy{MonotoneGrid(std::move(nodes), std::move(values))};
}

CsrOptimum csr_solve_optimal(RiskLevel delta, const SolverConfig& cfg) {
  if (delta.delta >= 1.0) return {2.0, csr_buy_at_one()};
  if (cfg.grid_points > 0 &&
      static_cast<double>(cfg.grid_points) < 100.0 / (1.0 - delta.delta))
    throw std::invalid_argument("csr_solve_optimal: grid_points must be >= 100/(1-delta)");
  const double tol = cfg.bisect_tol > 0.0 ? cfg.bisect_tol : 1e-8;

  const auto terminal = [&](double alpha) {
    return csr_solve_dde(alpha, delta, cfg).inverse_cdf.values().back() - 1.0;
  };

  double lo = kEulerRatio, hi = 2.0;
  double glo = terminal(lo), ghi = terminal(hi);
  if (!(glo >= 0.0 && ghi <= 0.0)) {
    lo = 1.01;
    hi = 2.5;
    glo = terminal(lo);
    ghi = terminal(hi);
    if (!(glo >= 0.0 && ghi <= 0.0))
      throw std::runtime_error("csr_solve_optimal: could not bracket phi(1) = 1");
  }

  int iters = 0;
  while (hi - lo > tol) {
    if (++iters > cfg.max_bisect_iters)
      throw std::runtime_error("csr_solve_optimal: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    // phi(1) decreases in alpha: positive residual means alpha is too small.
    if (terminal(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double alpha_star = 0.5 * (lo + hi);
  const CsrStrategy raw = csr_solve_dde(alpha_star, delta, cfg);

  // Augment the tabulation with quadratically graded nodes inside the
  // closed-form initial region. The DCR at a decision s amplifies the
  // inverse-CDF interpolation error by 1/((1-delta) s), so near t = 0 the
  // spacing must shrink with t; the extra nodes are exact formula values.
  const double tau = 1.0 - delta.delta;
  const int extra = 4000;
  std::vector<double> nodes = raw.inverse_cdf.nodes();
  std::vector<double> values = raw.inverse_cdf.values();
  nodes.reserve(nodes.size() + extra);
  values.reserve(values.size() + extra);
  for (int k = 1; k < extra; ++k) {
    const double t = tau * std::pow(static_cast<double>(k) / extra, 2.0);
    nodes.push_back(t);
    values.push_back(initial_condition(t, alpha_star, tau));
  }
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::vector<double> merged_nodes, merged_values;
  merged_nodes.reserve(order.size());
  merged_values.reserve(order.size());
  for (std::size_t i : order) {
    if (!merged_nodes.empty() && nodes[i] - merged_nodes.back() < 1e-13) continue;
    merged_nodes.push_back(nodes[i]);
    merged_values.push_back(std::clamp(values[i], merged_values.empty() ? 0.0 : merged_values.back(), 1.0));
  }
  merged_nodes.back() = 1.0;
  return {alpha_star, CsrStrategy{MonotoneGrid(std::move(merged_nodes), std::move(merged_values))}};
}

double csr_analytic_phi_small_delta(double alpha, RiskLevel delta, double t) {
  if (delta.delta > 0.5) throw std::invalid_argument("csr_analytic_phi_small_delta: delta must be <= 1/2");
  if (!(alpha > 1.0)) throw std::invalid_argument("csr_analytic_phi_small_delta: alpha must exceed 1");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("csr_analytic_phi_small_delta: t must lie in [0, 1]");
  const double tau = 1.0 - delta.delta;
  if (t <= tau) return initial_condition(t, alpha, tau);

  const double e = std::exp(1.0);
  const double ei_a = exp_integral_ei(1.0 / alpha - 1.0);
  const double ei_b = exp_integral_ei(((2.0 - alpha) * tau - t) / (alpha * tau));
  const double bracket = e * ei_a - e * ei_b + std::exp(1.0 / alpha) * std::log(alpha / (alpha - 1.0));
  return std::exp(-(2.0 * tau - t) / (alpha * tau)) * bracket +
         std::log1p((t - tau) / ((alpha - 1.0) * tau));
}

double csr_lower_bound(RiskLevel delta) {
  if (delta.delta >= 1.0) return 2.0;  // deterministic case by convention
  const double k = std::floor(1.0 / (1.0 - delta.delta) + 1e-12) - 1.0;
  return std::max(kEulerRatio, 2.0 - std::pow(2.0, -k));
}

}  // namespace riskcr
