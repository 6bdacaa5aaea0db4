// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "riskcr/report.hpp"
#include "riskcr/risk_core.hpp"

namespace riskcr {

/// Randomized strategy for continuous-time ski rental with buying cost 1:
/// the inverse CDF of the purchase time, supported in [0, 1].
struct CsrStrategy {
  MonotoneGrid inverse_cdf;

  /// True when all values lie in [0, 1] and the terminal value is 1 within tol.
  bool valid_strategy(double tol = 1e-6) const;
};

/// Deterministic buy-at-1 strategy (point mass at 1).
CsrStrategy csr_buy_at_one();

/// Inverse CDF of the realized cost s*1[X>s] + (X+1)*1[X<=s] at quantile p.
double csr_cost_inverse_cdf(const CsrStrategy& strategy, double s, double p);

/// CVaR_delta[cost] / min{s, 1} for adversary decision s in (0, 1], with the
/// tail integral evaluated exactly on the piecewise-linear inverse CDF.
double csr_dcr_at(const CsrStrategy& strategy, double s, RiskLevel delta);

/// Ratio curve over the adversary grid (uniform points on (0, 1] plus all
/// strategy support values plus s = 1) and its supremum.
DcrReport csr_dcr(const CsrStrategy& strategy, RiskLevel delta, const SolverConfig& cfg = {});

/// Closed-form suboptimal strategy: inverse CDF
/// F^{-1}(y) = (1 - e^{-c y/(1-delta)}) / (1 - e^{-c/(1-delta)}),
/// tabulated on grid_points nodes. delta = 1 returns the buy-at-1 strategy.
CsrStrategy csr_suboptimal_strategy(RiskLevel delta, int grid_points = 20001);

/// DCR of the closed-form suboptimal strategy: 2 - 1/(e^{c/(1-delta)} - 1),
/// with value 2 at delta = 1.
double csr_suboptimal_dcr(RiskLevel delta);

/// Solves the delay differential equation
///   phi'(t) = [phi(t) - phi(t - (1-delta))] / (alpha (1-delta)),  t > 1-delta,
/// with phi(t) = log(1 + t/((alpha-1)(1-delta))) on [0, 1-delta], by a
/// classical 4th-order one-step method on a uniform grid; delayed values are
/// taken from the exact initial condition where applicable and otherwise
/// linearly interpolated from already-computed nodes. No clamping is applied:
/// phi(1) differs from 1 when alpha is off the optimum.
/// Throws std::invalid_argument when the grid is too coarse
/// (spacing must be < (1-delta)/10).
CsrStrategy csr_solve_dde(double alpha, RiskLevel delta, const SolverConfig& cfg = {});

struct CsrOptimum {
  double alpha_star;
  CsrStrategy strategy;
};

/// Bisects alpha until phi(1) = 1; phi(1) is strictly decreasing in alpha, so
/// phi(1) > 1 raises the bracket and phi(1) < 1 lowers it. delta = 1 returns
/// the deterministic buy-at-1 optimum (alpha = 2).
/// Throws std::runtime_error when no bracket is found within the iteration cap.
CsrOptimum csr_solve_optimal(RiskLevel delta, const SolverConfig& cfg = {});

/// Closed form of the DDE solution for delta <= 1/2 in terms of exponential
/// integrals; matches csr_solve_dde on [0, 1].
double csr_analytic_phi_small_delta(double alpha, RiskLevel delta, double t);

/// max{e/(e-1), 2 - 1/2^{floor(1/(1-delta)) - 1}}; returns 2 at delta = 1.
double csr_lower_bound(RiskLevel delta);

}  // namespace riskcr
