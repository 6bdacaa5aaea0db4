// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "riskcr/report.hpp"
#include "riskcr/risk_core.hpp"

namespace riskcr {

/// One-max search instance: prices arrive in [L, U], theta = U/L.
struct OmsProblem {
  double low;
  double high;
  double fluctuation;

  OmsProblem(double l, double u);
};

/// Random threshold strategy: inverse CDF of the threshold, values in [L, U].
struct OmsStrategy {
  MonotoneGrid inverse_cdf;
};

/// Deterministic sqrt(LU) threshold strategy.
OmsStrategy oms_deterministic_strategy(const OmsProblem& problem);

/// Reward CVaR when the adversary's maximal price is v: L if F_X(v) <= delta,
/// else [(1-F_X(v)) L + int_0^{F_X(v)-delta} F_X^{-1}] / (1-delta), with the
/// integral exact on the piecewise-linear grid.
double oms_reward_cvar_at(const OmsStrategy& strategy, const OmsProblem& problem, double v,
                          RiskLevel delta);

/// Ratio curve v / oms_reward_cvar_at(v) over a v-grid (uniform on [L, U]
/// plus strategy support values plus U) and its supremum.
DcrReport oms_dcr(const OmsStrategy& strategy, const OmsProblem& problem, RiskLevel delta,
                  const SolverConfig& cfg = {});

/// Piecewise-polynomial inverse CDF
///   phi(t) = L + (alpha-1) L sum_j alpha^j ([t - j delta]^+)^j / ((1-delta)^j j!),
/// which collapses to L + (alpha-1) L e^{alpha t} at delta = 0. Terms are
/// evaluated in log space to keep high-order factorials stable.
double oms_phi_analytic(double alpha, RiskLevel delta, const OmsProblem& problem, double t);

struct OmsSolution {
  double alpha;
  OmsStrategy strategy;
};

/// Chooses alpha so that phi(1) = U (phi(1) is strictly increasing in alpha)
/// by bisection on [1+1e-9, sqrt(theta)] and tabulates the strategy.
/// delta = 1 returns the deterministic sqrt(LU) threshold with alpha =
/// sqrt(theta); theta = 1 returns alpha = 1.
OmsSolution oms_solve_alpha(const OmsProblem& problem, RiskLevel delta,
                            const SolverConfig& cfg = {});

/// Unique positive root of (r-1)(1 + r/n)^n = theta - 1 with
/// n = max{1, floor((floor(1/delta) - 1)/2)}; delta = 0 uses the limit form
/// (r-1)e^r = theta - 1.
double oms_upper_bound_root(const OmsProblem& problem, RiskLevel delta);

/// Same root equation with n = max{1, ceil(1/delta) - 1}.
double oms_lower_bound_root(const OmsProblem& problem, RiskLevel delta);

/// The k increasing price thresholds p_i = 1 + (r-1)(1 + r/k)^{i-1} (L
/// normalized to 1), k = max{1, ceil(1/delta) - 1}, r the lower-bound root.
/// Defined for delta strictly inside (0, 1).
std::vector<double> oms_kmax_thresholds(const OmsProblem& problem, RiskLevel delta);

}  // namespace riskcr
