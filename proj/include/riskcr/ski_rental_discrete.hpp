// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "riskcr/report.hpp"
#include "riskcr/risk_core.hpp"

namespace riskcr {

/// Randomized strategy for discrete-time ski rental: a probability vector
/// over purchase days 1..B, with integer buying cost B >= 2.
struct DiscreteStrategy {
  int buy_cost = 2;
  std::vector<double> probs;

  void validate() const;  // throws std::invalid_argument
};

/// Cost-ratio matrix: entry (i, j) is the cost ratio when the season lasts i
/// days and the player buys on day j, i.e. (B+j-1)/i for j <= i and 1 for
/// j > i. Rows and columns are 1-based through at().
class CostMatrix {
 public:
  explicit CostMatrix(int buy_cost);
  double at(int i, int j) const;
  int size() const { return b_; }
  /// Row i as an outcome vector indexed by buy day.
  std::vector<double> row(int i) const;

 private:
  int b_;
};

/// CVaR_delta of the cost ratio when the adversary plays season length i,
/// computed by the greedy subpopulation fill over row i of the cost matrix.
/// delta = 1 returns the worst ratio on the strategy's support.
double dsr_dcr_at(const DiscreteStrategy& strategy, int i, RiskLevel delta);

/// Exact DCR: max over the finite adversary set i in 1..B.
DcrReport dsr_dcr(const DiscreteStrategy& strategy, RiskLevel delta);

/// Largest delta for which the closed-form optimum applies:
/// C (1-1/B)^{B-1} / B with C = 1/(1-(1-1/B)^B); equals the smallest
/// probability p_1 of the optimal strategy.
double dsr_analytic_threshold(int B);

struct DsrOptimum {
  double alpha;
  DiscreteStrategy strategy;
};

/// Closed-form optimum for delta <= dsr_analytic_threshold(B):
/// alpha = (C - delta)/(1 - delta), p_i = (C/B)(1-1/B)^{B-i}.
/// Throws std::invalid_argument for delta above the threshold.
DsrOptimum dsr_analytic_optimal(int B, RiskLevel delta);

struct DsrPhaseBounds {
  double improves_below;             // randomization strictly helps below this
  double deterministic_at_or_above;  // buy-at-B is optimal at or above this
};

/// Phase-transition bounds: 1 - c/log(B+1) and 1 - 1/(2 floor(log2 B) + 1).
DsrPhaseBounds dsr_phase_bounds(int B);

/// Numeric minimax solve of min_p max_i dsr_dcr_at(p, i, delta) over the
/// simplex. Each CVaR row is concave in p, so the solver iterates a
/// majorization step: the rows' dual linearizations (valid over-estimators)
/// form an LP over the simplex whose solution can only lower the true
/// objective. Deterministic multistart; returns the best iterate and its
/// exactly evaluated DCR. delta = 1 returns the deterministic optimum.
DsrOptimum dsr_solve_optimal(int B, RiskLevel delta, const SolverConfig& cfg = {});

/// Entropic mirror descent on the same objective with step 1/sqrt(k);
/// secondary solver used to cross-check dsr_solve_optimal.
DsrOptimum dsr_mirror_descent(int B, RiskLevel delta, int iterations = 100000);

}  // namespace riskcr
