// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace riskcr {

/// Risk level delta in [0, 1]. delta = 0 recovers the expectation; delta = 1
/// the essential supremum (cost) or infimum (reward).
struct RiskLevel {
  double delta;
  explicit RiskLevel(double d);
};

/// Tail orientation. cost averages the worst (largest) (1-delta) fraction of
/// outcomes; reward averages the worst (smallest) fraction.
enum class Orientation { cost, reward };

/// Finite distribution over real outcomes.
struct WeightedOutcomes {
  std::vector<double> outcomes;
  std::vector<double> probs;

  /// Throws std::invalid_argument on mismatched sizes, negative
  /// probabilities, or total mass off 1 by more than 1e-12.
  void validate() const;
};

/// Piecewise-linear nondecreasing function tabulated over [0, 1]. Nodes are
/// strictly increasing with first node 0 and last node 1; evaluation between
/// nodes is linear interpolation. Used as an inverse CDF (quantile function)
/// throughout, so the generalized inverse cdf(x) = sup{t : value(t) <= x}
/// recovers the CDF of the distribution the grid represents.
class MonotoneGrid {
 public:
  MonotoneGrid(std::vector<double> nodes, std::vector<double> values);

  /// Grid on equally spaced nodes 0, 1/(n-1), ..., 1.
  static MonotoneGrid uniform(std::vector<double> values);

  /// Linear interpolation; t is clamped into [0, 1].
  double operator()(double t) const;

  /// Generalized inverse: sup{t in [0,1] : value(t) <= x}, with sup of the
  /// empty set taken as 0.
  double cdf(double x) const;

  /// Exact integral of the interpolant over [a, b] (clamped into [0, 1]).
  double integral(double a, double b) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[i] = integral over [0, nodes_[i]]
  bool uniform_ = false;

  std::size_t segment_of(double t) const;
  void build_prefix();
};

/// CVaR of a finite distribution, computed by the greedy subpopulation fill:
/// probability mass 1-delta is allocated to outcomes from the worst down
/// (ties broken in ascending index order) and the tail average returned.
/// delta = 1 returns the max (cost) or min (reward) outcome on the support.
double cvar_discrete(const WeightedOutcomes& w, RiskLevel delta, Orientation o);

/// CVaR from a tabulated inverse CDF: cost integrates the top tail
/// [delta, 1], reward the bottom tail [0, 1-delta]; exact on the
/// piecewise-linear interpolant. delta = 1 returns the terminal (cost) or
/// initial (reward) value.
double cvar_from_inverse_cdf(const MonotoneGrid& phi, RiskLevel delta, Orientation o);

/// Empirical CVaR of a sample: averages the ceil((1-delta) n) worst samples
/// with the boundary sample fractionally weighted so the tail mass is
/// exactly 1-delta. Throws std::invalid_argument on empty input.
double cvar_empirical(std::vector<double> samples, RiskLevel delta, Orientation o);

}  // namespace riskcr
