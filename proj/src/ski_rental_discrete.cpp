// SPDX-License-Identifier: Apache-2.0
#include "riskcr/ski_rental_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "riskcr/simplex.hpp"
#include "riskcr/special_functions.hpp"

namespace riskcr {
namespace {

// Fill order for row i, best coefficient first: j = i, i-1, ..., 1, then
// j = i+1, ..., B (all at coefficient 1).
std::vector<int> fill_order(int b, int i) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(b));
  for (int j = i; j >= 1; --j) order.push_back(j);
  for (int j = i + 1; j <= b; ++j) order.push_back(j);
  return order;
}

struct RowDual {
  std::vector<double> u;  // multipliers on q <= p
  double v = 0.0;         // multiplier on the budget constraint
  double value = 0.0;     // greedy objective value u^T p + budget * v
};

// Greedy fill of row i with budget 1-delta; returns the LP dual certificate,
// which doubles as a linear over-estimator of the concave row value.
RowDual row_dual(const CostMatrix& m, const std::vector<double>& p, int i, double budget) {
  const int b = m.size();
  RowDual d;
  d.u.assign(static_cast<std::size_t>(b), 0.0);
  double remaining = budget;
  double marginal = 1.0;
  for (int j : fill_order(b, i)) {
    const double pj = p[static_cast<std::size_t>(j - 1)];
    const double take = std::min(pj, remaining);
    remaining -= take;
    marginal = m.at(i, j);
    if (remaining <= 1e-15) break;
  }
  d.v = marginal;
  d.value = budget * d.v;
  for (int j = 1; j <= b; ++j) {
    const double excess = m.at(i, j) - d.v;
    if (excess > 0.0) {
      d.u[static_cast<std::size_t>(j - 1)] = excess;
      d.value += excess * p[static_cast<std::size_t>(j - 1)];
    }
  }
  return d;
}

double splitmix_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

DiscreteStrategy point_mass_at_b(int b) {
  DiscreteStrategy s{b, std::vector<double>(static_cast<std::size_t>(b), 0.0)};
  s.probs.back() = 1.0;
  return s;
}

}  // namespace

void DiscreteStrategy::validate() const {
  if (buy_cost < 2) throw std::invalid_argument("DiscreteStrategy: buy cost must be >= 2");
  if (probs.size() != static_cast<std::size_t>(buy_cost))
    throw std::invalid_argument("DiscreteStrategy: need one probability per day 1..B");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("DiscreteStrategy: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteStrategy: probabilities must sum to 1");
}

CostMatrix::CostMatrix(int buy_cost) : b_(buy_cost) {
  if (buy_cost < 2) throw std::invalid_argument("CostMatrix: buy cost must be >= 2");
}

double CostMatrix::at(int i, int j) const {
  if (i < 1 || i > b_ || j < 1 || j > b_) throw std::out_of_range("CostMatrix::at");
  if (j > i) return 1.0;
  return static_cast<double>(b_ + j - 1) / static_cast<double>(i);
}

std::vector<double> CostMatrix::row(int i) const {
  std::vector<double> r(static_cast<std::size_t>(b_));
  for (int j = 1; j <= b_; ++j) r[static_cast<std::size_t>(j - 1)] = at(i, j);
  return r;
}

double dsr_dcr_at(const DiscreteStrategy& strategy, int i, RiskLevel delta) {
  strategy.validate();
  const int b = strategy.buy_cost;
  if (i < 1 || i > b) throw std::invalid_argument("dsr_dcr_at: adversary decision out of range");
  const CostMatrix m(b);
  // Row coefficients are already cost ratios, so this is exactly the greedy
  // CVaR of the ratio; ties within the coefficient-1 block resolve in
  // ascending index order, matching the fill order i, i-1, ..., 1, i+1, .., B.
  return cvar_discrete(WeightedOutcomes{m.row(i), strategy.probs}, delta, Orientation::cost);
}

DcrReport dsr_dcr(const DiscreteStrategy& strategy, RiskLevel delta) {
  strategy.validate();
  DcrReport report;
  report.sup_ratio = -1.0;
  for (int i = 1; i <= strategy.buy_cost; ++i) {
    const double r = dsr_dcr_at(strategy, i, delta);
    report.decisions.push_back(static_cast<double>(i));
    report.ratios.push_back(r);
    if (r > report.sup_ratio) {
      report.sup_ratio = r;
      report.argmax_decision = static_cast<double>(i);
    }
  }
  return report;
}

double dsr_analytic_threshold(int B) {
  if (B < 2) throw std::invalid_argument("dsr_analytic_threshold: B must be >= 2");
  const double q = 1.0 - 1.0 / static_cast<double>(B);
  const double c0 = 1.0 / (1.0 - std::pow(q, B));
  return c0 * std::pow(q, B - 1) / static_cast<double>(B);
}

DsrOptimum dsr_analytic_optimal(int B, RiskLevel delta) {
  const double threshold = dsr_analytic_threshold(B);
  if (delta.delta > threshold + 1e-12)
    throw std::invalid_argument("dsr_analytic_optimal: delta above the closed-form threshold");
  const double q = 1.0 - 1.0 / static_cast<double>(B);
  const double c0 = 1.0 / (1.0 - std::pow(q, B));
  DiscreteStrategy s{B, std::vector<double>(static_cast<std::size_t>(B))};
  double total = 0.0;
  for (int i = 1; i <= B; ++i) {
    s.probs[static_cast<std::size_t>(i - 1)] = c0 / static_cast<double>(B) * std::pow(q, B - i);
    total += s.probs[static_cast<std::size_t>(i - 1)];
  }
  for (double& p : s.probs) p /= total;  // analytic mass is 1; renormalize roundoff
  const double alpha = (c0 - delta.delta) / (1.0 - delta.delta);
  return {alpha, std::move(s)};
}

DsrPhaseBounds dsr_phase_bounds(int B) {
  if (B < 2) throw std::invalid_argument("dsr_phase_bounds: B must be >= 2");
  int floor_log2 = 0;
  while ((std::int64_t{1} << (floor_log2 + 1)) <= B) ++floor_log2;
  DsrPhaseBounds bounds;
  bounds.improves_below = 1.0 - constant_c() / std::log(static_cast<double>(B) + 1.0);
  bounds.deterministic_at_or_above = 1.0 - 1.0 / (2.0 * floor_log2 + 1.0);
  return bounds;
}

DsrOptimum dsr_solve_optimal(int B, RiskLevel delta, const SolverConfig& cfg) {
  if (B < 2) throw std::invalid_argument("dsr_solve_optimal: B must be >= 2");
  if (delta.delta >= 1.0) {
    DiscreteStrategy det = point_mass_at_b(B);
    return {dsr_dcr(det, delta).sup_ratio, std::move(det)};
  }
  const double budget = 1.0 - delta.delta;
  const double tol = cfg.bisect_tol > 0.0 ? cfg.bisect_tol : 1e-9;
  const CostMatrix m(B);
  const auto nb = static_cast<std::size_t>(B);

  const auto evaluate = [&](const std::vector<double>& p) {
    double worst = 0.0;
    for (int i = 1; i <= B; ++i)
      worst = std::max(worst, row_dual(m, p, i, budget).value / budget);
    return worst;
  };

  // Deterministic multistart: closed-form candidate, uniform, buy-at-B, the
  // continuous-time closed-form strategy discretized to days, and a few
  // seeded Dirichlet draws.
  std::vector<std::vector<double>> starts;
  starts.push_back(dsr_analytic_optimal(B, RiskLevel(0.0)).strategy.probs);
  starts.emplace_back(nb, 1.0 / static_cast<double>(B));
  starts.push_back(point_mass_at_b(B).probs);
  {
    const double c = constant_c();
    const double rate = c / budget;
    const auto cdf = [&](double x) {
      if (x >= 1.0) return 1.0;  // exact endpoint; log1p underflows for large rates
      return -budget / c * std::log1p(std::expm1(-rate) * x);
    };
    std::vector<double> p(nb);
    double total = 0.0;
    bool finite = true;
    for (int i = 1; i <= B; ++i) {
      const double mass = cdf(static_cast<double>(i) / B) - cdf(static_cast<double>(i - 1) / B);
      finite = finite && std::isfinite(mass) && mass >= 0.0;
      p[static_cast<std::size_t>(i - 1)] = mass;
      total += mass;
    }
    if (finite && total > 0.0) {
      for (double& v : p) v /= total;
      starts.push_back(std::move(p));
    }
  }
  std::uint64_t rng_state = 0xD5ULL ^ (static_cast<std::uint64_t>(B) << 32) ^
                            static_cast<std::uint64_t>(delta.delta * 1e9);
  for (int k = 0; k < 4; ++k) {
    std::vector<double> p(nb);
    double total = 0.0;
    for (auto& v : p) {
      v = -std::log(1.0 - splitmix_next(rng_state));
      total += v;
    }
    for (double& v : p) v /= total;
    starts.push_back(std::move(p));
  }

  std::vector<double> best_p = starts.front();
  double best_f = evaluate(best_p);

  for (const auto& start : starts) {
    std::vector<double> p = start;
    double f = evaluate(p);
    if (f < best_f) {
      best_f = f;
      best_p = p;
    }
    for (int iter = 0; iter < 120; ++iter) {
      // Majorization LP: variables (p', z), minimize z subject to each row's
      // dual linearization bounding z from below, p' on the simplex.
      LpProblem lp;
      lp.c.assign(nb + 1, 0.0);
      lp.c.back() = 1.0;
      for (int i = 1; i <= B; ++i) {
        const RowDual d = row_dual(m, p, i, budget);
        std::vector<double> row(nb + 1, 0.0);
        for (std::size_t j = 0; j < nb; ++j) row[j] = d.u[j] / budget;
        row.back() = -1.0;
        lp.a_ub.push_back(std::move(row));
        lp.b_ub.push_back(-d.v);
      }
      std::vector<double> eq(nb + 1, 1.0);
      eq.back() = 0.0;
      lp.a_eq.push_back(std::move(eq));
      lp.b_eq.push_back(1.0);

      const LpSolution sol = solve_lp(lp);
      if (!sol.feasible) break;
      std::vector<double> p_next(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(nb));
      double total = 0.0;
      for (double& v : p_next) {
        v = std::max(v, 0.0);
        total += v;
      }
      for (double& v : p_next) v /= total;
      const double f_next = evaluate(p_next);
      if (f_next < best_f) {
        best_f = f_next;
        best_p = p_next;
      }
      if (f_next >= f - tol * 1e-3) break;
      p = std::move(p_next);
      f = f_next;
    }
  }

  DiscreteStrategy s{B, std::move(best_p)};
  return {dsr_dcr(s, delta).sup_ratio, std::move(s)};
}

DsrOptimum dsr_mirror_descent(int B, RiskLevel delta, int iterations) {
  if (B < 2) throw std::invalid_argument("dsr_mirror_descent: B must be >= 2");
  if (delta.delta >= 1.0) {
    DiscreteStrategy det = point_mass_at_b(B);
    return {dsr_dcr(det, delta).sup_ratio, std::move(det)};
  }
  const double budget = 1.0 - delta.delta;
  const CostMatrix m(B);
  const auto nb = static_cast<std::size_t>(B);

  std::vector<double> p(nb, 1.0 / static_cast<double>(B));
  std::vector<double> best_p = p;
  double best_f = 0.0;
  for (int i = 1; i <= B; ++i) best_f = std::max(best_f, row_dual(m, p, i, budget).value / budget);

  for (int k = 1; k <= iterations; ++k) {
    double worst = -1.0;
    RowDual active_dual;
    for (int i = 1; i <= B; ++i) {
      RowDual d = row_dual(m, p, i, budget);
      if (d.value > worst) {
        worst = d.value;
        active_dual = std::move(d);
      }
    }
    const double f = worst / budget;
    if (f < best_f) {
      best_f = f;
      best_p = p;
    }
    const double step = 0.5 / std::sqrt(static_cast<double>(k));
    double total = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      p[j] *= std::exp(-step * active_dual.u[j] / budget);
      total += p[j];
    }
    for (double& v : p) v /= total;
  }

  DiscreteStrategy s{B, std::move(best_p)};
  return {dsr_dcr(s, delta).sup_ratio, std::move(s)};
}

}  // namespace riskcr
