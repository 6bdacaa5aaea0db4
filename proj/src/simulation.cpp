// SPDX-License-Identifier: Apache-2.0
#include "riskcr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskcr/rng.hpp"

namespace riskcr {
namespace {

constexpr int kBatches = 40;

// Batch-means standard error of the empirical CVaR over one stream's samples.
double batch_stderr(const std::vector<double>& samples, RiskLevel delta, Orientation o) {
  const std::size_t n = samples.size();
  const std::size_t per = n / kBatches;
  if (per < 10) return 0.0;
  std::vector<double> estimates;
  estimates.reserve(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    std::vector<double> batch(samples.begin() + static_cast<std::ptrdiff_t>(b * per),
                              samples.begin() + static_cast<std::ptrdiff_t>((b + 1) * per));
    estimates.push_back(cvar_empirical(std::move(batch), delta, o));
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= estimates.size();
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= static_cast<double>(estimates.size() - 1);
  return std::sqrt(var / static_cast<double>(estimates.size()));
}

void finalize(SimReport& report) {
  report.max_abs_gap = 0.0;
  for (std::size_t i = 0; i < report.decisions.size(); ++i) {
    report.max_abs_gap = std::max(
        report.max_abs_gap, std::abs(report.empirical_ratios[i] - report.analytic_ratios[i]));
  }
}

}  // namespace

void SimConfig::validate() const {
  if (samples < 1000)
    throw std::invalid_argument("SimConfig: need at least 1000 samples for statistical output");
  if (adversary_points < 1) throw std::invalid_argument("SimConfig: need at least one decision");
}

std::vector<double> sample_inverse_cdf(const MonotoneGrid& grid, long long n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& x : out) x = grid(rng.next_double());
  return out;
}

SimReport simulate_csr(const CsrStrategy& strategy, RiskLevel delta, const SimConfig& cfg) {
  cfg.validate();
  SimReport report;
  for (int k = 1; k <= cfg.adversary_points; ++k) {
    const double s = static_cast<double>(k) / cfg.adversary_points;
    Xoshiro256 rng(cfg.seed, static_cast<std::uint64_t>(k - 1));
    std::vector<double> costs(static_cast<std::size_t>(cfg.samples));
    for (double& c : costs) {
      const double x = strategy.inverse_cdf(rng.next_double());
      c = x > s ? s : x + 1.0;
    }
    const double denom = std::min(s, 1.0);
    const double empirical = cvar_empirical(costs, delta, Orientation::cost) / denom;
    report.decisions.push_back(s);
    report.empirical_ratios.push_back(empirical);
    report.analytic_ratios.push_back(csr_dcr_at(strategy, s, delta));
    report.stderr_estimate =
        std::max(report.stderr_estimate, batch_stderr(costs, delta, Orientation::cost) / denom);
  }
  finalize(report);
  return report;
}

SimReport simulate_dsr(const DiscreteStrategy& strategy, RiskLevel delta, const SimConfig& cfg) {
  cfg.validate();
  strategy.validate();
  const int b = strategy.buy_cost;
  std::vector<double> cum(strategy.probs.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < cum.size(); ++j) {
    acc += strategy.probs[j];
    cum[j] = acc;
  }
  cum.back() = 1.0;

  SimReport report;
  for (int i = 1; i <= b; ++i) {
    Xoshiro256 rng(cfg.seed, static_cast<std::uint64_t>(i - 1));
    std::vector<double> costs(static_cast<std::size_t>(cfg.samples));
    for (double& c : costs) {
      const double u = rng.next_double();
      const auto day = static_cast<int>(
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin() + 1);
      c = day > i ? static_cast<double>(i) : static_cast<double>(b + day - 1);
    }
    const double empirical = cvar_empirical(costs, delta, Orientation::cost) / i;
    report.decisions.push_back(static_cast<double>(i));
    report.empirical_ratios.push_back(empirical);
    report.analytic_ratios.push_back(dsr_dcr_at(strategy, i, delta));
    report.stderr_estimate =
        std::max(report.stderr_estimate, batch_stderr(costs, delta, Orientation::cost) / i);
  }
  finalize(report);
  return report;
}

SimReport simulate_oms(const OmsStrategy& strategy, const OmsProblem& problem, RiskLevel delta,
                       const SimConfig& cfg) {
  cfg.validate();
  SimReport report;
  for (int k = 1; k <= cfg.adversary_points; ++k) {
    const double v =
        problem.low + (problem.high - problem.low) * static_cast<double>(k) / cfg.adversary_points;
    Xoshiro256 rng(cfg.seed, static_cast<std::uint64_t>(k - 1));
    std::vector<double> rewards(static_cast<std::size_t>(cfg.samples));
    for (double& r : rewards) {
      const double x = strategy.inverse_cdf(rng.next_double());
      r = x > v ? problem.low : x;
    }
    const double cvar = cvar_empirical(rewards, delta, Orientation::reward);
    report.decisions.push_back(v);
    report.empirical_ratios.push_back(v / cvar);
    report.analytic_ratios.push_back(v / oms_reward_cvar_at(strategy, problem, v, delta));
    // Delta method: stderr of v / cvar is v * stderr(cvar) / cvar^2.
    const double se = batch_stderr(rewards, delta, Orientation::reward);
    report.stderr_estimate = std::max(report.stderr_estimate, v * se / (cvar * cvar));
  }
  finalize(report);
  return report;
}

}  // namespace riskcr
