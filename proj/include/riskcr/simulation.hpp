// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "riskcr/one_max_search.hpp"
#include "riskcr/risk_core.hpp"
#include "riskcr/ski_rental_continuous.hpp"
#include "riskcr/ski_rental_discrete.hpp"

namespace riskcr {

/// Monte Carlo configuration. Statistical assertions require n >= 1000.
struct SimConfig {
  long long samples = 1'000'000;
  std::uint64_t seed = 1;
  int adversary_points = 16;

  void validate() const;  // throws std::invalid_argument
};

/// Empirical vs analytic DCR per adversary decision. stderr_estimate is the
/// largest batch-means standard error of the empirical column, so agreement
/// within a few stderr is the honest acceptance band.
struct SimReport {
  std::vector<double> decisions;
  std::vector<double> empirical_ratios;
  std::vector<double> analytic_ratios;
  double max_abs_gap = 0.0;
  double stderr_estimate = 0.0;

  bool within(double num_stderr) const {
    return max_abs_gap <= num_stderr * stderr_estimate + 1e-12;
  }
};

/// Inverse-transform sampling from a tabulated inverse CDF; reproducible per
/// seed, and per-stream draws are independent of other streams.
std::vector<double> sample_inverse_cdf(const MonotoneGrid& grid, long long n, std::uint64_t seed);

SimReport simulate_csr(const CsrStrategy& strategy, RiskLevel delta, const SimConfig& cfg);
SimReport simulate_dsr(const DiscreteStrategy& strategy, RiskLevel delta, const SimConfig& cfg);
SimReport simulate_oms(const OmsStrategy& strategy, const OmsProblem& problem, RiskLevel delta,
                       const SimConfig& cfg);

}  // namespace riskcr
