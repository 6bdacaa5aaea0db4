// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace riskcr {

/// Per-adversary-decision ratio curve together with its supremum.
struct DcrReport {
  std::vector<double> decisions;
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  double argmax_decision = 0.0;
};

/// Deterministic solver knobs. Zero values select per-solver defaults.
struct SolverConfig {
  int grid_points = 0;
  double bisect_tol = 0.0;
  int max_bisect_iters = 200;
  int adversary_grid_points = 2000;
};

}  // namespace riskcr
