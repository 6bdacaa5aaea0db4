// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace riskcr {

/// Dense linear program in the form
///   minimize c^T x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
struct LpProblem {
  std::vector<double> c;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
};

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

/// Two-phase primal simplex with Bland's rule (deterministic, cycle-free).
/// Intended for the small dense master problems used by the solvers.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace riskcr
