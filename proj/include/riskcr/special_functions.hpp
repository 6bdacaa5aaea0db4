// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace riskcr {

/// Branch selector for the Lambert W function.
enum class WBranch { principal, minus_one };

/// Solves w * exp(w) = x on the requested branch.
///
/// principal: defined for x >= -1/e, returns w >= -1.
/// minus_one: defined for x in [-1/e, 0), returns w <= -1.
/// Throws std::domain_error outside the branch domain.
double lambert_w(WBranch branch, double x);

/// Exponential integral Ei(x) = -PV \int_{-x}^\infty e^{-t}/t dt.
/// Throws std::domain_error at x = 0 (logarithmic singularity).
double exp_integral_ei(double x);

/// The constant c > 1 solving 1 + 2c = e^c, equivalently
/// c = -(1 + 2 W_{-1}(-1/(2 sqrt(e)))) / 2 ~= 1.25643.
double constant_c();

}  // namespace riskcr
