// SPDX-License-Identifier: Apache-2.0
#include "riskcr/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace riskcr {
namespace {

// Halley refinement of w * e^w = x from an initial guess w.
double halley(double w, double x) {
  for (int it = 0; it < 80; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;  // branch point, nothing to refine
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double w0_initial_guess(double x) {
  if (x < -0.25) {
    // Series about the branch point in p = sqrt(2(1 + e x)).
    const double p = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  }
  if (x < 2.0) return std::log1p(x);
  const double l = std::log(x);
  const double ll = std::log(l);
  return l - ll + ll / l;
}

double wm1_initial_guess(double x) {
  if (x < -0.27) {
    const double p = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    return -1.0 - p * (1.0 + p / 3.0);
  }
  // Asymptotics toward 0-: W_{-1}(x) ~ log(-x) - log(-log(-x)).
  const double l = std::log(-x);
  return l - std::log(-l);
}

}  // namespace

double lambert_w(WBranch branch, double x) {
  if (!std::isfinite(x)) throw std::domain_error("lambert_w: non-finite argument");
  const double neg_inv_e = -std::exp(-1.0);
  if (x < neg_inv_e) {
    if (neg_inv_e - x <= 1e-14) return -1.0;  // branch point up to roundoff
    throw std::domain_error("lambert_w: argument below -1/e");
  }
  if (x == neg_inv_e) return -1.0;

  if (branch == WBranch::principal) {
    if (x == 0.0) return 0.0;
    return halley(w0_initial_guess(x), x);
  }
  if (x >= 0.0) throw std::domain_error("lambert_w: minus_one branch needs x in [-1/e, 0)");
  return halley(wm1_initial_guess(x), x);
}

double exp_integral_ei(double x) {
  if (x == 0.0) throw std::domain_error("exp_integral_ei: x = 0");
  constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

  if (x > 40.0) {
    // Asymptotic series e^x/x * sum_k k!/x^k, truncated at the smallest term.
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double next = term * k / x;
      if (next >= term) break;
      term = next;
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::exp(x) / x * sum;
  }

  if (x >= -4.0) {
    // Power series Ei(x) = gamma + log|x| + sum_n x^n/(n n!).
    // Safe from harmful cancellation for x >= -4.
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 400; ++n) {
      term *= x / n;
      sum += term / n;
      if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return kEulerGamma + std::log(std::abs(x)) + sum;
  }

  // x < -4: continued fraction for E1(z), z = -x, via modified Lentz.
  // Ei(x) = -E1(-x) for x < 0.
  const double z = -x;
  const double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return -std::exp(-z) * h;
}

double constant_c() {
  const double arg = -1.0 / (2.0 * std::sqrt(std::exp(1.0)));
  return -(1.0 + 2.0 * lambert_w(WBranch::minus_one, arg)) / 2.0;
}

}  // namespace riskcr
