// SPDX-License-Identifier: Apache-2.0
#include "riskcr/risk_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace riskcr {

RiskLevel::RiskLevel(double d) : delta(d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("RiskLevel: delta must lie in [0, 1]");
}

void WeightedOutcomes::validate() const {
  if (outcomes.empty() || outcomes.size() != probs.size())
    throw std::invalid_argument("WeightedOutcomes: sizes must match and be nonzero");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("WeightedOutcomes: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("WeightedOutcomes: probabilities must sum to 1");
}

MonotoneGrid::MonotoneGrid(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size())
    throw std::invalid_argument("MonotoneGrid: need matching node/value vectors of size >= 2");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
    throw std::invalid_argument("MonotoneGrid: nodes must span [0, 1]");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("MonotoneGrid: nodes must be strictly increasing");
    if (values_[i] < values_[i - 1])
      throw std::invalid_argument("MonotoneGrid: values must be nondecreasing");
  }
  const double h = 1.0 / static_cast<double>(nodes_.size() - 1);
  uniform_ = true;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (std::abs(nodes_[i] - static_cast<double>(i) * h) > 1e-15 * (1.0 + static_cast<double>(i))) {
      uniform_ = false;
      break;
    }
  }
  build_prefix();
}

MonotoneGrid MonotoneGrid::uniform(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("MonotoneGrid::uniform: need >= 2 values");
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  return MonotoneGrid(std::move(nodes), std::move(values));
}

void MonotoneGrid::build_prefix() {
  prefix_.resize(nodes_.size());
  prefix_[0] = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    prefix_[i] = prefix_[i - 1] + 0.5 * (values_[i] + values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
}

std::size_t MonotoneGrid::segment_of(double t) const {
  const std::size_t last = nodes_.size() - 2;
  if (uniform_) {
    const double h = 1.0 / static_cast<double>(nodes_.size() - 1);
    const auto idx = static_cast<std::ptrdiff_t>(t / h);
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(last)));
  }
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const auto idx = static_cast<std::size_t>(it - nodes_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, last);
}

double MonotoneGrid::operator()(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const std::size_t i = segment_of(t);
  const double w = (t - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double MonotoneGrid::cdf(double x) const {
  if (x < values_.front()) return 0.0;
  if (x >= values_.back()) return 1.0;
  // First index with value > x; its predecessor is the last index <= x.
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  const auto k = static_cast<std::size_t>(it - values_.begin());
  // k >= 1 because x >= values_.front(), and k <= size-1 because x < back.
  const double v0 = values_[k - 1], v1 = values_[k];
  const double t0 = nodes_[k - 1], t1 = nodes_[k];
  return t0 + (x - v0) / (v1 - v0) * (t1 - t0);
}

double MonotoneGrid::integral(double a, double b) const {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (b <= a) return 0.0;
  const auto partial = [this](double t) {
    const std::size_t i = segment_of(t);
    return prefix_[i] + 0.5 * (values_[i] + (*this)(t)) * (t - nodes_[i]);
  };
  return partial(b) - partial(a);
}

double cvar_discrete(const WeightedOutcomes& w, RiskLevel delta, Orientation o) {
  w.validate();
  const std::size_t n = w.outcomes.size();

  if (delta.delta >= 1.0) {
    // esssup / essinf convention over the support
    double best = o == Orientation::cost ? -std::numeric_limits<double>::infinity()
                                         : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (w.probs[j] <= 0.0) continue;
      best = o == Orientation::cost ? std::max(best, w.outcomes[j]) : std::min(best, w.outcomes[j]);
    }
    return best;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (o == Orientation::cost) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w.outcomes[a] > w.outcomes[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w.outcomes[a] < w.outcomes[b]; });
  }

  const double budget = 1.0 - delta.delta;
  double remaining = budget;
  double acc = 0.0;
  for (std::size_t j : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(w.probs[j], remaining);
    acc += take * w.outcomes[j];
    remaining -= take;
  }
  return acc / budget;
}

double cvar_from_inverse_cdf(const MonotoneGrid& phi, RiskLevel delta, Orientation o) {
  const double d = delta.delta;
  if (d >= 1.0) return o == Orientation::cost ? phi.max_value() : phi.min_value();
  if (o == Orientation::cost) return phi.integral(d, 1.0) / (1.0 - d);
  return phi.integral(0.0, 1.0 - d) / (1.0 - d);
}

double cvar_empirical(std::vector<double> samples, RiskLevel delta, Orientation o) {
  if (samples.empty()) throw std::invalid_argument("cvar_empirical: empty sample");
  const std::size_t n = samples.size();

  if (delta.delta >= 1.0) {
    return o == Orientation::cost ? *std::max_element(samples.begin(), samples.end())
                                  : *std::min_element(samples.begin(), samples.end());
  }

  const double mass = (1.0 - delta.delta) * static_cast<double>(n);
  auto full = static_cast<std::size_t>(mass);
  double frac = mass - static_cast<double>(full);
  if (frac < 1e-9 * static_cast<double>(n) && full > 0) frac = 0.0;
  full = std::min(full, n);

  // Move the `full` worst samples to the back (cost) or keep orientation by
  // comparator; the boundary sample is the worst of the remainder.
  const auto worse = [&](double a, double b) {
    return o == Orientation::cost ? a < b : a > b;
  };
  double acc = 0.0;
  if (full > 0) {
    std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n - full),
                     samples.end(), worse);
    for (std::size_t i = n - full; i < n; ++i) acc += samples[i];
  }
  if (frac > 0.0) {
    double boundary;
    if (full == 0) {
      boundary = o == Orientation::cost ? *std::max_element(samples.begin(), samples.end())
                                        : *std::min_element(samples.begin(), samples.end());
    } else {
      const auto head_end = samples.begin() + static_cast<std::ptrdiff_t>(n - full);
      boundary = *std::max_element(samples.begin(), head_end, worse);
    }
    acc += frac * boundary;
  }
  return acc / mass;
}

}  // namespace riskcr
