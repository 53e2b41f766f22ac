// Copyright 2026 The wstl-explain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wstl/core/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wstl/errors.hpp"

namespace wstl {

void AggregationConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("aggregation sigma must be positive and finite");
}

double aggregate(Polarity polarity, std::span<const double> weights, std::span<const double> values,
                 const AggregationConfig& cfg, std::span<double> d_weights, std::span<double> d_values) {
  const std::size_t n = weights.size();
  if (n == 0 || values.size() != n) throw DomainError("aggregation needs equally sized, non-empty inputs");
  const bool want_partials = !d_weights.empty() || !d_values.empty();
  if (want_partials && (d_weights.size() != n || d_values.size() != n)) {
    throw DomainError("aggregation partial buffers must match the input size");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t argmin = n, argmax = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0 || std::isnan(weights[i])) throw DomainError("aggregation weights must be non-negative");
    if (weights[i] == 0.0) continue;
    if (values[i] < lo) lo = values[i], argmin = i;
    if (values[i] > hi) hi = values[i], argmax = i;
  }
  if (argmin == n) throw DomainError("aggregation weights are all zero");

  if (want_partials) {
    std::fill(d_weights.begin(), d_weights.end(), 0.0);
    std::fill(d_values.begin(), d_values.end(), 0.0);
  }

  if (cfg.mode == AggregationMode::exact_minmax) {
    const std::size_t pick = polarity == Polarity::min_like ? argmin : argmax;
    if (want_partials) d_values[pick] = 1.0;
    return values[pick];
  }

  const double sign = polarity == Polarity::min_like ? -1.0 : 1.0;
  const double inv_sigma = 1.0 / cfg.sigma;
  // The largest exponent belongs to the extreme value in the aggregation's
  // own direction.
  const double shift = sign * (polarity == Polarity::min_like ? lo : hi) * inv_sigma;

  // Exponent terms are reused by the partials below.
  thread_local std::vector<double> expo;
  expo.resize(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    expo[i] = std::exp(sign * values[i] * inv_sigma - shift);
    const double we = weights[i] * expo[i];
    num += we * values[i];
    den += we;
  }
  if (!(den > 0.0)) throw DomainError("aggregation denominator vanished");
  const double value = std::clamp(num / den, lo, hi);

  if (want_partials) {
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      const double e = expo[i] / den;
      d_weights[i] = e * (values[i] - value);
      d_values[i] = weights[i] * e * (1.0 + sign * (values[i] - value) * inv_sigma);
    }
  }
  return value;
}

}  // namespace wstl
