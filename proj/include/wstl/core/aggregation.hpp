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

#ifndef WSTL_CORE_AGGREGATION_HPP_
#define WSTL_CORE_AGGREGATION_HPP_

#include <span>

namespace wstl {

enum class AggregationMode { smooth, exact_minmax };

struct AggregationConfig {
  double sigma = 0.5;
  AggregationMode mode = AggregationMode::smooth;

  /// Throws ConfigError unless sigma > 0 and finite.
  void validate() const;
};

/// Conjunction and globally pull toward the minimum, disjunction and
/// eventually toward the maximum.
enum class Polarity { min_like, max_like };

/// Weighted soft-min / soft-max
///
///   sum_i w_i r_i exp(s r_i / sigma) / sum_i w_i exp(s r_i / sigma),  s = -1 or +1,
///
/// or the exact min / max over entries with w_i > 0. Entries with w_i == 0
/// are skipped entirely. Exponents are shifted by their maximum before
/// evaluation; the ratio is unchanged. The result is clamped into
/// [min r_i, max r_i] over the active entries.
///
/// When `d_weights` / `d_values` are non-empty (same length as the inputs)
/// they receive the partial derivatives of the result. Zero-weight entries
/// get zero partials. In exact mode the selected entry (the first one on
/// ties) gets d_values = 1.
///
/// Throws DomainError on size mismatch, empty input, a negative weight or
/// an all-zero weight vector.
double aggregate(Polarity polarity, std::span<const double> weights, std::span<const double> values,
                 const AggregationConfig& cfg, std::span<double> d_weights = {},
                 std::span<double> d_values = {});

inline double agg_conj(std::span<const double> w, std::span<const double> r, const AggregationConfig& cfg) {
  return aggregate(Polarity::min_like, w, r, cfg);
}

inline double agg_disj(std::span<const double> w, std::span<const double> r, const AggregationConfig& cfg) {
  return aggregate(Polarity::max_like, w, r, cfg);
}

inline double agg_glob(std::span<const double> w, std::span<const double> r, const AggregationConfig& cfg) {
  return aggregate(Polarity::min_like, w, r, cfg);
}

inline double agg_event(std::span<const double> w, std::span<const double> r, const AggregationConfig& cfg) {
  return aggregate(Polarity::max_like, w, r, cfg);
}

}  // namespace wstl

#endif  // WSTL_CORE_AGGREGATION_HPP_
