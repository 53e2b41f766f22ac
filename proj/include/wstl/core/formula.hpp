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

#ifndef WSTL_CORE_FORMULA_HPP_
#define WSTL_CORE_FORMULA_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "wstl/core/aggregation.hpp"
#include "wstl/core/predicate.hpp"
#include "wstl/core/trajectory.hpp"

namespace wstl {

/// Closed timestep interval [a, b].
struct Interval {
  std::size_t a = 0;
  std::size_t b = 0;

  std::size_t size() const { return b - a + 1; }
  bool operator==(const Interval&) const = default;
};

enum class NodeKind { top, literal, negation, conjunction, disjunction, globally, eventually };

std::string_view to_string(NodeKind kind);

/// Weight-sum tolerance for normalized operators.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Normalized weighted STL formula. Immutable value type; the factories
/// enforce that every Boolean and temporal operator carries one weight per
/// operand (per interval step for temporal nodes), each in [0, 1], summing
/// to 1 within kWeightSumTolerance. Violations throw StructuralError.
class WstlFormula {
 public:
  static WstlFormula top();
  static WstlFormula literal(Literal lit);
  static WstlFormula negation(WstlFormula child);
  static WstlFormula conjunction(std::vector<double> weights, std::vector<WstlFormula> children);
  static WstlFormula disjunction(std::vector<double> weights, std::vector<WstlFormula> children);
  /// Empty `weights` means uniform 1/|I|.
  static WstlFormula globally(Interval interval, WstlFormula child, std::vector<double> weights = {});
  static WstlFormula eventually(Interval interval, WstlFormula child, std::vector<double> weights = {});

  NodeKind kind() const { return kind_; }
  const std::vector<WstlFormula>& children() const { return children_; }
  const std::vector<double>& weights() const { return weights_; }
  const Interval& interval() const { return interval_; }
  const Literal& literal() const { return literal_; }

  bool is_temporal() const { return kind_ == NodeKind::globally || kind_ == NodeKind::eventually; }

  /// Largest timestep offset any temporal operator looks ahead.
  std::size_t lookahead() const;

 private:
  WstlFormula() = default;

  static WstlFormula boolean(NodeKind kind, std::vector<double> weights, std::vector<WstlFormula> children);
  static WstlFormula temporal(NodeKind kind, Interval interval, WstlFormula child, std::vector<double> weights);

  NodeKind kind_ = NodeKind::top;
  std::vector<WstlFormula> children_;
  std::vector<double> weights_;
  Interval interval_;
  Literal literal_;
};

/// Checks that `weights` is a normalized weight vector of length `expected`.
void validate_weights(const std::vector<double>& weights, std::size_t expected, std::string_view where);

/// Quantitative robustness r(phi, tau, t) under normalized wSTL semantics.
/// Throws InputError when a temporal operator reaches past the horizon.
double robustness(const WstlFormula& phi, const Trajectory& tau, std::size_t t, const AggregationConfig& cfg);

}  // namespace wstl

#endif  // WSTL_CORE_FORMULA_HPP_
