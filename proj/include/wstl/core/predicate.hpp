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

#ifndef WSTL_CORE_PREDICATE_HPP_
#define WSTL_CORE_PREDICATE_HPP_

#include <Eigen/Dense>

#include <compare>
#include <memory>
#include <string>

#include "wstl/errors.hpp"

namespace wstl {

/// Contiguous block of state coordinates, e.g. the planar position of one object.
struct StateSlice {
  Eigen::Index offset = 0;
  Eigen::Index length = 0;

  bool operator==(const StateSlice&) const = default;
};

/// State-to-scalar map f. Restricted to the two families the reach-avoid
/// schemas need: Euclidean distance between two slices, and one raw
/// coordinate. Both are multiplied by `scale`, so "distance below r" is
/// written as -distance >= -r.
struct FeatureMap {
  enum class Kind { distance, coordinate };

  std::string id;
  Kind kind = Kind::coordinate;
  StateSlice a;
  StateSlice b;
  Eigen::Index index = 0;
  double scale = 1.0;

  /// Largest state coordinate the map reads, plus one.
  Eigen::Index required_dimension() const;

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& state) const {
    if (kind == Kind::distance) {
      return scale * (state.segment(a.offset, a.length) - state.segment(b.offset, b.length)).norm();
    }
    return scale * state(index);
  }
};

/// Atomic predicate f(s) >= c with the bounds used to normalize robustness.
struct PredicateSpec {
  std::string id;
  FeatureMap feature;
  double threshold = 0.0;
  double sup = 1.0;
  double inf = -1.0;

  /// Throws ConfigError unless inf < threshold < sup.
  void validate() const;
};

/// Normalized robustness of a raw feature value. Values outside [inf, sup]
/// are clamped to +-1 with a logged warning.
double normalized_robustness(const PredicateSpec& p, double feature_value);

template <typename Derived>
double predicate_robustness(const PredicateSpec& p, const Eigen::MatrixBase<Derived>& state,
                            bool negated) {
  const double r = normalized_robustness(p, p.feature(state));
  return negated ? -r : r;
}

/// Predicate identity plus polarity; the unit that metrics and rendering
/// compare on.
struct LiteralKey {
  std::string id;
  bool negated = false;

  auto operator<=>(const LiteralKey&) const = default;
  bool operator==(const LiteralKey&) const = default;

  /// "ψ_id" or "¬ψ_id".
  std::string to_string() const;
};

/// A literal in a formula. `predicate` may be null for formulas that are
/// only inspected structurally; evaluating such a literal throws ConfigError.
struct Literal {
  LiteralKey key;
  std::shared_ptr<const PredicateSpec> predicate;

  static Literal of(std::shared_ptr<const PredicateSpec> p, bool negated = false) {
    LiteralKey key{p->id, negated};
    return Literal{std::move(key), std::move(p)};
  }

  static Literal unbound(std::string id, bool negated = false) {
    return Literal{LiteralKey{std::move(id), negated}, nullptr};
  }
};

}  // namespace wstl

#endif  // WSTL_CORE_PREDICATE_HPP_
