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

// Reverse-mode differentiation over a small, fixed primitive set.
//
// Every recorded node stores its parents together with the local partial
// derivatives, computed eagerly during the forward pass. The backward sweep
// is then a single pass over the node list in reverse creation order, which
// is a topological order by construction. Constants never touch the tape.

#ifndef WSTL_AUTODIFF_TAPE_HPP_
#define WSTL_AUTODIFF_TAPE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wstl/core/aggregation.hpp"
#include "wstl/errors.hpp"

namespace wstl::ad {

class Tape;

/// Scalar that is either a plain constant or a node on a Tape.
class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::int32_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::int32_t id, double value) : tape_(tape), id_(id), value_(value) {}

  Tape* tape_ = nullptr;
  std::int32_t id_ = -1;
  double value_ = 0.0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// New independent input.
  Var variable(double value);

  /// Records value = g(parents) with d value / d parents[k] = partials[k].
  /// Constant parents are dropped; if none remain the result is a constant.
  Var record(double value, std::span<const Var> parents, std::span<const double> partials);

  std::size_t size() const { return nodes_.size(); }
  std::size_t input_count() const { return inputs_.size(); }
  std::size_t edge_count() const { return parents_.size(); }

  /// Adjoint of every node after one reverse sweep seeded at `output`.
  std::vector<double> adjoints(const Var& output) const;

  /// d output / d input, one entry per variable() in creation order.
  std::vector<double> gradient(const Var& output) const;

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
  };

  std::vector<Node> nodes_;
  std::vector<std::int32_t> parents_;
  std::vector<double> partials_;
  std::vector<std::int32_t> inputs_;
};

/// Tape shared by the operands, or null when all are constants. Throws
/// InputError when operands live on different tapes.
Tape* common_tape(std::span<const Var> operands);

// Elementary primitives.

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
/// Throws DomainError on division by zero.
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);
Var exp(const Var& x);
/// Subgradient convention: on ties the whole derivative goes to `a`.
Var max(const Var& a, const Var& b);

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline bool operator<(const Var& a, const Var& b) { return a.value() < b.value(); }
inline bool operator>(const Var& a, const Var& b) { return a.value() > b.value(); }
inline bool operator==(const Var& a, const Var& b) { return a.value() == b.value(); }

/// n-ary sum recorded as one node.
Var sum(std::span<const Var> terms);

// Composite primitives with closed-form partials.

/// Weighted soft-min / soft-max aggregation, see wstl::aggregate.
Var aggregate(Polarity polarity, std::span<const Var> weights, std::span<const Var> values,
              const AggregationConfig& cfg);

/// Simplex normalization exp(s_k) / sum_l exp(s_l), shifted by max s.
std::vector<Var> normalize_exp(std::span<const Var> scores);

/// Result of evaluating an expression on fresh tape inputs.
struct Recording {
  double value = 0.0;
  std::unique_ptr<Tape> tape;
  Var output;
  std::vector<Var> inputs;
};

/// Evaluates `expr(inputs)` with each input registered as a tape variable.
/// `expr` takes std::span<const Var> and returns Var.
template <typename Expr>
Recording forward_record(Expr&& expr, std::span<const double> inputs) {
  Recording rec;
  rec.tape = std::make_unique<Tape>();
  rec.inputs.reserve(inputs.size());
  for (double x : inputs) rec.inputs.push_back(rec.tape->variable(x));
  rec.output = expr(std::span<const Var>(rec.inputs));
  rec.value = rec.output.value();
  return rec;
}

/// d output / d inputs of a recording.
std::vector<double> gradient(const Recording& rec);

// Double overloads so generic code can call the same names for both scalars.
inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }
inline bool is_structural_zero(double x) { return x == 0.0; }
inline bool is_structural_zero(const Var& x) { return x.is_constant() && x.value() == 0.0; }

}  // namespace wstl::ad

namespace Eigen {

template <>
struct NumTraits<wstl::ad::Var> : NumTraits<double> {
  using Real = wstl::ad::Var;
  using NonInteger = wstl::ad::Var;
  using Nested = wstl::ad::Var;
  using Literal = wstl::ad::Var;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 3, MulCost = 3 };
};

}  // namespace Eigen

#endif  // WSTL_AUTODIFF_TAPE_HPP_
