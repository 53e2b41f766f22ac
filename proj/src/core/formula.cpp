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

#include "wstl/core/formula.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wstl {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::top: return "true";
    case NodeKind::literal: return "literal";
    case NodeKind::negation: return "not";
    case NodeKind::conjunction: return "and";
    case NodeKind::disjunction: return "or";
    case NodeKind::globally: return "G";
    case NodeKind::eventually: return "F";
  }
  return "?";
}

void validate_weights(const std::vector<double>& weights, std::size_t expected, std::string_view where) {
  if (weights.size() != expected) {
    throw StructuralError(std::string(where) + ": expected " + std::to_string(expected) + " weights, got " +
                          std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw StructuralError(std::string(where) + ": weight outside [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw StructuralError(std::string(where) + ": weights sum to " + std::to_string(sum) + ", not 1");
  }
}

WstlFormula WstlFormula::top() { return WstlFormula{}; }

WstlFormula WstlFormula::literal(Literal lit) {
  WstlFormula f;
  f.kind_ = NodeKind::literal;
  f.literal_ = std::move(lit);
  return f;
}

WstlFormula WstlFormula::negation(WstlFormula child) {
  WstlFormula f;
  f.kind_ = NodeKind::negation;
  f.children_.push_back(std::move(child));
  return f;
}

WstlFormula WstlFormula::boolean(NodeKind kind, std::vector<double> weights, std::vector<WstlFormula> children) {
  if (children.empty()) throw StructuralError(std::string(to_string(kind)) + ": needs at least one operand");
  validate_weights(weights, children.size(), to_string(kind));
  WstlFormula f;
  f.kind_ = kind;
  f.weights_ = std::move(weights);
  f.children_ = std::move(children);
  return f;
}

WstlFormula WstlFormula::conjunction(std::vector<double> weights, std::vector<WstlFormula> children) {
  return boolean(NodeKind::conjunction, std::move(weights), std::move(children));
}

WstlFormula WstlFormula::disjunction(std::vector<double> weights, std::vector<WstlFormula> children) {
  return boolean(NodeKind::disjunction, std::move(weights), std::move(children));
}

WstlFormula WstlFormula::temporal(NodeKind kind, Interval interval, WstlFormula child, std::vector<double> weights) {
  if (interval.a > interval.b) throw StructuralError(std::string(to_string(kind)) + ": interval with a > b");
  if (weights.empty()) weights.assign(interval.size(), 1.0 / static_cast<double>(interval.size()));
  validate_weights(weights, interval.size(), to_string(kind));
  WstlFormula f;
  f.kind_ = kind;
  f.interval_ = interval;
  f.weights_ = std::move(weights);
  f.children_.push_back(std::move(child));
  return f;
}

WstlFormula WstlFormula::globally(Interval interval, WstlFormula child, std::vector<double> weights) {
  return temporal(NodeKind::globally, interval, std::move(child), std::move(weights));
}

WstlFormula WstlFormula::eventually(Interval interval, WstlFormula child, std::vector<double> weights) {
  return temporal(NodeKind::eventually, interval, std::move(child), std::move(weights));
}

std::size_t WstlFormula::lookahead() const {
  std::size_t inner = 0;
  for (const auto& c : children_) inner = std::max(inner, c.lookahead());
  return is_temporal() ? interval_.b + inner : inner;
}

namespace {

double eval(const WstlFormula& phi, const Trajectory& tau, std::size_t t, const AggregationConfig& cfg) {
  switch (phi.kind()) {
    case NodeKind::top:
      return 1.0;
    case NodeKind::literal: {
      const auto& lit = phi.literal();
      if (!lit.predicate) throw ConfigError("literal " + lit.key.to_string() + " is not bound to a predicate");
      return predicate_robustness(*lit.predicate, tau.states.row(static_cast<Eigen::Index>(t)), lit.key.negated);
    }
    case NodeKind::negation:
      return -eval(phi.children().front(), tau, t, cfg);
    case NodeKind::conjunction:
    case NodeKind::disjunction: {
      std::vector<double> r;
      r.reserve(phi.children().size());
      for (const auto& c : phi.children()) r.push_back(eval(c, tau, t, cfg));
      const auto pol = phi.kind() == NodeKind::conjunction ? Polarity::min_like : Polarity::max_like;
      return aggregate(pol, phi.weights(), r, cfg);
    }
    case NodeKind::globally:
    case NodeKind::eventually: {
      const auto& iv = phi.interval();
      const auto& child = phi.children().front();
      if (t + iv.b + child.lookahead() > tau.horizon()) {
        throw InputError(std::string(to_string(phi.kind())) + "[" + std::to_string(iv.a) + "," +
                         std::to_string(iv.b) + "] at t=" + std::to_string(t) + " exceeds horizon " +
                         std::to_string(tau.horizon()) + " of trajectory '" + tau.id + "'");
      }
      std::vector<double> r;
      r.reserve(iv.size());
      for (std::size_t k = iv.a; k <= iv.b; ++k) r.push_back(eval(child, tau, t + k, cfg));
      const auto pol = phi.kind() == NodeKind::globally ? Polarity::min_like : Polarity::max_like;
      return aggregate(pol, phi.weights(), r, cfg);
    }
  }
  throw StructuralError("unknown node kind");
}

}  // namespace

double robustness(const WstlFormula& phi, const Trajectory& tau, std::size_t t, const AggregationConfig& cfg) {
  if (tau.states.rows() == 0) throw InputError("trajectory '" + tau.id + "' is empty");
  if (t > tau.horizon()) {
    throw InputError("t=" + std::to_string(t) + " beyond horizon of trajectory '" + tau.id + "'");
  }
  return eval(phi, tau, t, cfg);
}

}  // namespace wstl
