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

#include "wstl/autodiff/tape.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wstl::ad {

Var Tape::variable(double value) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  const auto at = static_cast<std::uint32_t>(parents_.size());
  nodes_.push_back({at, at});
  inputs_.push_back(id);
  return Var(this, id, value);
}

Var Tape::record(double value, std::span<const Var> parents, std::span<const double> partials) {
  const auto begin = static_cast<std::uint32_t>(parents_.size());
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (parents[k].is_constant()) continue;
    if (parents[k].tape() != this) throw InputError("autodiff: operand recorded on a different tape");
    parents_.push_back(parents[k].id());
    partials_.push_back(partials[k]);
  }
  const auto end = static_cast<std::uint32_t>(parents_.size());
  if (begin == end) return Var(value);
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end});
  return Var(this, id, value);
}

std::vector<double> Tape::adjoints(const Var& output) const {
  std::vector<double> adj(nodes_.size(), 0.0);
  if (output.is_constant()) return adj;
  if (output.tape() != this) throw InputError("autodiff: output belongs to a different tape");
  adj[static_cast<std::size_t>(output.id())] = 1.0;
  for (std::size_t n = static_cast<std::size_t>(output.id()) + 1; n-- > 0;) {
    const double a = adj[n];
    if (a == 0.0) continue;
    for (std::uint32_t e = nodes_[n].begin; e < nodes_[n].end; ++e) {
      adj[static_cast<std::size_t>(parents_[e])] += a * partials_[e];
    }
  }
  return adj;
}

std::vector<double> Tape::gradient(const Var& output) const {
  const auto adj = adjoints(output);
  std::vector<double> g;
  g.reserve(inputs_.size());
  for (auto id : inputs_) g.push_back(adj[static_cast<std::size_t>(id)]);
  return g;
}

Tape* common_tape(std::span<const Var> operands) {
  Tape* tape = nullptr;
  for (const auto& v : operands) {
    if (v.is_constant()) continue;
    if (tape && v.tape() != tape) throw InputError("autodiff: operands recorded on different tapes");
    tape = v.tape();
  }
  return tape;
}

namespace {

Var binary(const Var& a, const Var& b, double value, double da, double db) {
  const std::array<Var, 2> ps{a, b};
  Tape* tape = common_tape(ps);
  if (!tape) return Var(value);
  const std::array<double, 2> ds{da, db};
  return tape->record(value, ps, ds);
}

Var unary(const Var& a, double value, double da) {
  if (a.is_constant()) return Var(value);
  const std::array<double, 1> ds{da};
  return a.tape()->record(value, std::span<const Var>(&a, 1), ds);
}

}  // namespace

Var operator+(const Var& a, const Var& b) { return binary(a, b, a.value() + b.value(), 1.0, 1.0); }
Var operator-(const Var& a, const Var& b) { return binary(a, b, a.value() - b.value(), 1.0, -1.0); }
Var operator*(const Var& a, const Var& b) { return binary(a, b, a.value() * b.value(), b.value(), a.value()); }

Var operator/(const Var& a, const Var& b) {
  if (b.value() == 0.0) throw DomainError("autodiff: division by zero");
  const double q = a.value() / b.value();
  return binary(a, b, q, 1.0 / b.value(), -q / b.value());
}

Var operator-(const Var& a) { return unary(a, -a.value(), -1.0); }

Var exp(const Var& x) {
  const double e = std::exp(x.value());
  return unary(x, e, e);
}

Var max(const Var& a, const Var& b) {
  const bool first = a.value() >= b.value();
  return binary(a, b, first ? a.value() : b.value(), first ? 1.0 : 0.0, first ? 0.0 : 1.0);
}

Var sum(std::span<const Var> terms) {
  double total = 0.0;
  for (const auto& t : terms) total += t.value();
  Tape* tape = common_tape(terms);
  if (!tape) return Var(total);
  const std::vector<double> ones(terms.size(), 1.0);
  return tape->record(total, terms, ones);
}

Var aggregate(Polarity polarity, std::span<const Var> weights, std::span<const Var> values,
              const AggregationConfig& cfg) {
  const std::size_t n = weights.size();
  if (values.size() != n) throw DomainError("aggregation needs equally sized inputs");
  // Called once per node of every template evaluation; reuse the buffers.
  thread_local std::vector<double> w, r, dw, dr, partials;
  thread_local std::vector<Var> parents;
  w.resize(n);
  r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = weights[i].value();
    r[i] = values[i].value();
  }
  Tape* tape = common_tape(weights);
  if (Tape* tv = common_tape(values); tv) {
    if (tape && tape != tv) throw InputError("autodiff: operands recorded on different tapes");
    tape = tv;
  }
  if (!tape) return Var(wstl::aggregate(polarity, w, r, cfg));

  dw.resize(n);
  dr.resize(n);
  const double value = wstl::aggregate(polarity, w, r, cfg, dw, dr);
  parents.clear();
  partials.clear();
  for (std::size_t i = 0; i < n; ++i) {
    parents.push_back(weights[i]);
    partials.push_back(dw[i]);
    parents.push_back(values[i]);
    partials.push_back(dr[i]);
  }
  return tape->record(value, parents, partials);
}

std::vector<Var> normalize_exp(std::span<const Var> scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw DomainError("normalize_exp: empty score vector");
  double hi = scores[0].value();
  for (const auto& s : scores) hi = std::max(hi, s.value());
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += p[k] = std::exp(scores[k].value() - hi);
  for (double& x : p) x /= total;

  std::vector<Var> out;
  out.reserve(n);
  Tape* tape = common_tape(scores);
  std::vector<double> partials(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!tape) {
      out.emplace_back(p[k]);
      continue;
    }
    for (std::size_t l = 0; l < n; ++l) partials[l] = p[k] * ((k == l ? 1.0 : 0.0) - p[l]);
    out.push_back(tape->record(p[k], scores, partials));
  }
  return out;
}

std::vector<double> gradient(const Recording& rec) { return rec.tape->gradient(rec.output); }

}  // namespace wstl::ad
