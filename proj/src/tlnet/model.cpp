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

#include "wstl/tlnet/model.hpp"

#include <cmath>
#include <numeric>

#include "wstl/core/cnf.hpp"
#include "wstl/data/dataset.hpp"

namespace wstl::tlnet {

using ad::Var;

namespace {

template <typename Scalar>
Scalar agg(Polarity p, std::span<const Scalar> w, std::span<const Scalar> r, const AggregationConfig& cfg) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return aggregate(p, w, r, cfg);
  } else {
    return ad::aggregate(p, w, r, cfg);
  }
}

template <typename Scalar>
Scalar smax(const Scalar& a, const Scalar& b) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return std::max(a, b);
  } else {
    return ad::max(a, b);
  }
}

template <typename Scalar>
Scalar sexp(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return std::exp(x);
  } else {
    return ad::exp(x);
  }
}

template <typename Scalar>
Scalar sum_of(std::span<const Scalar> xs) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return std::accumulate(xs.begin(), xs.end(), 0.0);
  } else {
    return ad::sum(xs);
  }
}

// CNF body of one matrix at timestep t.
template <typename Scalar>
Scalar clause_at(const std::vector<typename TemplateWeights<Scalar>::Row>& rows, const Eigen::MatrixXd& trace,
                 Eigen::Index t, const AggregationConfig& cfg) {
  std::vector<Scalar> sums, disj;
  sums.reserve(rows.size());
  disj.reserve(rows.size());
  std::vector<Scalar> values;
  for (const auto& row : rows) {
    // A one-literal disjunction is the literal itself, whatever its weight.
    if (row.columns.size() == 1) {
      disj.push_back(Scalar(trace(t, row.columns.front())));
    } else {
      values.clear();
      for (auto k : row.columns) values.push_back(Scalar(trace(t, k)));
      disj.push_back(agg<Scalar>(Polarity::max_like, row.weights, values, cfg));
    }
    sums.push_back(row.sum);
  }
  if (rows.size() == 1) return disj.front();
  return agg<Scalar>(Polarity::min_like, sums, disj, cfg);
}

}  // namespace

template <typename Scalar>
TemplateWeights<Scalar> prepare_weights(std::array<Matrix<Scalar>, 2> matrices) {
  TemplateWeights<Scalar> w;
  for (Clause c : kClauses) {
    const auto& m = matrices[index(c)];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      typename TemplateWeights<Scalar>::Row row;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (ad::is_structural_zero(m(i, j))) continue;
        row.weights.push_back(m(i, j));
        row.columns.push_back(j);
      }
      if (row.weights.empty()) continue;
      row.sum = row.weights.size() == 1 ? row.weights.front() : sum_of<Scalar>(row.weights);
      if (ad::value_of(row.sum) > 0.0) w.rows[index(c)].push_back(std::move(row));
    }
  }
  w.matrices = std::move(matrices);
  return w;
}

template <typename Scalar>
Scalar template_forward(const TemplateWeights<Scalar>& w, const Eigen::MatrixXd& trace, const AggregationConfig& cfg) {
  if (trace.rows() == 0) throw InputError("template_forward: empty trajectory");
  const Eigen::Index steps = trace.rows();
  const std::vector<Scalar> uniform_w(static_cast<std::size_t>(steps), Scalar(1.0 / static_cast<double>(steps)));

  std::vector<Scalar> top_w, top_r;
  std::vector<Scalar> signal(static_cast<std::size_t>(steps));
  for (Clause c : kClauses) {
    if (!w.present(c)) continue;
    for (Eigen::Index t = 0; t < steps; ++t) {
      signal[static_cast<std::size_t>(t)] = clause_at<Scalar>(w.rows[index(c)], trace, t, cfg);
    }
    const auto pol = c == Clause::F ? Polarity::max_like : Polarity::min_like;
    top_r.push_back(agg<Scalar>(pol, uniform_w, signal, cfg));
  }
  if (top_r.empty()) throw StructuralError("template_forward: both weight matrices are empty");
  if (top_r.size() == 1) return top_r.front();
  top_w.assign(2, Scalar(0.5));
  return agg<Scalar>(Polarity::min_like, top_w, top_r, cfg);
}

double template_forward(const TlnetParams& params, const Eigen::MatrixXd& trace, const AggregationConfig& cfg) {
  const auto active = params.active_scores();
  const auto w = prepare_weights<double>(effective_weights<double>(params, active));
  return template_forward<double>(w, trace, cfg);
}

double template_forward(const TlnetParams& params, const Trajectory& tau, const AggregationConfig& cfg) {
  return template_forward(params, data::robustness_channels(params.predicate_order, tau), cfg);
}

template <typename Scalar>
Scalar regularizer_T(const Matrix<Scalar>& wf, const Matrix<Scalar>& wg) {
  const Eigen::Index n = wf.rows();
  auto colsum = [](const Matrix<Scalar>& m, Eigen::Index j) {
    std::vector<Scalar> xs;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!ad::is_structural_zero(m(i, j))) xs.push_back(m(i, j));
    }
    return sum_of<Scalar>(xs);
  };
  std::vector<Scalar> terms;
  for (Eigen::Index j = 0; j < n; ++j) {
    terms.push_back(smax<Scalar>(colsum(wf, j), colsum(wf, j + n)) * smax<Scalar>(colsum(wg, j), colsum(wg, j + n)));
  }
  return sum_of<Scalar>(terms);
}

template <typename Scalar>
Scalar regularizer_D(const Matrix<Scalar>& w) {
  std::vector<Scalar> terms;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.rows(); ++j) {
      for (Eigen::Index k = 0; k < w.cols(); ++k) {
        if (ad::is_structural_zero(w(i, k)) || ad::is_structural_zero(w(j, k))) continue;
        terms.push_back(w(i, k) * w(j, k));
      }
    }
  }
  return sum_of<Scalar>(terms);
}

double regularizer_T(const TlnetParams& params) {
  const auto active = params.active_scores();
  const auto m = effective_weights<double>(params, active);
  return regularizer_T<double>(m[0], m[1]);
}

double regularizer_D(const Eigen::MatrixXd& w) { return regularizer_D<double>(w); }

void TrainConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be > 0");
  if (!(lambda_rt >= 0.0) || !std::isfinite(lambda_rt)) throw ConfigError("lambda_rt must be >= 0");
  if (!(lambda_rd >= 0.0) || !std::isfinite(lambda_rd)) throw ConfigError("lambda_rd must be >= 0");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ConfigError("step_size must be > 0");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
}

template <typename Scalar>
Scalar total_loss(const TemplateWeights<Scalar>& w, std::span<const LabeledTrace* const> batch,
                  const TrainConfig& cfg) {
  if (batch.empty()) throw InputError("total_loss: empty batch");
  const auto agg_cfg = cfg.aggregation();
  std::vector<Scalar> terms;
  terms.reserve(batch.size());
  for (const auto* tr : batch) {
    if (tr->label != 1 && tr->label != -1) {
      throw InputError("trajectory '" + tr->id + "' has label " + std::to_string(tr->label) + ", expected 1 or -1");
    }
    const Scalar r = template_forward<Scalar>(w, tr->robustness, agg_cfg);
    terms.push_back(sexp<Scalar>(Scalar(-cfg.zeta * tr->label) * r));
  }
  Scalar loss = sum_of<Scalar>(terms) / Scalar(static_cast<double>(batch.size()));
  if (cfg.lambda_rt != 0.0) loss = loss + Scalar(cfg.lambda_rt) * regularizer_T<Scalar>(w.matrices[0], w.matrices[1]);
  if (cfg.lambda_rd != 0.0) {
    loss = loss + Scalar(cfg.lambda_rd) * (regularizer_D<Scalar>(w.matrices[0]) + regularizer_D<Scalar>(w.matrices[1]));
  }
  return loss;
}

double total_loss(const TlnetParams& params, std::span<const LabeledTrace> batch, const TrainConfig& cfg) {
  const auto active = params.active_scores();
  const auto w = prepare_weights<double>(effective_weights<double>(params, active));
  std::vector<const LabeledTrace*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& tr : batch) ptrs.push_back(&tr);
  return total_loss<double>(w, ptrs, cfg);
}

WstlFormula to_formula(const TlnetParams& params, std::size_t horizon) {
  const auto active = params.active_scores();
  const auto m = effective_weights<double>(params, active);
  std::vector<double> top_w;
  std::vector<WstlFormula> parts;
  for (Clause c : kClauses) {
    DistributedCnf cnf;
    const auto& w = m[index(c)];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      WeightedClause clause;
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (w(i, j) > 0.0) clause.push_back({params.predicate_order[static_cast<std::size_t>(j)], w(i, j)});
      }
      if (!clause.empty()) cnf.push_back(std::move(clause));
    }
    if (cnf.empty()) continue;
    const Interval iv{0, horizon};
    auto body = nest_weights(cnf);
    parts.push_back(c == Clause::F ? WstlFormula::eventually(iv, std::move(body))
                                   : WstlFormula::globally(iv, std::move(body)));
  }
  if (parts.empty()) throw StructuralError("to_formula: both weight matrices are empty");
  top_w.assign(parts.size(), 1.0 / static_cast<double>(parts.size()));
  return WstlFormula::conjunction(std::move(top_w), std::move(parts));
}

template TemplateWeights<double> prepare_weights<double>(std::array<Matrix<double>, 2>);
template TemplateWeights<Var> prepare_weights<Var>(std::array<Matrix<Var>, 2>);
template double template_forward<double>(const TemplateWeights<double>&, const Eigen::MatrixXd&,
                                         const AggregationConfig&);
template Var template_forward<Var>(const TemplateWeights<Var>&, const Eigen::MatrixXd&, const AggregationConfig&);
template double regularizer_T<double>(const Matrix<double>&, const Matrix<double>&);
template Var regularizer_T<Var>(const Matrix<Var>&, const Matrix<Var>&);
template double regularizer_D<double>(const Matrix<double>&);
template Var regularizer_D<Var>(const Matrix<Var>&);
template double total_loss<double>(const TemplateWeights<double>&, std::span<const LabeledTrace* const>,
                                   const TrainConfig&);
template Var total_loss<Var>(const TemplateWeights<Var>&, std::span<const LabeledTrace* const>, const TrainConfig&);

}  // namespace wstl::tlnet
