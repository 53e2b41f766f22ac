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

// The two-clause template
//
//   0.5 F_[0,H] [ AND_i OR_j w^F_ij psi_j ]  AND  0.5 G_[0,H] [ AND_i OR_j w^G_ij psi_j ]
//
// evaluated directly on distributed weight matrices, plus its regularized
// classification loss. Everything numeric is templated on the scalar so the
// same code runs on doubles and on tape variables.

#ifndef WSTL_TLNET_MODEL_HPP_
#define WSTL_TLNET_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wstl/core/aggregation.hpp"
#include "wstl/core/formula.hpp"
#include "wstl/core/trajectory.hpp"
#include "wstl/tlnet/params.hpp"

namespace wstl::tlnet {

/// Precomputed literal robustness of one trajectory: row t, column k holds
/// r(predicate_order[k], tau, t), see data::robustness_channels.
struct LabeledTrace {
  std::string id;
  int label = 1;
  Eigen::MatrixXd robustness;
};

/// Effective matrices reduced to what the template evaluates: per matrix the
/// rows with a positive sum, each keeping only its active entries.
template <typename Scalar>
struct TemplateWeights {
  struct Row {
    std::vector<Scalar> weights;
    std::vector<Eigen::Index> columns;
    Scalar sum;
  };

  std::array<Matrix<Scalar>, 2> matrices;
  std::array<std::vector<Row>, 2> rows;

  bool present(Clause c) const { return !rows[index(c)].empty(); }
};

template <typename Scalar>
TemplateWeights<Scalar> prepare_weights(std::array<Matrix<Scalar>, 2> matrices);

/// Template robustness at t = 0 with I = [0, H] and uniform temporal weights.
/// A matrix without any positive row drops out of the top-level conjunction.
template <typename Scalar>
Scalar template_forward(const TemplateWeights<Scalar>& w, const Eigen::MatrixXd& trace, const AggregationConfig& cfg);

double template_forward(const TlnetParams& params, const Eigen::MatrixXd& trace, const AggregationConfig& cfg);
double template_forward(const TlnetParams& params, const Trajectory& tau, const AggregationConfig& cfg);

/// sum_j max(colsum_F(j), colsum_F(j + N)) * max(colsum_G(j), colsum_G(j + N)).
template <typename Scalar>
Scalar regularizer_T(const Matrix<Scalar>& wf, const Matrix<Scalar>& wg);

/// sum_{i<j} sum_k w_ik w_jk.
template <typename Scalar>
Scalar regularizer_D(const Matrix<Scalar>& w);

double regularizer_T(const TlnetParams& params);
double regularizer_D(const Eigen::MatrixXd& w);

struct TrainConfig {
  double sigma = 0.5;
  double zeta = 1.0;
  double lambda_rt = 0.01;
  double lambda_rd = 0.1;
  std::size_t epochs = 15;
  double step_size = 2.0;
  std::size_t batch_size = 50;
  std::uint64_t seed = 0;

  AggregationConfig aggregation() const { return AggregationConfig{sigma, AggregationMode::smooth}; }

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Mean of exp(-zeta l r) over the batch plus the weighted regularizers.
/// Throws InputError for labels other than +-1 and on an empty batch.
template <typename Scalar>
Scalar total_loss(const TemplateWeights<Scalar>& w, std::span<const LabeledTrace* const> batch,
                  const TrainConfig& cfg);

double total_loss(const TlnetParams& params, std::span<const LabeledTrace> batch, const TrainConfig& cfg);

/// The explanation encoded by `params`: Boolean layer rebuilt with row sums
/// as clause weights, zero weights and rows dropped, I = [0, horizon].
/// Throws StructuralError when both matrices are empty.
WstlFormula to_formula(const TlnetParams& params, std::size_t horizon);

}  // namespace wstl::tlnet

#endif  // WSTL_TLNET_MODEL_HPP_
