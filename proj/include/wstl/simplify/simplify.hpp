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

#ifndef WSTL_SIMPLIFY_SIMPLIFY_HPP_
#define WSTL_SIMPLIFY_SIMPLIFY_HPP_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "wstl/core/formula.hpp"
#include "wstl/core/trajectory.hpp"
#include "wstl/tlnet/train.hpp"

namespace wstl::simplify {

using tlnet::TlnetParams;

/// Fractions of trajectories on which a literal holds at every step, at
/// some steps, or at none. r = 0 counts as satisfied.
struct RobustnessDistribution {
  double always_sat = 0.0;
  double sometimes_sat = 0.0;
  double never_sat = 0.0;

  std::array<double, 3> as_array() const { return {always_sat, sometimes_sat, never_sat}; }
};

/// Throws InputError on an empty dataset.
RobustnessDistribution robustness_distribution(const TrajectorySet& data, const Literal& literal);

/// Same, from one column of precomputed channels.
RobustnessDistribution robustness_distribution(std::span<const Eigen::MatrixXd> channels, Eigen::Index column);

double cosine_similarity(const RobustnessDistribution& a, const RobustnessDistribution& b);

struct SimplifyConfig {
  double s_threshold = 0.99;
  std::size_t n_prune_iters = 20;
  std::size_t n_weights_per_prune = 1;

  void validate() const;
};

struct FilterEntry {
  std::string predicate;
  RobustnessDistribution positive;
  RobustnessDistribution negative;
  double similarity = 0.0;
  bool retained = true;
};

struct FilterReport {
  /// Retained predicates in their original order.
  std::vector<std::shared_ptr<const PredicateSpec>> retained;
  std::vector<FilterEntry> entries;
};

/// Drops a predicate (and so its negation) when the cosine similarity of its
/// positive-class and negative-class distributions reaches s_threshold.
/// Throws InputError unless both classes are present.
FilterReport filter_predicates(const TrajectorySet& data,
                               const std::vector<std::shared_ptr<const PredicateSpec>>& predicates,
                               const SimplifyConfig& cfg);

nlohmann::json to_json(const FilterReport& report);

/// Effective weights below this count as zero.
inline constexpr double kZeroWeight = 1e-12;

struct PruneResult {
  TlnetParams params;
  /// False when the step would have emptied a matrix; params are then unchanged.
  bool applied = false;
  std::size_t zeroed = 0;
  std::size_t pruned = 0;
};

/// Masks every active entry with effective weight < kZeroWeight, then the
/// n_weights_per_prune smallest survivors over F and G jointly. Ties go to
/// the smallest (matrix, row, column). Surviving scores are shifted so that
/// exp(score) is the renormalized effective weight.
PruneResult prune_step(const TlnetParams& params, const SimplifyConfig& cfg);

/// Keeps the k largest effective weights over F and G jointly (ties as in
/// prune_step). A matrix may end up with no active entry.
TlnetParams topk_truncate(const TlnetParams& params, std::size_t k);

/// Fraction of traces whose template robustness has the sign of the label
/// (r = 0 counts as positive).
double training_accuracy(const TlnetParams& params, std::span<const tlnet::LabeledTrace> traces,
                         const AggregationConfig& cfg);

struct StageRecord {
  std::string stage;
  std::size_t iteration = 0;
  std::size_t zeroed = 0;
  std::size_t pruned = 0;
  std::size_t active_f = 0;
  std::size_t active_g = 0;
  double loss_before = 0.0;
  double loss_after = 0.0;
  double train_accuracy = 0.0;
  double seconds = 0.0;
};

struct Explanation {
  WstlFormula formula = WstlFormula::top();
  std::string canonical;
  TlnetParams params;
  FilterReport filter;
  std::vector<StageRecord> history;
  std::size_t horizon = 0;
  /// False when a weight matrix ended up empty.
  bool complete = true;
};

/// Filter, initialize, optimize, then up to n_prune_iters rounds of
/// prune + optimize, stopping after the round that leaves a single active
/// entry in F or G. `train` is the training split; the filter never sees
/// held-out data. Scores carry over between rounds. Round r trains with the
/// seed derived from (train_cfg.seed, r). Throws DegenerateDataError when
/// every predicate is filtered out.
Explanation run_pipeline(const TrajectorySet& train, const std::vector<std::shared_ptr<const PredicateSpec>>& predicates,
                         const tlnet::TrainConfig& train_cfg, const SimplifyConfig& simp_cfg);

nlohmann::json to_json(const StageRecord& record);

}  // namespace wstl::simplify

#endif  // WSTL_SIMPLIFY_SIMPLIFY_HPP_
