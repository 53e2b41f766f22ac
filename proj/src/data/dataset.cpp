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

#include "wstl/data/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "wstl/numeric.hpp"

namespace wstl::data {

std::vector<Literal> literal_channels(const std::vector<std::shared_ptr<const PredicateSpec>>& predicates) {
  std::vector<Literal> out;
  out.reserve(2 * predicates.size());
  for (const auto& p : predicates) out.push_back(Literal::of(p, false));
  for (const auto& p : predicates) out.push_back(Literal::of(p, true));
  return out;
}

Eigen::MatrixXd robustness_channels(const std::vector<Literal>& literals, const Trajectory& tau) {
  if (tau.states.rows() == 0) throw InputError("trajectory '" + tau.id + "' is empty");
  Eigen::MatrixXd out(tau.states.rows(), static_cast<Eigen::Index>(literals.size()));
  for (std::size_t k = 0; k < literals.size(); ++k) {
    const auto& lit = literals[k];
    if (!lit.predicate) throw ConfigError("literal " + lit.key.to_string() + " is not bound to a predicate");
    if (lit.predicate->feature.required_dimension() > tau.dimension()) {
      throw ConfigError("predicate '" + lit.key.id + "' reads past the state of trajectory '" + tau.id + "' at t=0");
    }
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      out(t, static_cast<Eigen::Index>(k)) = predicate_robustness(*lit.predicate, tau.states.row(t), lit.key.negated);
    }
  }
  return out;
}

RobustnessTensor precompute_robustness(const TrajectorySet& data, const std::vector<Literal>& literals) {
  RobustnessTensor out;
  out.reserve(data.size());
  for (const auto& tau : data) out.push_back(robustness_channels(literals, tau));
  return out;
}

DatasetSplit stratified_split(const TrajectorySet& data, double fraction, std::uint64_t seed) {
  if (data.empty()) throw InputError("stratified_split: empty dataset");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("stratified_split: fraction must lie in (0, 1)");
  DatasetSplit split;
  split.split_fraction = fraction;
  split.seed = seed;
  Rng rng(seed);
  for (int label : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == label) members.push_back(i);
    }
    if (members.empty()) {
      spdlog::warn("stratified_split: no trajectories with label {}", label);
      continue;
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < members.size(); ++k) {
      (k < n_train ? split.train : split.test).push_back(data[members[k]]);
    }
  }
  auto by_id = [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; };
  std::sort(split.train.begin(), split.train.end(), by_id);
  std::sort(split.test.begin(), split.test.end(), by_id);
  return split;
}

}  // namespace wstl::data
