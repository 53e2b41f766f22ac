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

#ifndef WSTL_DATA_DATASET_HPP_
#define WSTL_DATA_DATASET_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "wstl/core/predicate.hpp"
#include "wstl/core/trajectory.hpp"

namespace wstl::data {

/// Predicates followed by their negations, the channel order of the template.
std::vector<Literal> literal_channels(const std::vector<std::shared_ptr<const PredicateSpec>>& predicates);

/// (H+1) x literals.size() robustness of one trajectory. Errors name the
/// trajectory and timestep.
Eigen::MatrixXd robustness_channels(const std::vector<Literal>& literals, const Trajectory& tau);

/// Entry [n](t, k) is the robustness of literal k on trajectory n at step t.
using RobustnessTensor = std::vector<Eigen::MatrixXd>;

RobustnessTensor precompute_robustness(const TrajectorySet& data, const std::vector<Literal>& literals);

struct DatasetSplit {
  TrajectorySet train;
  TrajectorySet test;
  double split_fraction = 0.8;
  std::uint64_t seed = 0;
};

/// Per label: shuffle with `seed`, put round(fraction * n) into train. Both
/// halves are returned sorted by id. A label with no members only warns.
DatasetSplit stratified_split(const TrajectorySet& data, double fraction, std::uint64_t seed);

}  // namespace wstl::data

#endif  // WSTL_DATA_DATASET_HPP_
