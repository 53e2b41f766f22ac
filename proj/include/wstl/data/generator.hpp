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

// Synthetic planar reach-avoid environment. The state is
//
//   [agent_x, agent_y, goal_x, goal_y, hazard_x, hazard_y]
//
// in a square arena [-arena, arena]^2. Positives steer to the goal around
// the hazard and hold there; negatives random-walk from the same start area.

#ifndef WSTL_DATA_GENERATOR_HPP_
#define WSTL_DATA_GENERATOR_HPP_

#include <Eigen/Core>

#include <cstdint>

#include "json.hpp"

#include "wstl/core/trajectory.hpp"
#include "wstl/data/schema.hpp"

namespace wstl::data {

struct ReachAvoidConfig {
  double arena = 1.0;
  Eigen::Vector2d start{-0.7, -0.7};
  double start_jitter = 0.1;
  Eigen::Vector2d goal{0.7, 0.7};
  double goal_radius = 0.1;
  Eigen::Vector2d hazard{-0.3, -0.3};
  double hazard_radius = 0.25;
  double step = 0.1;
  std::size_t horizon = 50;
  std::size_t n_positive = 500;
  std::size_t n_negative = 500;
  std::uint64_t seed = 0;

  /// Throws ConfigError when the regions leave the arena, overlap, or the
  /// start area touches either region.
  void validate() const;
};

struct GeneratedData {
  TrajectorySet trajectories;
  /// Counts, parameters, and the fractions of negatives that reach the
  /// goal or enter the hazard.
  nlohmann::json manifest;
};

/// Deterministic in cfg. Throws ConfigError when the positive walker cannot
/// produce a valid rollout within its retry budget.
GeneratedData generate_reach_avoid(const ReachAvoidConfig& cfg);

/// Predicates "goal" (agent inside the goal), "hazard" (agent inside the
/// hazard) and, when `with_constant`, "gx" (goal_x >= 0), which holds on
/// every state and so carries no class information.
Schema reach_avoid_schema(const ReachAvoidConfig& cfg, bool with_constant = true);

nlohmann::json to_json(const ReachAvoidConfig& cfg);

}  // namespace wstl::data

#endif  // WSTL_DATA_GENERATOR_HPP_
