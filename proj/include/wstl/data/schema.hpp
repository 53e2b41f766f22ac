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

#ifndef WSTL_DATA_SCHEMA_HPP_
#define WSTL_DATA_SCHEMA_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "wstl/core/predicate.hpp"
#include "wstl/core/render.hpp"
#include "wstl/core/trajectory.hpp"

namespace wstl::data {

/// Predicate and feature declarations for one state layout.
///
///   {
///     "state_dimension": 6,
///     "slices": {"agent": [0, 2], "goal": [2, 2]},
///     "features": [{"id": "d_goal", "kind": "distance", "a": "agent", "b": "goal", "scale": -1}],
///     "predicates": [{"id": "goal", "feature": "d_goal", "threshold": -0.1, "sup": 0, "inf": -2.9}]
///   }
///
/// Coordinate features use {"kind": "coordinate", "index": i}.
struct Schema {
  Eigen::Index state_dimension = 0;
  std::map<std::string, StateSlice> slices;
  std::vector<FeatureMap> features;
  std::vector<std::shared_ptr<const PredicateSpec>> predicates;
  /// Set when the predicate bounds were estimated from data.
  bool bounds_from_data = false;

  PredicateRegistry registry() const;
  std::shared_ptr<const PredicateSpec> predicate(const std::string& id) const;
};

/// Throws ConfigError on unknown slices or features, bad bounds, or a
/// feature reading past state_dimension.
Schema schema_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Schema& schema);

Schema load_schema(const std::filesystem::path& path);
void save_schema(const std::filesystem::path& path, const Schema& schema);

/// Replaces every predicate's [inf, sup] by the observed feature range over
/// `data`, widened by `margin` times its width on each side and extended to
/// keep the threshold strictly inside.
Schema with_bounds_from_data(const Schema& schema, const TrajectorySet& data, double margin = 0.05);

}  // namespace wstl::data

#endif  // WSTL_DATA_SCHEMA_HPP_
