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

// Trajectory wire format: JSON Lines, one object per trajectory,
//
//   {"id": "pos-0007", "label": 1, "states": [[x0, y0, ...], [x1, y1, ...], ...]}
//
// Blank lines are ignored. Loaded sets are sorted by id.

#ifndef WSTL_DATA_IO_HPP_
#define WSTL_DATA_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "wstl/core/trajectory.hpp"
#include "wstl/data/schema.hpp"

namespace wstl::data {

/// Throws ParseError (with the 1-based line number) on malformed records,
/// labels other than +-1, fewer than two states, ragged states, a state
/// dimension different from `dimension`, or duplicate ids.
TrajectorySet read_dataset(std::istream& in, Eigen::Index dimension);
TrajectorySet load_dataset(const std::filesystem::path& path, const Schema& schema);

void write_dataset(std::ostream& out, const TrajectorySet& data);
void save_dataset(const std::filesystem::path& path, const TrajectorySet& data);

/// One row per timestep: id,label,t,s0,s1,...
void export_csv(const std::filesystem::path& path, const TrajectorySet& data);

}  // namespace wstl::data

#endif  // WSTL_DATA_IO_HPP_
