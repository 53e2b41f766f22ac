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

#ifndef WSTL_CORE_TRAJECTORY_HPP_
#define WSTL_CORE_TRAJECTORY_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace wstl {

/// One state per row, s_0 ... s_H.
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Trajectory {
  std::string id;
  int label = 1;
  StateMatrix states;

  std::size_t horizon() const { return states.rows() == 0 ? 0 : static_cast<std::size_t>(states.rows() - 1); }
  Eigen::Index dimension() const { return states.cols(); }
};

using TrajectorySet = std::vector<Trajectory>;

}  // namespace wstl

#endif  // WSTL_CORE_TRAJECTORY_HPP_
