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

#ifndef WSTL_TLNET_TRAIN_HPP_
#define WSTL_TLNET_TRAIN_HPP_

#include <span>
#include <vector>

#include "wstl/tlnet/model.hpp"

namespace wstl::tlnet {

struct LossGradient {
  double value = 0.0;
  /// d loss / d active score, in TlnetParams::active_scores() order.
  std::vector<double> gradient;
};

/// Records total_loss on a fresh tape and sweeps it once.
LossGradient loss_and_gradient(const TlnetParams& params, std::span<const LabeledTrace* const> batch,
                               const TrainConfig& cfg);

struct OptimizeResult {
  TlnetParams params;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  /// False when training did not lower the loss and the input was returned.
  bool improved = false;
  std::size_t steps = 0;
};

/// Minibatch gradient descent on the active scores. Batches are drawn from
/// a shuffle seeded with cfg.seed. The full training loss is evaluated before
/// and after training and the better parameters are returned, so
/// final_loss <= initial_loss. Throws NumericError naming the epoch and
/// batch when a loss or gradient turns non-finite.
OptimizeResult optimize(const TlnetParams& params, std::span<const LabeledTrace> data, const TrainConfig& cfg);

}  // namespace wstl::tlnet

#endif  // WSTL_TLNET_TRAIN_HPP_
