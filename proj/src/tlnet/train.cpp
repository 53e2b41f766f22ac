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

#include "wstl/tlnet/train.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wstl::tlnet {

LossGradient loss_and_gradient(const TlnetParams& params, std::span<const LabeledTrace* const> batch,
                               const TrainConfig& cfg) {
  const auto scores = params.active_scores();
  auto rec = ad::forward_record(
      [&](std::span<const ad::Var> x) {
        auto w = prepare_weights<ad::Var>(effective_weights<ad::Var>(params, x));
        return total_loss<ad::Var>(w, batch, cfg);
      },
      scores);
  return {rec.value, ad::gradient(rec)};
}

OptimizeResult optimize(const TlnetParams& params, std::span<const LabeledTrace> data, const TrainConfig& cfg) {
  cfg.validate();
  params.validate();
  if (data.empty()) throw InputError("optimize: empty training set");

  std::vector<const LabeledTrace*> order;
  order.reserve(data.size());
  for (const auto& tr : data) order.push_back(&tr);

  OptimizeResult result{params, 0.0, 0.0, false, 0};
  result.initial_loss = total_loss(params, data, cfg);
  if (!std::isfinite(result.initial_loss)) throw NumericError("non-finite initial loss", 0, 0);
  result.final_loss = result.initial_loss;

  TlnetParams current = params;
  auto scores = current.active_scores();
  Rng rng(cfg.seed);
  const std::size_t batch = std::min(cfg.batch_size, data.size());

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0, start = 0; start < order.size(); ++b, start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      auto lg = loss_and_gradient(current, std::span(order).subspan(start, len), cfg);
      const bool finite = std::isfinite(lg.value) &&
                          std::all_of(lg.gradient.begin(), lg.gradient.end(), [](double g) { return std::isfinite(g); });
      if (!finite) throw NumericError("non-finite loss", static_cast<int>(epoch), static_cast<int>(b));
      for (std::size_t k = 0; k < scores.size(); ++k) scores[k] -= cfg.step_size * lg.gradient[k];
      current.set_active_scores(scores);
      ++result.steps;
    }
    spdlog::debug("epoch {} done after {} steps", epoch, result.steps);
  }
  if (cfg.epochs > 0) {
    const double loss = total_loss(current, data, cfg);
    if (!std::isfinite(loss)) throw NumericError("non-finite loss", static_cast<int>(cfg.epochs), -1);
    if (loss <= result.initial_loss) {
      result.final_loss = loss;
      result.params = std::move(current);
      result.improved = true;
    }
  }
  return result;
}

}  // namespace wstl::tlnet
