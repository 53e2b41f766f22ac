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

#include "wstl/core/predicate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include <spdlog/spdlog.h>

namespace wstl {

namespace {

// Out-of-bounds values tend to come in bursts (a whole trajectory is off the
// declared map); log the first few and then go quiet.
std::atomic<int> g_clamp_warnings{0};
constexpr int kMaxClampWarnings = 8;

void warn_clamped(const PredicateSpec& p, double value) {
  const int n = g_clamp_warnings.fetch_add(1, std::memory_order_relaxed);
  if (n < kMaxClampWarnings) {
    spdlog::warn("predicate '{}': feature value {} outside declared bounds [{}, {}], clamping robustness",
                 p.id, value, p.inf, p.sup);
  } else if (n == kMaxClampWarnings) {
    spdlog::warn("further out-of-bounds predicate warnings suppressed");
  }
}

}  // namespace

Eigen::Index FeatureMap::required_dimension() const {
  if (kind == Kind::distance) {
    return std::max(a.offset + a.length, b.offset + b.length);
  }
  return index + 1;
}

void PredicateSpec::validate() const {
  if (!(std::isfinite(inf) && std::isfinite(sup) && std::isfinite(threshold))) {
    throw ConfigError("predicate '" + id + "': bounds and threshold must be finite");
  }
  if (!(inf < threshold && threshold < sup)) {
    throw ConfigError("predicate '" + id + "': requires inf < c < sup");
  }
  if (feature.kind == FeatureMap::Kind::distance && feature.a.length != feature.b.length) {
    throw ConfigError("predicate '" + id + "': distance slices differ in length");
  }
}

double normalized_robustness(const PredicateSpec& p, double feature_value) {
  const double margin = feature_value - p.threshold;
  // Both branches are normalized by a positive span so the sign of the
  // result follows satisfaction.
  double r = margin >= 0.0 ? margin / (p.sup - p.threshold) : margin / (p.threshold - p.inf);
  if (r > 1.0 || r < -1.0) {
    warn_clamped(p, feature_value);
    r = std::clamp(r, -1.0, 1.0);
  }
  return r;
}

std::string LiteralKey::to_string() const { return (negated ? "¬ψ_" : "ψ_") + id; }

}  // namespace wstl
