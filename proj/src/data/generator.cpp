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

#include "wstl/data/generator.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wstl/numeric.hpp"

namespace wstl::data {

namespace {

constexpr int kMaxAttempts = 200;
// Clearance the positive walker keeps from the hazard boundary.
constexpr double kClearance = 0.05;
// Distance from the hazard boundary at which steering starts.
constexpr double kInfluence = 0.3;
constexpr double kHeadingNoise = 0.15;

bool inside_box(const Eigen::Vector2d& p, double half) { return p.cwiseAbs().maxCoeff() <= half; }

Eigen::Vector2d clip(const Eigen::Vector2d& p, double half) { return p.cwiseMax(-half).cwiseMin(half); }

Eigen::Vector2d heading(double angle) { return {std::cos(angle), std::sin(angle)}; }

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

struct Rollout {
  StateMatrix states;
  bool entered_goal = false;
  bool entered_hazard = false;
};

class Environment {
 public:
  explicit Environment(const ReachAvoidConfig& cfg) : cfg_(cfg) {}

  Eigen::Vector2d sample_start(Rng& rng) const {
    const double j = cfg_.start_jitter;
    return cfg_.start + Eigen::Vector2d(uniform(rng, -j, j), uniform(rng, -j, j));
  }

  Rollout record(const std::vector<Eigen::Vector2d>& path) const {
    Rollout r;
    r.states.resize(static_cast<Eigen::Index>(path.size()), 6);
    for (std::size_t t = 0; t < path.size(); ++t) {
      const auto row = static_cast<Eigen::Index>(t);
      r.states.row(row) << path[t].x(), path[t].y(), cfg_.goal.x(), cfg_.goal.y(), cfg_.hazard.x(), cfg_.hazard.y();
      r.entered_goal |= (path[t] - cfg_.goal).norm() <= cfg_.goal_radius;
      r.entered_hazard |= (path[t] - cfg_.hazard).norm() <= cfg_.hazard_radius;
    }
    return r;
  }

  // Heads for the goal; near the hazard the heading bends onto the tangent
  // that points goal-wards, plus a push away from the center. Once inside
  // the goal the agent drifts around its center.
  std::vector<Eigen::Vector2d> navigate(Rng& rng) const {
    std::vector<Eigen::Vector2d> path{sample_start(rng)};
    const double side = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    const double hold = 0.5 * cfg_.goal_radius;
    for (std::size_t t = 0; t < cfg_.horizon; ++t) {
      const Eigen::Vector2d p = path.back();
      const Eigen::Vector2d to_goal = cfg_.goal - p;
      const double d = to_goal.norm();
      if (d <= hold) {
        Eigen::Vector2d q = p + 0.25 * hold * heading(uniform(rng, 0.0, 2.0 * std::numbers::pi));
        if ((q - cfg_.goal).norm() > hold) q = cfg_.goal + hold * (q - cfg_.goal).normalized();
        path.push_back(q);
        continue;
      }
      Eigen::Vector2d dir = to_goal / d;
      const Eigen::Vector2d rel = p - cfg_.hazard;
      const double dh = rel.norm();
      const double reach = cfg_.hazard_radius + kClearance + kInfluence;
      if (dh < reach) {
        const Eigen::Vector2d n = rel / dh;
        Eigen::Vector2d tangent(-n.y(), n.x());
        const double along = tangent.dot(dir);
        if (std::abs(along) < 1e-3 ? side < 0.0 : along < 0.0) tangent = -tangent;
        const double alpha = std::clamp((reach - dh) / kInfluence, 0.0, 1.0);
        dir = ((1.0 - alpha) * dir + alpha * (tangent + 0.5 * n)).normalized();
      }
      dir = rotate(dir, kHeadingNoise * uniform(rng, -1.0, 1.0));
      path.push_back(clip(p + std::min(cfg_.step, d) * dir, cfg_.arena));
    }
    return path;
  }

  std::vector<Eigen::Vector2d> random_walk(Rng& rng) const {
    std::vector<Eigen::Vector2d> path{sample_start(rng)};
    for (std::size_t t = 0; t < cfg_.horizon; ++t) {
      const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      path.push_back(clip(path.back() + cfg_.step * heading(angle), cfg_.arena));
    }
    return path;
  }

 private:
  const ReachAvoidConfig& cfg_;
};

}  // namespace

void ReachAvoidConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("reach-avoid geometry: " + what); };
  if (!(arena > 0.0)) fail("arena half-width must be positive");
  if (!(goal_radius > 0.0) || !(hazard_radius > 0.0)) fail("region radii must be positive");
  if (!(step > 0.0)) fail("step size must be positive");
  if (horizon < 1) fail("horizon must be at least 1");
  if (!inside_box(goal, arena - goal_radius)) fail("goal region leaves the arena");
  if (!inside_box(hazard, arena - hazard_radius)) fail("hazard region leaves the arena");
  if ((goal - hazard).norm() <= goal_radius + hazard_radius) fail("goal and hazard regions overlap");
  if (start_jitter < 0.0 || !inside_box(start, arena - start_jitter)) fail("start area leaves the arena");
  const double corner = std::sqrt(2.0) * start_jitter;
  if ((start - goal).norm() <= goal_radius + corner) fail("start area touches the goal");
  if ((start - hazard).norm() <= hazard_radius + kClearance + corner) fail("start area touches the hazard");
}

GeneratedData generate_reach_avoid(const ReachAvoidConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Environment env(cfg);
  GeneratedData out;
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < cfg.n_positive; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) {
        throw ConfigError("reach-avoid geometry: positive walker cannot reach the goal around the hazard");
      }
      auto path = env.navigate(rng);
      const bool ends_in_goal = (path.back() - cfg.goal).norm() <= cfg.goal_radius;
      auto r = env.record(path);
      if (!ends_in_goal || r.entered_hazard) {
        ++rejected;
        continue;
      }
      out.trajectories.push_back({fmt::format("pos-{:04d}", i), 1, std::move(r.states)});
      break;
    }
  }
  std::size_t neg_goal = 0, neg_hazard = 0;
  for (std::size_t i = 0; i < cfg.n_negative; ++i) {
    auto r = env.record(env.random_walk(rng));
    neg_goal += r.entered_goal;
    neg_hazard += r.entered_hazard;
    out.trajectories.push_back({fmt::format("neg-{:04d}", i), -1, std::move(r.states)});
  }
  std::sort(out.trajectories.begin(), out.trajectories.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });

  auto frac = [](std::size_t k, std::size_t n) { return n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n); };
  out.manifest = {
      {"generator", "reach_avoid"},
      {"config", to_json(cfg)},
      {"counts", {{"positive", cfg.n_positive}, {"negative", cfg.n_negative}}},
      {"positive_rejections", rejected},
      {"negative_goal_fraction", frac(neg_goal, cfg.n_negative)},
      {"negative_hazard_fraction", frac(neg_hazard, cfg.n_negative)},
  };
  return out;
}

Schema reach_avoid_schema(const ReachAvoidConfig& cfg, bool with_constant) {
  const double diameter = 2.0 * std::sqrt(2.0) * cfg.arena;
  nlohmann::json j{
      {"state_dimension", 6},
      {"slices", {{"agent", {0, 2}}, {"goal", {2, 2}}, {"hazard", {4, 2}}}},
      {"features",
       {{{"id", "d_goal"}, {"kind", "distance"}, {"a", "agent"}, {"b", "goal"}, {"scale", -1.0}},
        {{"id", "d_hazard"}, {"kind", "distance"}, {"a", "agent"}, {"b", "hazard"}, {"scale", -1.0}},
        {{"id", "goal_x"}, {"kind", "coordinate"}, {"index", 2}, {"scale", 1.0}}}},
      {"predicates",
       {{{"id", "goal"}, {"feature", "d_goal"}, {"threshold", -cfg.goal_radius}, {"sup", 0.0}, {"inf", -diameter}},
        {{"id", "hazard"},
         {"feature", "d_hazard"},
         {"threshold", -cfg.hazard_radius},
         {"sup", 0.0},
         {"inf", -diameter}}}},
  };
  if (with_constant) {
    j["predicates"].push_back(
        {{"id", "gx"}, {"feature", "goal_x"}, {"threshold", 0.0}, {"sup", cfg.arena}, {"inf", -cfg.arena}});
  }
  return schema_from_json(j);
}

nlohmann::json to_json(const ReachAvoidConfig& cfg) {
  return {
      {"arena", cfg.arena},
      {"start", {cfg.start.x(), cfg.start.y()}},
      {"start_jitter", cfg.start_jitter},
      {"goal", {cfg.goal.x(), cfg.goal.y()}},
      {"goal_radius", cfg.goal_radius},
      {"hazard", {cfg.hazard.x(), cfg.hazard.y()}},
      {"hazard_radius", cfg.hazard_radius},
      {"step", cfg.step},
      {"horizon", cfg.horizon},
      {"n_positive", cfg.n_positive},
      {"n_negative", cfg.n_negative},
      {"seed", cfg.seed},
  };
}

}  // namespace wstl::data
