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

#include "wstl/simplify/simplify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <tuple>

#include <spdlog/spdlog.h>

#include "wstl/core/render.hpp"
#include "wstl/data/dataset.hpp"
#include "wstl/numeric.hpp"

namespace wstl::simplify {

using tlnet::Clause;
using tlnet::index;
using tlnet::kClauses;

namespace {

enum class Sat { always, sometimes, never };

template <typename Column>
Sat classify(const Column& r) {
  const bool all = (r.array() >= 0.0).all();
  const bool any = (r.array() >= 0.0).any();
  return all ? Sat::always : (any ? Sat::sometimes : Sat::never);
}

RobustnessDistribution normalize_counts(std::array<std::size_t, 3> counts, std::size_t n) {
  const auto d = static_cast<double>(n);
  return {static_cast<double>(counts[0]) / d, static_cast<double>(counts[1]) / d, static_cast<double>(counts[2]) / d};
}

// Active entry in the joint F || G ordering; sorts by weight, then position.
struct Entry {
  double weight;
  std::size_t matrix;
  Eigen::Index row;
  Eigen::Index col;

  bool operator<(const Entry& o) const {
    return std::tie(weight, matrix, row, col) < std::tie(o.weight, o.matrix, o.row, o.col);
  }
};

std::vector<Entry> active_entries(const TlnetParams& params) {
  const auto active = params.active_scores();
  const auto w = tlnet::effective_weights<double>(params, active);
  std::vector<Entry> out;
  for (Clause c : kClauses) {
    const auto& m = params.masks[index(c)];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (m(i, j)) out.push_back({w[index(c)](i, j), index(c), i, j});
      }
    }
  }
  return out;
}

// Shifts the active scores of each matrix by their log-sum-exp, so that
// exp(score) equals the effective weight. Effective weights are unchanged.
void recenter(TlnetParams& params) {
  for (Clause c : kClauses) {
    auto& s = params.scores[index(c)];
    const auto& m = params.masks[index(c)];
    if (m.count() == 0) continue;
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (m(k)) hi = std::max(hi, s(k));
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (m(k)) total += std::exp(s(k) - hi);
    }
    const double lse = hi + std::log(total);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (m(k)) s(k) -= lse;
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RobustnessDistribution robustness_distribution(const TrajectorySet& data, const Literal& literal) {
  if (data.empty()) throw InputError("robustness_distribution: empty dataset");
  if (!literal.predicate) throw ConfigError("literal " + literal.key.to_string() + " is not bound to a predicate");
  std::array<std::size_t, 3> counts{};
  for (const auto& tau : data) {
    Eigen::VectorXd r(tau.states.rows());
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      r(t) = predicate_robustness(*literal.predicate, tau.states.row(t), literal.key.negated);
    }
    ++counts[static_cast<std::size_t>(classify(r))];
  }
  return normalize_counts(counts, data.size());
}

RobustnessDistribution robustness_distribution(std::span<const Eigen::MatrixXd> channels, Eigen::Index column) {
  if (channels.empty()) throw InputError("robustness_distribution: empty dataset");
  std::array<std::size_t, 3> counts{};
  for (const auto& m : channels) ++counts[static_cast<std::size_t>(classify(m.col(column)))];
  return normalize_counts(counts, channels.size());
}

double cosine_similarity(const RobustnessDistribution& a, const RobustnessDistribution& b) {
  const Eigen::Vector3d u(a.always_sat, a.sometimes_sat, a.never_sat);
  const Eigen::Vector3d v(b.always_sat, b.sometimes_sat, b.never_sat);
  return u.dot(v) / (u.norm() * v.norm());
}

void SimplifyConfig::validate() const {
  if (!(s_threshold >= -1.0 && s_threshold <= 1.0)) throw ConfigError("s_threshold must lie in [-1, 1]");
  if (n_weights_per_prune == 0) throw ConfigError("n_weights_per_prune must be positive");
}

FilterReport filter_predicates(const TrajectorySet& data,
                               const std::vector<std::shared_ptr<const PredicateSpec>>& predicates,
                               const SimplifyConfig& cfg) {
  cfg.validate();
  TrajectorySet pos, neg;
  for (const auto& tau : data) (tau.label == 1 ? pos : neg).push_back(tau);
  if (pos.empty() || neg.empty()) throw InputError("filter_predicates: needs positive and negative trajectories");
  FilterReport report;
  for (const auto& p : predicates) {
    FilterEntry e;
    e.predicate = p->id;
    const auto lit = Literal::of(p, false);
    e.positive = robustness_distribution(pos, lit);
    e.negative = robustness_distribution(neg, lit);
    e.similarity = cosine_similarity(e.positive, e.negative);
    e.retained = e.similarity < cfg.s_threshold;
    if (e.retained) report.retained.push_back(p);
    spdlog::debug("filter: '{}' similarity {:.4f} -> {}", p->id, e.similarity, e.retained ? "kept" : "removed");
    report.entries.push_back(std::move(e));
  }
  return report;
}

nlohmann::json to_json(const FilterReport& report) {
  auto dist = [](const RobustnessDistribution& d) {
    return nlohmann::json::array({d.always_sat, d.sometimes_sat, d.never_sat});
  };
  auto entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"predicate", e.predicate},
                       {"positive", dist(e.positive)},
                       {"negative", dist(e.negative)},
                       {"similarity", e.similarity},
                       {"retained", e.retained}});
  }
  auto retained = nlohmann::json::array();
  for (const auto& p : report.retained) retained.push_back(p->id);
  return {{"entries", std::move(entries)}, {"retained", std::move(retained)}};
}

PruneResult prune_step(const TlnetParams& params, const SimplifyConfig& cfg) {
  cfg.validate();
  PruneResult result{params, false, 0, 0};
  auto entries = active_entries(params);
  std::sort(entries.begin(), entries.end());

  auto next = params;
  std::array<std::size_t, 2> left{params.active_count(Clause::F), params.active_count(Clause::G)};
  auto drop = [&](const Entry& e) {
    next.masks[e.matrix](e.row, e.col) = false;
    --left[e.matrix];
  };
  std::size_t k = 0;
  for (; k < entries.size() && entries[k].weight < kZeroWeight; ++k) {
    drop(entries[k]);
    ++result.zeroed;
  }
  for (std::size_t n = 0; n < cfg.n_weights_per_prune && k < entries.size(); ++n, ++k) {
    drop(entries[k]);
    ++result.pruned;
  }
  if (left[0] == 0 || left[1] == 0) return {params, false, 0, 0};
  recenter(next);
  result.params = std::move(next);
  result.applied = true;
  return result;
}

TlnetParams topk_truncate(const TlnetParams& params, std::size_t k) {
  if (k == 0) throw ConfigError("topk_truncate: k must be positive");
  auto entries = active_entries(params);
  // Largest first; among equal weights the smallest position wins.
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.matrix, a.row, a.col) < std::tie(b.matrix, b.row, b.col);
  });
  auto out = params;
  for (std::size_t n = k; n < entries.size(); ++n) out.masks[entries[n].matrix](entries[n].row, entries[n].col) = false;
  recenter(out);
  return out;
}

double training_accuracy(const TlnetParams& params, std::span<const tlnet::LabeledTrace> traces,
                         const AggregationConfig& cfg) {
  if (traces.empty()) return 0.0;
  const auto active = params.active_scores();
  const auto w = tlnet::prepare_weights<double>(tlnet::effective_weights<double>(params, active));
  std::size_t hits = 0;
  for (const auto& tr : traces) {
    const double r = tlnet::template_forward<double>(w, tr.robustness, cfg);
    hits += (r >= 0.0 ? 1 : -1) == tr.label;
  }
  return static_cast<double>(hits) / static_cast<double>(traces.size());
}

Explanation run_pipeline(const TrajectorySet& train, const std::vector<std::shared_ptr<const PredicateSpec>>& predicates,
                         const tlnet::TrainConfig& train_cfg, const SimplifyConfig& simp_cfg) {
  train_cfg.validate();
  simp_cfg.validate();
  if (train.empty()) throw InputError("run_pipeline: empty training set");

  Explanation ex;
  ex.filter = filter_predicates(train, predicates, simp_cfg);
  if (ex.filter.retained.empty()) throw DegenerateDataError("no discriminating predicates");

  const auto literals = data::literal_channels(ex.filter.retained);
  std::vector<tlnet::LabeledTrace> traces;
  traces.reserve(train.size());
  for (const auto& tau : train) {
    traces.push_back({tau.id, tau.label, data::robustness_channels(literals, tau)});
    ex.horizon = std::max(ex.horizon, tau.horizon());
  }

  Rng init_rng(derive_seed(train_cfg.seed, 0));
  auto params = TlnetParams::initialize(ex.filter.retained, init_rng);

  auto run_stage = [&](std::string stage, std::size_t iteration, const PruneResult* pr) {
    const auto start = std::chrono::steady_clock::now();
    auto cfg = train_cfg;
    cfg.seed = derive_seed(train_cfg.seed, iteration + 1);
    auto opt = tlnet::optimize(params, traces, cfg);
    params = std::move(opt.params);
    StageRecord rec;
    rec.stage = std::move(stage);
    rec.iteration = iteration;
    rec.zeroed = pr ? pr->zeroed : 0;
    rec.pruned = pr ? pr->pruned : 0;
    rec.active_f = params.active_count(Clause::F);
    rec.active_g = params.active_count(Clause::G);
    rec.loss_before = opt.initial_loss;
    rec.loss_after = opt.final_loss;
    rec.train_accuracy = training_accuracy(params, traces, cfg.aggregation());
    rec.seconds = seconds_since(start);
    spdlog::info("{} {}: loss {:.5f} -> {:.5f}, train accuracy {:.3f}, active F {} G {}", rec.stage, iteration,
                 rec.loss_before, rec.loss_after, rec.train_accuracy, rec.active_f, rec.active_g);
    ex.history.push_back(std::move(rec));
  };

  run_stage("optimize", 0, nullptr);
  for (std::size_t it = 1; it <= simp_cfg.n_prune_iters; ++it) {
    auto pr = prune_step(params, simp_cfg);
    if (!pr.applied) break;
    params = std::move(pr.params);
    run_stage("prune", it, &pr);
    if (params.active_count(Clause::F) == 1 || params.active_count(Clause::G) == 1) break;
  }

  ex.complete = params.active_count(Clause::F) > 0 && params.active_count(Clause::G) > 0;
  ex.formula = tlnet::to_formula(params, ex.horizon);
  ex.canonical = to_canonical_string(ex.formula);
  ex.params = std::move(params);
  return ex;
}

nlohmann::json to_json(const StageRecord& r) {
  return {{"stage", r.stage},
          {"iteration", r.iteration},
          {"zeroed", r.zeroed},
          {"pruned", r.pruned},
          {"active_f", r.active_f},
          {"active_g", r.active_g},
          {"loss_before", r.loss_before},
          {"loss_after", r.loss_after},
          {"train_accuracy", r.train_accuracy},
          {"seconds", r.seconds}};
}

}  // namespace wstl::simplify
