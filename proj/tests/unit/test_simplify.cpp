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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "support/oracle.hpp"
#include "wstl/data/dataset.hpp"
#include "wstl/data/generator.hpp"
#include "wstl/errors.hpp"
#include "wstl/metrics/metrics.hpp"
#include "wstl/simplify/simplify.hpp"

using namespace wstl;
using namespace wstl::simplify;
using tlnet::Clause;

namespace {

std::shared_ptr<const PredicateSpec> identity_predicate(std::string id, Eigen::Index index = 0) {
  PredicateSpec p;
  p.id = std::move(id);
  p.feature.id = "x" + std::to_string(index);
  p.feature.index = index;
  p.threshold = 0.0;
  p.sup = 1.0;
  p.inf = -1.0;
  return std::make_shared<const PredicateSpec>(p);
}

Trajectory scalar_trajectory(std::vector<double> xs, int label = 1, std::string id = "t") {
  Trajectory tau;
  tau.id = std::move(id);
  tau.label = label;
  tau.states.resize(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) tau.states(static_cast<Eigen::Index>(i), 0) = xs[i];
  return tau;
}

/// Params over one predicate with the given active scores for F and G,
/// entries listed as (row, col, score).
TlnetParams make_params(const std::vector<std::shared_ptr<const PredicateSpec>>& preds,
                        const std::vector<std::tuple<int, int, double>>& f,
                        const std::vector<std::tuple<int, int, double>>& g) {
  Rng rng(0);
  auto p = TlnetParams::initialize(preds, rng);
  for (int c = 0; c < 2; ++c) {
    p.masks[c].setConstant(false);
    p.scores[c].setZero();
    for (const auto& [i, j, s] : c == 0 ? f : g) {
      p.masks[c](i, j) = true;
      p.scores[c](i, j) = s;
    }
  }
  return p;
}

struct Entry {
  double weight;
  int matrix;
  Eigen::Index row, col;
};

std::vector<Entry> active_entries(const TlnetParams& p) {
  std::vector<Entry> out;
  for (int c = 0; c < 2; ++c) {
    const auto w = p.effective(static_cast<Clause>(c));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (p.masks[c](i, j)) out.push_back({w(i, j), c, i, j});
      }
    }
  }
  return out;
}

TrajectorySet small_reach_avoid(std::size_t per_class, std::uint64_t seed) {
  data::ReachAvoidConfig cfg;
  cfg.n_positive = cfg.n_negative = per_class;
  cfg.seed = seed;
  return data::generate_reach_avoid(cfg).trajectories;
}

}  // namespace

TEST_CASE("robustness distribution examples") {
  const auto a = identity_predicate("a");
  const auto lit = Literal::of(a);
  const TrajectorySet always{scalar_trajectory({0.1, 0.2}), scalar_trajectory({0.0, 0.0})};
  const auto d1 = robustness_distribution(always, lit);
  CHECK(d1.as_array() == std::array<double, 3>{1.0, 0.0, 0.0});
  const TrajectorySet halves{scalar_trajectory({0.1, 0.2}), scalar_trajectory({-0.1, -0.2})};
  CHECK(robustness_distribution(halves, lit).as_array() == std::array<double, 3>{0.5, 0.0, 0.5});
  const TrajectorySet mixed{scalar_trajectory({0.1, -0.2})};
  CHECK(robustness_distribution(mixed, lit).as_array() == std::array<double, 3>{0.0, 1.0, 0.0});
  CHECK(robustness_distribution(halves, Literal::of(a, true)).as_array() == std::array<double, 3>{0.5, 0.0, 0.5});
  CHECK_THROWS_AS(robustness_distribution(TrajectorySet{}, lit), InputError);
}

TEST_CASE("robustness distribution matches a brute-force scan") {
  Rng rng(31);
  const auto preds = oracle::random_predicates(rng, 3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    TrajectorySet data;
    for (int k = 0; k < 25; ++k) data.push_back(oracle::random_trajectory(rng, 1 + rng() % 4, 2));
    for (const auto& p : preds) {
      for (bool neg : {false, true}) {
        std::size_t all = 0, some = 0, none = 0;
        for (const auto& tau : data) {
          std::size_t sat = 0;
          for (std::size_t t = 0; t <= tau.horizon(); ++t) {
            auto r = oracle::predicate(*p, oracle::feature(*p, tau, t));
            if ((neg ? -r : r) >= 0.0L) ++sat;
          }
          (sat == tau.horizon() + 1 ? all : sat == 0 ? none : some) += 1;
        }
        const auto d = robustness_distribution(data, Literal::of(p, neg));
        CHECK(d.always_sat == doctest::Approx(all / 25.0));
        CHECK(d.sometimes_sat == doctest::Approx(some / 25.0));
        CHECK(d.never_sat == doctest::Approx(none / 25.0));
        CHECK(std::abs(d.always_sat + d.sometimes_sat + d.never_sat - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("cosine similarity and filter examples") {
  CHECK(cosine_similarity({1, 0, 0}, {0, 0, 1}) == 0.0);
  CHECK(cosine_similarity({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}) == doctest::Approx(1.0));

  const auto sep = identity_predicate("sep", 0);
  const auto con = identity_predicate("con", 1);
  TrajectorySet data;
  for (int k = 0; k < 10; ++k) {
    Trajectory tau;
    tau.id = "t" + std::to_string(k);
    tau.label = k % 2 ? 1 : -1;
    tau.states.resize(3, 2);
    tau.states.col(0).setConstant(0.5 * tau.label);
    tau.states.col(1).setConstant(0.9);
    data.push_back(tau);
  }
  SimplifyConfig cfg;
  const auto report = filter_predicates(data, {sep, con}, cfg);
  REQUIRE(report.entries.size() == 2);
  CHECK(report.entries[0].similarity == 0.0);
  CHECK(report.entries[0].retained);
  CHECK(report.entries[1].similarity == doctest::Approx(1.0));
  CHECK_FALSE(report.entries[1].retained);
  REQUIRE(report.retained.size() == 1);
  CHECK(report.retained[0]->id == "sep");

  TrajectorySet positives_only(data.begin(), data.begin() + 1);
  positives_only[0].label = 1;
  CHECK_THROWS_AS(filter_predicates(positives_only, {sep}, cfg), InputError);
}

TEST_CASE("filter is symmetric in the two classes") {
  Rng rng(33);
  const auto preds = oracle::random_predicates(rng, 4, 2);
  for (int trial = 0; trial < 30; ++trial) {
    TrajectorySet data;
    for (int k = 0; k < 20; ++k) data.push_back(oracle::random_trajectory(rng, 3, 2, k % 2 ? 1 : -1));
    SimplifyConfig cfg;
    cfg.s_threshold = uniform(rng, 0.5, 1.0);
    auto swapped = data;
    for (auto& tau : swapped) tau.label = -tau.label;
    const auto a = filter_predicates(data, preds, cfg);
    const auto b = filter_predicates(swapped, preds, cfg);
    REQUIRE(a.retained.size() == b.retained.size());
    for (std::size_t i = 0; i < a.retained.size(); ++i) CHECK(a.retained[i]->id == b.retained[i]->id);
  }
}

TEST_CASE("filter on reach-avoid data drops the constant predicate") {
  const auto data = small_reach_avoid(100, 4);
  const auto schema = data::reach_avoid_schema(data::ReachAvoidConfig{});
  const auto report = filter_predicates(data, schema.predicates, SimplifyConfig{});
  std::vector<std::string> kept;
  for (const auto& p : report.retained) kept.push_back(p->id);
  CHECK(kept == std::vector<std::string>{"goal", "hazard"});
  for (const auto& e : report.entries) {
    if (e.predicate == "gx") CHECK(e.similarity >= 0.99);
    if (e.predicate == "goal") CHECK(e.similarity < 0.99);
  }
}

TEST_CASE("prune_step examples") {
  const auto a = identity_predicate("a");
  const auto b = identity_predicate("b", 1);
  SimplifyConfig cfg;

  // F carries 0.9 / 0.1, G a single entry of weight 1.
  const auto p = make_params({a}, {{0, 0, std::log(0.9)}, {0, 1, std::log(0.1)}}, {{0, 0, 0.0}});
  const auto r = prune_step(p, cfg);
  CHECK(r.applied);
  CHECK(r.pruned == 1);
  CHECK(r.zeroed == 0);
  CHECK(r.params.masks[0](0, 0));
  CHECK_FALSE(r.params.masks[0](0, 1));
  CHECK(r.params.effective(Clause::F)(0, 0) == doctest::Approx(1.0));

  // Two entries below 1e-12 go regardless of N_w, then the smallest survivor.
  const auto z = make_params({a, b}, {{0, 0, 0.0}, {0, 1, 0.5}, {1, 0, -40.0}, {1, 3, -45.0}}, {{0, 0, 0.0}});
  const auto rz = prune_step(z, cfg);
  CHECK(rz.applied);
  CHECK(rz.zeroed == 2);
  CHECK(rz.pruned == 1);
  CHECK(rz.params.active_count(Clause::F) == 1);
  CHECK(rz.params.masks[0](0, 1));
}

TEST_CASE("prune_step breaks ties by matrix, row and column") {
  const auto a = identity_predicate("a");
  const auto b = identity_predicate("b", 1);
  SimplifyConfig cfg;
  // Four equal weights in each matrix.
  const auto p = make_params({a, b}, {{1, 2, 0.0}, {0, 3, 0.0}, {1, 0, 0.0}, {0, 1, 0.0}},
                             {{0, 0, 0.0}, {1, 1, 0.0}, {0, 2, 0.0}, {1, 3, 0.0}});
  const auto r = prune_step(p, cfg);
  REQUIRE(r.applied);
  CHECK_FALSE(r.params.masks[0](0, 1));
  CHECK(r.params.active_count(Clause::F) == 3);
  CHECK(r.params.active_count(Clause::G) == 4);

  // All eight weights are 0.25, so the five smallest are the four F entries
  // and G(0, 0); that would empty F and the step is refused.
  cfg.n_weights_per_prune = 5;
  CHECK_FALSE(prune_step(p, cfg).applied);
  cfg.n_weights_per_prune = 3;
  const auto r3 = prune_step(p, cfg);
  REQUIRE(r3.applied);
  CHECK(r3.params.active_count(Clause::F) == 1);
  CHECK(r3.params.masks[0](1, 2));
}

TEST_CASE("prune_step never empties a matrix") {
  const auto a = identity_predicate("a");
  const auto p = make_params({a}, {{0, 0, 0.0}}, {{0, 1, 0.0}});
  const auto r = prune_step(p, SimplifyConfig{});
  CHECK_FALSE(r.applied);
  CHECK(r.params.masks[0] == p.masks[0]);
  CHECK(r.params.masks[1] == p.masks[1]);
}

TEST_CASE("prune_step renormalizes and only ever shrinks the support") {
  Rng rng(35);
  const auto preds = oracle::random_predicates(rng, 3, 2);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_params(rng, preds, 0.8, 5.0);
    SimplifyConfig cfg;
    cfg.n_weights_per_prune = 1 + rng() % 3;
    for (int step = 0; step < 40; ++step) {
      const auto before = active_entries(p);
      const auto r = prune_step(p, cfg);
      if (!r.applied) break;
      for (Clause c : tlnet::kClauses) {
        const auto k = tlnet::index(c);
        // Monotone support: nothing is reactivated.
        CHECK(((r.params.masks[k].array() && !p.masks[k].array()).count()) == 0);
        const auto w = r.params.effective(c);
        CHECK(std::abs(w.sum() - 1.0) < 1e-9);
        CHECK(r.params.active_count(c) >= 1);
        // exp(score) is the renormalized weight.
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (r.params.masks[k](i, j)) CHECK(std::exp(r.params.scores[k](i, j)) == doctest::Approx(w(i, j)));
          }
        }
      }
      // The removed entries are the zeros plus the N_w smallest survivors.
      std::vector<Entry> sorted = before;
      std::sort(sorted.begin(), sorted.end(), [](const Entry& x, const Entry& y) {
        return std::tie(x.weight, x.matrix, x.row, x.col) < std::tie(y.weight, y.matrix, y.row, y.col);
      });
      std::size_t zeros = 0;
      while (zeros < sorted.size() && sorted[zeros].weight < kZeroWeight) ++zeros;
      const std::size_t removed = zeros + std::min<std::size_t>(cfg.n_weights_per_prune, sorted.size() - zeros);
      CHECK(r.zeroed == zeros);
      CHECK(r.params.active_count() == before.size() - removed);
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        const auto& e = sorted[k];
        CHECK(r.params.masks[e.matrix](e.row, e.col) == (k >= removed));
      }
      p = r.params;
    }
  }
}

TEST_CASE("topk_truncate") {
  Rng rng(37);
  const auto preds = oracle::random_predicates(rng, 3, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = oracle::random_params(rng, preds, 0.7, 3.0);
    const auto big = topk_truncate(p, p.active_count() + trial % 3);
    CHECK(big.masks[0] == p.masks[0]);
    CHECK(big.masks[1] == p.masks[1]);

    const auto one = topk_truncate(p, 1);
    CHECK(one.active_count() == 1);

    const auto three = topk_truncate(p, 3);
    auto entries = active_entries(p);
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
      if (x.weight != y.weight) return x.weight > y.weight;
      return std::tie(x.matrix, x.row, x.col) < std::tie(y.matrix, y.row, y.col);
    });
    const std::size_t keep = std::min<std::size_t>(3, entries.size());
    CHECK(three.active_count() == keep);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      CHECK(three.masks[entries[k].matrix](entries[k].row, entries[k].col) == (k < keep));
    }
    for (Clause c : tlnet::kClauses) {
      if (three.active_count(c) > 0) CHECK(std::abs(three.effective(c).sum() - 1.0) < 1e-9);
    }
  }
  CHECK_THROWS_AS(topk_truncate(oracle::random_params(rng, preds), 0), ConfigError);
}

TEST_CASE("topk_truncate with k=1 renders a single-literal explanation") {
  Rng rng(38);
  const auto preds = oracle::random_predicates(rng, 2, 2);
  const auto p = topk_truncate(oracle::random_params(rng, preds), 1);
  const auto view = metrics::explanation_view(tlnet::to_formula(p, 3));
  CHECK(view.slots[0].literal_count() + view.slots[1].literal_count() == 1);
  CHECK(view.slots[0].present != view.slots[1].present);
}

TEST_CASE("pipeline without pruning rounds equals plain optimization") {
  const auto data = small_reach_avoid(30, 1);
  const auto schema = data::reach_avoid_schema(data::ReachAvoidConfig{});
  tlnet::TrainConfig tc;
  tc.epochs = 3;
  tc.seed = 9;
  SimplifyConfig sc;
  sc.n_prune_iters = 0;
  const auto ex = run_pipeline(data, schema.predicates, tc, sc);
  CHECK(ex.history.size() == 1);

  const auto filtered = filter_predicates(data, schema.predicates, sc);
  Rng init(derive_seed(9, 0));
  const auto p0 = TlnetParams::initialize(filtered.retained, init);
  std::vector<tlnet::LabeledTrace> traces;
  const auto literals = data::literal_channels(filtered.retained);
  for (const auto& tau : data) traces.push_back({tau.id, tau.label, data::robustness_channels(literals, tau)});
  auto cfg = tc;
  cfg.seed = derive_seed(9, 1);
  const auto opt = tlnet::optimize(p0, traces, cfg);
  CHECK(ex.params.scores[0] == opt.params.scores[0]);
  CHECK(ex.params.scores[1] == opt.params.scores[1]);
  CHECK(ex.canonical == to_canonical_string(tlnet::to_formula(opt.params, 50)));
  CHECK(ex.horizon == 50);
}

TEST_CASE("pipeline on reach-avoid data finds the goal in the F clause") {
  const auto data = small_reach_avoid(60, 2);
  const auto schema = data::reach_avoid_schema(data::ReachAvoidConfig{});
  tlnet::TrainConfig tc;
  tc.epochs = 5;
  SimplifyConfig sc;
  sc.n_prune_iters = 20;
  const auto ex = run_pipeline(data, schema.predicates, tc, sc);
  const auto view = metrics::explanation_view(ex.formula);
  bool goal_in_f = false;
  for (const auto& clause : view.slots[0].clauses) {
    goal_in_f |= std::find(clause.begin(), clause.end(), LiteralKey{"goal", false}) != clause.end();
  }
  CHECK(goal_in_f);
  CHECK(ex.history.size() <= sc.n_prune_iters + 1);
  CHECK(ex.complete);
  for (std::size_t i = 1; i < ex.history.size(); ++i) {
    CHECK(ex.history[i].active_f + ex.history[i].active_g < ex.history[i - 1].active_f + ex.history[i - 1].active_g);
  }
  // Byte-identical on a second run.
  CHECK(run_pipeline(data, schema.predicates, tc, sc).canonical == ex.canonical);
}

TEST_CASE("pipeline terminates within the pruning budget on random data") {
  Rng rng(39);
  for (int trial = 0; trial < 5; ++trial) {
    const auto preds = oracle::random_predicates(rng, 2 + trial % 2, 2);
    TrajectorySet data;
    for (int k = 0; k < 16; ++k) data.push_back(oracle::random_trajectory(rng, 3, 2, k % 2 ? 1 : -1, std::to_string(k)));
    tlnet::TrainConfig tc;
    tc.epochs = 1;
    SimplifyConfig sc;
    sc.s_threshold = 1.0;
    sc.n_prune_iters = 1 + trial;
    const auto ex = run_pipeline(data, preds, tc, sc);
    CHECK(ex.history.size() <= sc.n_prune_iters + 1);
  }
}

TEST_CASE("pipeline reports degenerate data") {
  const auto con = identity_predicate("con");
  TrajectorySet data{scalar_trajectory({0.5, 0.5}, 1, "a"), scalar_trajectory({0.5, 0.5}, -1, "b")};
  CHECK_THROWS_AS(run_pipeline(data, {con}, tlnet::TrainConfig{}, SimplifyConfig{}), DegenerateDataError);
}

TEST_CASE("SimplifyConfig validation") {
  SimplifyConfig cfg;
  cfg.s_threshold = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimplifyConfig{};
  cfg.n_weights_per_prune = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
