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

#include <cmath>

#include "support/oracle.hpp"
#include "wstl/errors.hpp"
#include "wstl/metrics/metrics.hpp"

using namespace wstl;
using namespace wstl::metrics;

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

WstlFormula lit(const std::string& id, bool negated = false) {
  return WstlFormula::literal(Literal::of(identity_predicate(id), negated));
}

const Interval kI{0, 3};

/// F[body] AND G[body] with 0.5 / 0.5; a missing body drops the clause.
WstlFormula explanation(std::optional<WstlFormula> f, std::optional<WstlFormula> g) {
  std::vector<WstlFormula> parts;
  if (f) parts.push_back(WstlFormula::eventually(kI, *f));
  if (g) parts.push_back(WstlFormula::globally(kI, *g));
  if (parts.size() == 1) return parts.front();
  return WstlFormula::conjunction({0.5, 0.5}, std::move(parts));
}

/// Random weighted CNF over literals drawn from `n_ids` ids.
WstlFormula random_cnf(Rng& rng, std::size_t n_ids) {
  const auto clauses = 1 + rng() % 3;
  std::vector<WstlFormula> cs;
  for (std::size_t i = 0; i < clauses; ++i) {
    const auto k = 1 + rng() % 3;
    std::vector<WstlFormula> ls;
    for (std::size_t j = 0; j < k; ++j) ls.push_back(lit("p" + std::to_string(rng() % n_ids), rng() % 2 == 1));
    cs.push_back(WstlFormula::disjunction(oracle::random_simplex(rng, k), std::move(ls)));
  }
  return WstlFormula::conjunction(oracle::random_simplex(rng, clauses), std::move(cs));
}

WstlFormula random_explanation(Rng& rng, std::size_t n_ids) {
  const auto shape = rng() % 4;
  std::optional<WstlFormula> f, g;
  if (shape != 1) f = random_cnf(rng, n_ids);
  if (shape != 2) g = random_cnf(rng, n_ids);
  if (!f && !g) f = random_cnf(rng, n_ids);
  return explanation(f, g);
}

}  // namespace

TEST_CASE("strictness worked example") {
  // F[(0.5 psi0 OR 0.25 psi1) AND 0.25 psi2] with P = 6: C = 1, D = 1.
  const auto body = WstlFormula::conjunction(
      {0.75, 0.25}, {WstlFormula::disjunction({0.5 / 0.75, 0.25 / 0.75}, {lit("0"), lit("1")}), lit("2")});
  const auto view = explanation_view(WstlFormula::eventually(kI, body));
  const auto& f = view.slot(Clause::F);
  CHECK(f.present);
  CHECK(f.conjunction_count() == 1);
  CHECK(f.disjunction_count() == 1);
  CHECK(f.literal_count() == 3);
  CHECK(clause_strictness(f, 6) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(std::round(clause_strictness(f, 6) * 1000) / 1000 == 0.167);
  CHECK(strictness(view, 6) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("strictness of simple clauses") {
  const auto single = explanation_view(WstlFormula::eventually(kI, lit("a")));
  CHECK(clause_strictness(single.slot(Clause::F), 6) == doctest::Approx(1.0 / 6.0));
  CHECK(clause_strictness(single.slot(Clause::G), 6) == 0.0);
  CHECK_THROWS_AS(strictness(single, 0), ConfigError);
  // Three conjoined single-literal clauses with P = 2 give 2 - 2 + 0 = 0.
  const auto tight = explanation_view(
      WstlFormula::eventually(kI, WstlFormula::conjunction({0.3, 0.3, 0.4}, {lit("a"), lit("b"), lit("c")})));
  CHECK_THROWS_AS(clause_strictness(tight.slot(Clause::F), 2), StructuralError);
}

TEST_CASE("STL counterpart worked example") {
  const auto g = WstlFormula::globally(kI, WstlFormula::conjunction({0.1, 0.9}, {lit("1"), lit("2")}));
  const auto c = stl_counterpart(g);
  CHECK_FALSE(c.present[0]);
  CHECK(c.present[1]);
  const ClauseStructure expected{{LiteralKey{"1", false}}, {LiteralKey{"2", false}}};
  CHECK(c.slots[1] == expected);
  CHECK(c.slots[0].empty());
  CHECK(c.to_string() == "F(∅) ∧ G(ψ_1 ∧ ψ_2)");
}

TEST_CASE("STL counterparts compare as sets of sets") {
  const auto a = WstlFormula::globally(
      kI, WstlFormula::conjunction({0.2, 0.8}, {WstlFormula::disjunction({0.5, 0.5}, {lit("x"), lit("y", true)}), lit("z")}));
  const auto b = WstlFormula::globally(
      kI, WstlFormula::conjunction({0.6, 0.4}, {lit("z"), WstlFormula::disjunction({0.9, 0.1}, {lit("y", true), lit("x")})}));
  CHECK(stl_counterpart(a) == stl_counterpart(b));
  const auto c = WstlFormula::globally(kI, WstlFormula::conjunction({0.6, 0.4}, {lit("z"), lit("x")}));
  CHECK_FALSE(stl_counterpart(a) == stl_counterpart(c));
  const auto d = WstlFormula::globally(kI, WstlFormula::conjunction({0.5, 0.5}, {lit("z"), lit("z", true)}));
  CHECK_FALSE(stl_counterpart(c) == stl_counterpart(d));
}

TEST_CASE("explanation_view rejects other shapes") {
  CHECK_THROWS_AS(explanation_view(WstlFormula::disjunction({0.5, 0.5}, {WstlFormula::eventually(kI, lit("a")),
                                                                         WstlFormula::globally(kI, lit("a"))})),
                  StructuralError);
  CHECK_THROWS_AS(explanation_view(WstlFormula::conjunction({0.5, 0.5}, {WstlFormula::eventually(kI, lit("a")),
                                                                         WstlFormula::eventually(kI, lit("b"))})),
                  StructuralError);
  CHECK_THROWS_AS(explanation_view(WstlFormula::eventually(kI, WstlFormula::globally(kI, lit("a")))), StructuralError);
  CHECK_THROWS_AS(explanation_view(WstlFormula::conjunction({0.5, 0.5}, {WstlFormula::eventually(kI, lit("a")), lit("b")})),
                  StructuralError);
}

TEST_CASE("conciseness examples") {
  CHECK(conciseness(explanation_view(explanation(lit("a"), lit("b")))) == 1.0);
  const auto g2 = WstlFormula::disjunction({0.5, 0.5}, {lit("a"), lit("b")});
  CHECK(conciseness(explanation_view(explanation(std::nullopt, g2))) == 0.25);
  CHECK(conciseness(explanation_view(explanation(lit("a"), g2))) == 0.75);
  // Repeated literals count every occurrence.
  const auto dup = WstlFormula::conjunction({0.5, 0.5}, {lit("a"), lit("a")});
  CHECK(conciseness(explanation_view(explanation(dup, std::nullopt))) == 0.25);
  CHECK_THROWS_AS(conciseness(explanation_view(explanation(lit("a"), lit("b"))), 0), ConfigError);
}

TEST_CASE("conciseness decreases strictly with the literal count") {
  const auto g = lit("g");
  double previous = 2.0;
  for (std::size_t m = 1; m <= 8; ++m) {
    std::vector<WstlFormula> ls;
    for (std::size_t k = 0; k < m; ++k) ls.push_back(lit("p" + std::to_string(k)));
    const auto f = WstlFormula::disjunction(std::vector<double>(m, 1.0 / static_cast<double>(m)), std::move(ls));
    const double c = conciseness(explanation_view(explanation(f, g)));
    CHECK(c < previous);
    CHECK(c == doctest::Approx((1.0 / static_cast<double>(m) + 1.0) / 2.0));
    previous = c;
  }
}

TEST_CASE("consistency examples") {
  const auto a = lit("a");
  const auto b = lit("b");
  const auto run_a = explanation_view(explanation(a, b));
  std::vector<ExplanationView> identical(4, run_a);
  CHECK(consistency(identical) == 1.0);
  const auto run_b = explanation_view(explanation(b, b));
  const std::vector<ExplanationView> mixed{run_a, run_a, run_b, run_b};
  CHECK(consistency(mixed) == doctest::Approx(0.625));
  const auto no_f = explanation_view(explanation(std::nullopt, b));
  const std::vector<ExplanationView> missing{no_f, no_f, no_f};
  CHECK(consistency(missing) == 0.5);
  const std::vector<ExplanationView> one{run_a};
  CHECK(consistency(one) == 1.0);
  CHECK_THROWS_AS(consistency(std::vector<ExplanationView>{}), InputError);
}

TEST_CASE("metric ranges and the consistency characterization under fuzzing") {
  Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + rng() % 5;
    const std::size_t ids = 1 + rng() % 3;
    std::vector<ExplanationView> runs;
    for (std::size_t r = 0; r < k; ++r) runs.push_back(explanation_view(random_explanation(rng, ids)));
    const double cons = consistency(runs);
    CHECK(cons >= 0.0);
    CHECK(cons <= 1.0);
    bool identical_and_complete = true;
    for (const auto& r : runs) {
      identical_and_complete &= r.slots[0].present && r.slots[1].present &&
                                stl_counterpart(r) == stl_counterpart(runs.front());
    }
    CHECK((cons == 1.0) == identical_and_complete);
    const std::size_t p = 2 * ids + 3;
    for (const auto& r : runs) {
      const double c = conciseness(r);
      const double s = strictness(r, p);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("strictness depends only on structure") {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const auto phi = random_explanation(rng, 3);
    const auto view = explanation_view(phi);
    // Reweight every Boolean node uniformly and compare.
    auto reweigh = [](const WstlFormula& x, auto&& self) -> WstlFormula {
      switch (x.kind()) {
        case NodeKind::conjunction:
        case NodeKind::disjunction: {
          std::vector<WstlFormula> cs;
          for (const auto& c : x.children()) cs.push_back(self(c, self));
          std::vector<double> w(cs.size(), 1.0 / static_cast<double>(cs.size()));
          return x.kind() == NodeKind::conjunction ? WstlFormula::conjunction(w, cs) : WstlFormula::disjunction(w, cs);
        }
        case NodeKind::globally:
          return WstlFormula::globally(x.interval(), self(x.children()[0], self));
        case NodeKind::eventually:
          return WstlFormula::eventually(x.interval(), self(x.children()[0], self));
        default:
          return x;
      }
    };
    const auto other = explanation_view(reweigh(phi, reweigh));
    CHECK(strictness(view, 9) == strictness(other, 9));
    CHECK(conciseness(view) == conciseness(other));
  }
}

TEST_CASE("accuracy examples and brute force") {
  const auto a = identity_predicate("a");
  TrajectorySet test;
  for (int k = 0; k < 10; ++k) {
    Trajectory tau;
    tau.id = std::to_string(k);
    tau.label = k < 3 ? 1 : -1;
    tau.states = StateMatrix::Constant(3, 1, tau.label * 0.4);
    test.push_back(tau);
  }
  const AggregationConfig cfg;
  CHECK(accuracy(WstlFormula::top(), test, cfg) == doctest::Approx(0.3));
  CHECK(accuracy(WstlFormula::globally({0, 2}, WstlFormula::literal(Literal::of(a))), test, cfg) == 1.0);
  CHECK(accuracy(WstlFormula::top(), TrajectorySet{}, cfg) == 0.0);

  Rng rng(45);
  const auto preds = oracle::random_predicates(rng, 3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto phi = WstlFormula::eventually({0, 2}, oracle::random_nested_cnf(rng, preds));
    TrajectorySet data;
    for (int k = 0; k < 20; ++k) data.push_back(oracle::random_trajectory(rng, 3, 2, rng() % 2 ? 1 : -1));
    std::size_t hits = 0;
    for (const auto& tau : data) hits += (oracle::robustness(phi, tau, 0, 0.5L) >= 0.0L ? 1 : -1) == tau.label;
    CHECK(accuracy(phi, data, AggregationConfig{0.5}) == doctest::Approx(hits / 20.0));
  }
}

TEST_CASE("summaries use the sample standard deviation") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const std::vector<double> one{0.7};
  CHECK(summarize(one).std == 0.0);
}

TEST_CASE("report assembly") {
  const auto v1 = explanation_view(explanation(lit("a"), lit("b")));
  const auto v2 = explanation_view(explanation(lit("b"), lit("b")));
  std::vector<RunMetrics> runs{{"r0", "x", "B", 1.0, 1.0, 0.2, true},
                               {"r1", "y", "A", 0.5, 0.5, 0.1, true},
                               {"r2", "z", "A", 0.0, 0.0, 0.0, false},
                               {"r3", "w", "B", 0.5, 0.5, 0.1, true}};
  const std::vector<ExplanationView> views{v1, v2, v1, v2};
  const auto report = build_report(runs, views, 4);
  CHECK(report.modal_counterpart == "A");
  CHECK(report.modal_count == 2);
  CHECK(report.accuracy.mean == 0.5);
  CHECK(report.consistency == doctest::Approx(consistency(views)));
  const auto j = to_json(report);
  CHECK(j.at("K") == 4);
  CHECK(j.at("P") == 4);
  CHECK(j.at("runs").size() == 4);
  const auto table = to_table(report);
  CHECK(table.find("r2") != std::string::npos);
  CHECK(table.find("incomplete explanation") != std::string::npos);
  CHECK(table.find("modal explanation (2/4): A") != std::string::npos);
  CHECK_THROWS_AS(build_report(runs, std::vector<ExplanationView>{v1}, 4), InputError);
}
