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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "support/oracle.hpp"
#include "wstl/data/dataset.hpp"
#include "wstl/data/generator.hpp"
#include "wstl/data/io.hpp"
#include "wstl/data/schema.hpp"
#include "wstl/errors.hpp"

using namespace wstl;
using namespace wstl::data;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("wstl_test_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReachAvoidConfig small_config(std::uint64_t seed = 3) {
  ReachAvoidConfig cfg;
  cfg.n_positive = 40;
  cfg.n_negative = 40;
  cfg.seed = seed;
  return cfg;
}

std::size_t expect_parse_error(const std::string& text, Eigen::Index dim = 2) {
  std::istringstream in(text);
  try {
    read_dataset(in, dim);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a ParseError");
  return 0;
}

}  // namespace

TEST_CASE("empty input gives an empty dataset") {
  std::istringstream in("");
  CHECK(read_dataset(in, 3).empty());
  std::istringstream blank("\n  \n");
  CHECK(read_dataset(blank, 3).empty());
}

TEST_CASE("dataset round trip is byte-identical") {
  const auto dir = scratch("roundtrip");
  const auto generated = generate_reach_avoid(small_config());
  const auto schema = reach_avoid_schema(small_config());
  save_dataset(dir / "a.jsonl", generated.trajectories);
  const auto loaded = load_dataset(dir / "a.jsonl", schema);
  REQUIRE(loaded.size() == generated.trajectories.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].id == generated.trajectories[i].id);
    CHECK(loaded[i].label == generated.trajectories[i].label);
    CHECK(loaded[i].states == generated.trajectories[i].states);
  }
  save_dataset(dir / "b.jsonl", loaded);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
}

TEST_CASE("malformed records report their line") {
  const std::string good = R"({"id":"a","label":1,"states":[[0,0],[1,1]]})";
  CHECK(expect_parse_error(good + "\n{not json\n") == 2);
  CHECK(expect_parse_error(R"({"id":"a","label":0,"states":[[0,0],[1,1]]})") == 1);
  CHECK(expect_parse_error(R"({"id":"a","label":1.0,"states":[[0,0],[1,1]]})") == 1);
  CHECK(expect_parse_error(good + "\n" + R"({"id":"b","label":1,"states":[[0,0],[1,1,1]]})") == 2);
  CHECK(expect_parse_error(good + "\n\n" + good) == 3);
  CHECK(expect_parse_error(R"({"id":"a","label":1,"states":[[0,0]]})") == 1);
  CHECK(expect_parse_error(R"({"id":"a","label":1,"states":[[0,"x"],[1,1]]})") == 1);
  CHECK(expect_parse_error(R"({"label":1,"states":[[0,0],[1,1]]})") == 1);
}

TEST_CASE("generated data has the requested shape") {
  const auto cfg = small_config();
  const auto g = generate_reach_avoid(cfg);
  CHECK(g.manifest.at("counts").at("positive") == 40);
  CHECK(g.manifest.at("counts").at("negative") == 40);
  std::size_t pos = 0;
  std::set<std::string> ids;
  for (const auto& tau : g.trajectories) {
    pos += tau.label == 1;
    ids.insert(tau.id);
    CHECK(tau.horizon() == cfg.horizon);
    CHECK(tau.dimension() == 6);
    CHECK(tau.states.cwiseAbs().maxCoeff() <= cfg.arena + 1e-12);
  }
  CHECK(pos == 40);
  CHECK(ids.size() == 80);
}

TEST_CASE("positives end in the goal and never enter the hazard") {
  const auto cfg = small_config(8);
  for (const auto& tau : generate_reach_avoid(cfg).trajectories) {
    if (tau.label != 1) continue;
    const Eigen::Vector2d last = tau.states.row(tau.states.rows() - 1).head<2>().transpose();
    CHECK((last - cfg.goal).norm() <= cfg.goal_radius);
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      const Eigen::Vector2d p = tau.states.row(t).head<2>().transpose();
      CHECK((p - cfg.hazard).norm() > cfg.hazard_radius);
    }
  }
}

TEST_CASE("negatives rarely reach the goal") {
  ReachAvoidConfig cfg;
  const auto g = generate_reach_avoid(cfg);
  std::size_t reached = 0;
  for (const auto& tau : g.trajectories) {
    if (tau.label != -1) continue;
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      if ((tau.states.row(t).head<2>().transpose() - cfg.goal).norm() <= cfg.goal_radius) {
        ++reached;
        break;
      }
    }
  }
  const double fraction = static_cast<double>(reached) / static_cast<double>(cfg.n_negative);
  CHECK(fraction < 0.05);
  CHECK(g.manifest.at("negative_goal_fraction").get<double>() == doctest::Approx(fraction));
}

TEST_CASE("generator is deterministic in its seed") {
  const auto a = generate_reach_avoid(small_config(11));
  const auto b = generate_reach_avoid(small_config(11));
  const auto c = generate_reach_avoid(small_config(12));
  std::ostringstream sa, sb, sc;
  write_dataset(sa, a.trajectories);
  write_dataset(sb, b.trajectories);
  write_dataset(sc, c.trajectories);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
  CHECK(a.manifest == b.manifest);
}

TEST_CASE("overlapping regions are rejected") {
  auto cfg = small_config();
  cfg.hazard = cfg.goal;
  CHECK_THROWS_AS(generate_reach_avoid(cfg), ConfigError);
  cfg = small_config();
  cfg.goal = {0.95, 0.95};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("robustness precompute has 2 N_AP channels with negation and spot values") {
  const auto cfg = small_config();
  const auto schema = reach_avoid_schema(cfg);
  const auto literals = literal_channels(schema.predicates);
  const auto n = schema.predicates.size();
  REQUIRE(n == 3);
  REQUIRE(literals.size() == 2 * n);
  Trajectory tau;
  tau.id = "probe";
  tau.states.resize(3, 6);
  tau.states.row(0) << cfg.goal.x(), cfg.goal.y(), cfg.goal.x(), cfg.goal.y(), cfg.hazard.x(), cfg.hazard.y();
  tau.states.row(1) << cfg.hazard.x(), cfg.hazard.y(), cfg.goal.x(), cfg.goal.y(), cfg.hazard.x(), cfg.hazard.y();
  tau.states.row(2) << 0.7, 0.2, cfg.goal.x(), cfg.goal.y(), cfg.hazard.x(), cfg.hazard.y();
  const auto r = robustness_channels(literals, tau);
  CHECK(r.rows() == 3);
  CHECK(r.cols() == 6);
  CHECK((r.leftCols(3) + r.rightCols(3)).cwiseAbs().maxCoeff() == 0.0);
  // Agent at the goal center: the goal predicate is fully satisfied.
  CHECK(r(0, 0) == doctest::Approx(1.0));
  // Agent at the hazard center: the hazard predicate is fully satisfied.
  CHECK(r(1, 1) == doctest::Approx(1.0));
  // Agent 0.5 below the goal center, outside the goal radius.
  const auto& goal = *schema.predicate("goal");
  const double f = -0.5;
  const double expected = (f - goal.threshold) / (goal.threshold - goal.inf);
  CHECK(r(2, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r(2, 0) == doctest::Approx(static_cast<double>(oracle::predicate(goal, f))).epsilon(1e-12));
  // The goal_x predicate is constant on reach-avoid data.
  CHECK(r(0, 2) == r(1, 2));
  CHECK(r(1, 2) == r(2, 2));

  const auto tensor = precompute_robustness(generate_reach_avoid(cfg).trajectories, literals);
  CHECK(tensor.size() == 80);
  for (const auto& m : tensor) {
    CHECK(m.cols() == 6);
    CHECK(m.cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("robustness precompute rejects short states") {
  const auto schema = reach_avoid_schema(small_config());
  Trajectory tau;
  tau.id = "short";
  tau.states = StateMatrix::Zero(2, 4);
  CHECK_THROWS_AS(robustness_channels(literal_channels(schema.predicates), tau), ConfigError);
}

TEST_CASE("stratified split sizes and determinism") {
  const auto all = generate_reach_avoid(ReachAvoidConfig{}).trajectories;
  const auto a = stratified_split(all, 0.8, 5);
  const auto b = stratified_split(all, 0.8, 5);
  CHECK(a.train.size() == 800);
  CHECK(a.test.size() == 200);
  std::size_t pos_test = 0;
  for (const auto& t : a.test) pos_test += t.label == 1;
  CHECK(pos_test == 100);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) CHECK(a.train[i].id == b.train[i].id);
  CHECK_THROWS_AS(stratified_split(all, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(stratified_split(TrajectorySet{}, 0.5, 0), InputError);
}

TEST_CASE("stratified split is a disjoint partition under fuzzing") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    TrajectorySet data;
    const std::size_t n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      data.push_back(oracle::random_trajectory(rng, 2, 1, rng() % 3 == 0 ? -1 : 1, "t" + std::to_string(i)));
    }
    const double fraction = uniform(rng, 0.05, 0.95);
    const auto s = stratified_split(data, fraction, rng());
    std::set<std::string> train, test;
    for (const auto& t : s.train) train.insert(t.id);
    for (const auto& t : s.test) test.insert(t.id);
    CHECK(train.size() == s.train.size());
    CHECK(test.size() == s.test.size());
    CHECK(train.size() + test.size() == n);
    for (const auto& id : train) CHECK(test.count(id) == 0);
  }
}

TEST_CASE("CSV export header and rows") {
  const auto dir = scratch("csv");
  const auto data = generate_reach_avoid(small_config()).trajectories;
  export_csv(dir / "t.csv", data);
  std::ifstream in(dir / "t.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "id,label,t,s0,s1,s2,s3,s4,s5");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == data.size() * 51);
}

TEST_CASE("schema round trip and errors") {
  const auto dir = scratch("schema");
  const auto schema = reach_avoid_schema(small_config());
  save_schema(dir / "s.json", schema);
  const auto back = load_schema(dir / "s.json");
  CHECK(to_json(back) == to_json(schema));
  CHECK(back.predicate("goal")->threshold == schema.predicate("goal")->threshold);
  CHECK_THROWS_AS(schema.predicate("nope"), ConfigError);
  CHECK_THROWS_AS(load_schema(dir / "missing.json"), ConfigError);

  auto j = to_json(schema);
  auto bad = j;
  bad["state_dimension"] = 3;
  CHECK_THROWS_AS(schema_from_json(bad), ConfigError);
  bad = j;
  bad["predicates"][0]["feature"] = "unknown";
  CHECK_THROWS_AS(schema_from_json(bad), ConfigError);
  bad = j;
  bad["predicates"].push_back(j["predicates"][0]);
  CHECK_THROWS_AS(schema_from_json(bad), ConfigError);
  bad = j;
  bad["predicates"][0]["sup"] = -5.0;
  CHECK_THROWS_AS(schema_from_json(bad), ConfigError);
  bad = j;
  bad["features"][0]["kind"] = "angle";
  CHECK_THROWS_AS(schema_from_json(bad), ConfigError);
}

TEST_CASE("bounds from data cover the observed range and the threshold") {
  const auto cfg = small_config();
  const auto schema = reach_avoid_schema(cfg);
  const auto data = generate_reach_avoid(cfg).trajectories;
  const auto fitted = with_bounds_from_data(schema, data);
  CHECK(fitted.bounds_from_data);
  for (const auto& p : fitted.predicates) {
    CHECK(p->inf < p->threshold);
    CHECK(p->threshold < p->sup);
    for (const auto& tau : data) {
      for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
        const double f = p->feature(tau.states.row(t));
        CHECK(f > p->inf);
        CHECK(f < p->sup);
      }
    }
  }
  CHECK_THROWS_AS(with_bounds_from_data(schema, TrajectorySet{}), InputError);
}
