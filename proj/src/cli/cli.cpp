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

#include "wstl/cli/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "wstl/core/render.hpp"
#include "wstl/data/dataset.hpp"
#include "wstl/data/io.hpp"
#include "wstl/data/schema.hpp"
#include "wstl/metrics/metrics.hpp"

namespace wstl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kLogEnv = "WSTL_EXPLAIN_LOG";

void configure_logging() {
  auto logger = spdlog::get("wstl");
  if (!logger) {
    logger = spdlog::stderr_color_mt("wstl");
    logger->set_pattern("[%H:%M:%S] [%^%l%$] %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv(kLogEnv)) {
    const std::string level = env;
    if (level == "error" || level == "warn" || level == "info" || level == "debug") {
      spdlog::set_level(spdlog::level::from_str(level));
    } else {
      spdlog::warn("{}={} is not one of error, warn, info, debug; using info", kLogEnv, level);
    }
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::uint64_t parse_u64(const std::string& s, const std::string& whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("malformed seed list '" + whole + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw ConfigError("seed out of range in '" + whole + "'");
  }
}

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

/// The subset of a JSON config that matches an option's long name is fed to
/// CLI11 as if it had been typed, for every option not given on the command
/// line.
void apply_config_file(CLI::App& app, const std::string& config_path) {
  if (config_path.empty()) return;
  const json cfg = read_json(config_path);
  if (!cfg.is_object()) throw ConfigError("config " + config_path + ": expected a JSON object");
  std::vector<std::string> known;
  for (CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    known.push_back(name);
    if (name == "config" || opt->count() > 0 || !cfg.contains(name)) continue;
    const auto& v = cfg.at(name);
    auto feed = [&](const json& item) { opt->add_result(item.is_string() ? item.get<std::string>() : item.dump()); };
    if (v.is_array()) {
      for (const auto& item : v) feed(item);
    } else if (v.is_boolean()) {
      if (v.get<bool>()) opt->add_result("true");
    } else {
      feed(v);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config " + config_path + ": " + name + ": " + e.what());
    }
  }
  for (const auto& [key, value] : cfg.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      spdlog::warn("config {}: ignoring unknown key '{}'", config_path, key);
    }
  }
}

void add_hyperparameters(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--sigma", cfg.train.sigma, "Smooth aggregation temperature")->capture_default_str();
  cmd.add_option("--zeta", cfg.train.zeta, "Classification loss scale")->capture_default_str();
  cmd.add_option("--s-th", cfg.simplify.s_threshold, "Predicate filter similarity threshold")->capture_default_str();
  cmd.add_option("--lambda-rt", cfg.train.lambda_rt, "Weight of the task/constraint overlap regularizer")
      ->capture_default_str();
  cmd.add_option("--lambda-rd", cfg.train.lambda_rd, "Weight of the row overlap regularizer")->capture_default_str();
  cmd.add_option("--n-pr", cfg.simplify.n_prune_iters, "Maximum number of pruning rounds")->capture_default_str();
  cmd.add_option("--n-w", cfg.simplify.n_weights_per_prune, "Weights pruned per round")->capture_default_str();
  cmd.add_option("--epochs", cfg.train.epochs, "Training epochs per stage")->capture_default_str();
  cmd.add_option("--step-size", cfg.train.step_size, "Gradient descent step size")->capture_default_str();
  cmd.add_option("--batch-size", cfg.train.batch_size, "Minibatch size")->capture_default_str();
  cmd.add_option("--split-fraction", cfg.split_fraction, "Training fraction of the stratified split")
      ->capture_default_str();
  cmd.add_option("--split-seed", cfg.split_seed, "Seed of the stratified split")->capture_default_str();
}

json explanation_json(std::uint64_t seed, const simplify::Explanation& ex) {
  return {{"seed", seed},
          {"canonical", ex.canonical},
          {"counterpart", metrics::stl_counterpart(ex.formula).to_string()},
          {"complete", ex.complete},
          {"horizon", ex.horizon},
          {"formula", to_json(ex.formula)}};
}

json checkpoint_json(std::uint64_t seed, const simplify::Explanation& ex, const RunConfig& cfg,
                     const json& schema) {
  return {{"seed", seed},
          {"horizon", ex.horizon},
          {"sigma", cfg.train.sigma},
          {"params", tlnet::to_json(ex.params)},
          {"schema", schema}};
}

json manifest_json(std::uint64_t seed, const simplify::Explanation& ex, const RunConfig& cfg,
                   const data::DatasetSplit& split, double seconds) {
  json history = json::array();
  for (const auto& r : ex.history) history.push_back(simplify::to_json(r));
  return {{"seed", seed},
          {"config", to_json(cfg)},
          {"score_policy", "continue"},
          {"split",
           {{"fraction", split.split_fraction},
            {"seed", split.seed},
            {"train", split.train.size()},
            {"test", split.test.size()}}},
          {"filter", simplify::to_json(ex.filter)},
          {"history", std::move(history)},
          {"canonical", ex.canonical},
          {"complete", ex.complete},
          {"formula", to_json(ex.formula)},
          {"seconds", seconds}};
}

int report_failure(const std::exception& e, int code) {
  spdlog::error("{}", e.what());
  return code;
}

/// Runs `body` and maps library errors onto the exit-code taxonomy.
template <typename F>
int guarded(F&& body) {
  try {
    body();
    return kOk;
  } catch (const DegenerateDataError& e) {
    return report_failure(e, kDegenerateData);
  } catch (const NumericError& e) {
    return report_failure(e, kNumericFailure);
  } catch (const Error& e) {
    return report_failure(e, kConfigFailure);
  } catch (const fs::filesystem_error& e) {
    return report_failure(e, kConfigFailure);
  }
}

}  // namespace

void RunConfig::validate() const {
  train.validate();
  simplify.validate();
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw ConfigError("split fraction must lie in (0, 1)");
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (jobs == 0) throw ConfigError("jobs must be positive");
}

json to_json(const RunConfig& cfg) {
  return {{"sigma", cfg.train.sigma},
          {"zeta", cfg.train.zeta},
          {"lambda_rt", cfg.train.lambda_rt},
          {"lambda_rd", cfg.train.lambda_rd},
          {"epochs", cfg.train.epochs},
          {"step_size", cfg.train.step_size},
          {"batch_size", cfg.train.batch_size},
          {"s_th", cfg.simplify.s_threshold},
          {"n_pr", cfg.simplify.n_prune_iters},
          {"n_w", cfg.simplify.n_weights_per_prune},
          {"split_fraction", cfg.split_fraction},
          {"split_seed", cfg.split_seed},
          {"seeds", cfg.seeds},
          {"bounds_from_data", cfg.bounds_from_data},
          {"data", cfg.data.string()},
          {"schema", cfg.schema.string()}};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = parse_u64(item.substr(0, dots), text);
      const auto hi = parse_u64(item.substr(dots + 2), text);
      if (hi < lo) throw ConfigError("empty seed range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_u64(item, text));
    }
    pos = comma + 1;
  }
  return seeds;
}

void explain(const RunConfig& cfg) {
  cfg.validate();
  if (!fs::exists(cfg.schema)) throw ConfigError("schema file not found: " + cfg.schema.string());
  if (!fs::exists(cfg.data)) throw ConfigError("data file not found: " + cfg.data.string());
  auto schema = data::load_schema(cfg.schema);
  const auto trajectories = data::load_dataset(cfg.data, schema);
  if (trajectories.empty()) throw ConfigError("dataset " + cfg.data.string() + " is empty");
  const auto split = data::stratified_split(trajectories, cfg.split_fraction, cfg.split_seed);
  if (cfg.bounds_from_data || schema.bounds_from_data) schema = data::with_bounds_from_data(schema, split.train);
  const json schema_json = data::to_json(schema);

  fs::create_directories(cfg.out);
  data::save_schema(cfg.out / "schema.json", schema);
  data::save_dataset(cfg.out / "test.jsonl", split.test);

  const std::size_t n = cfg.seeds.size();
  std::vector<std::optional<simplify::Explanation>> results(n);
  std::vector<double> seconds(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      auto train = cfg.train;
      train.seed = cfg.seeds[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        results[i] = simplify::run_pipeline(split.train, schema.predicates, train, cfg.simplify);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (results[i]) spdlog::info("seed {}: {} ({:.1f} s)", cfg.seeds[i], results[i]->canonical, seconds[i]);
    }
  };
  const std::size_t threads = std::min(cfg.jobs, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json runs = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto seed = cfg.seeds[i];
    const auto& ex = *results[i];
    const fs::path dir = cfg.out / seed_dir(seed);
    fs::create_directories(dir);
    write_json(dir / "explanation.json", explanation_json(seed, ex));
    write_json(dir / "checkpoint.json", checkpoint_json(seed, ex, cfg, schema_json));
    write_json(dir / "manifest.json", manifest_json(seed, ex, cfg, split, seconds[i]));
    runs.push_back({{"seed", seed}, {"dir", seed_dir(seed)}, {"canonical", ex.canonical}, {"complete", ex.complete}});
  }
  write_json(cfg.out / "aggregate.json", {{"config", to_json(cfg)}, {"runs", std::move(runs)}});
}

metrics::MetricsReport evaluate(const fs::path& run_dir, const fs::path& test_override, const fs::path& schema_override) {
  const fs::path schema_path = schema_override.empty() ? run_dir / "schema.json" : schema_override;
  const fs::path test_path = test_override.empty() ? run_dir / "test.jsonl" : test_override;
  if (!fs::is_directory(run_dir)) throw ConfigError("run directory not found: " + run_dir.string());
  const auto schema = data::load_schema(schema_path);
  const auto test = data::load_dataset(test_path, schema);
  const json schema_json = data::to_json(schema);

  std::vector<std::pair<std::uint64_t, fs::path>> checkpoints;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const auto ck = entry.path() / "checkpoint.json";
    if (entry.is_directory() && entry.path().filename().string().starts_with("seed_") && fs::exists(ck)) {
      checkpoints.emplace_back(read_json(ck).at("seed").get<std::uint64_t>(), ck);
    }
  }
  if (checkpoints.empty()) throw ConfigError("no runs found under " + run_dir.string());
  std::sort(checkpoints.begin(), checkpoints.end());

  std::vector<metrics::RunMetrics> runs;
  std::vector<metrics::ExplanationView> views;
  std::optional<std::size_t> p;
  for (const auto& [seed, path] : checkpoints) {
    const json ck = read_json(path);
    if (ck.at("schema") != schema_json) {
      throw ConfigError(path.string() + " was trained with a different predicate schema");
    }
    const auto params = tlnet::params_from_json(ck.at("params"), schema.registry());
    const std::size_t run_p = 2 * params.n_ap();
    if (p && *p != run_p) throw ConfigError(path.string() + " uses a different retained predicate set");
    p = run_p;
    const AggregationConfig agg{ck.at("sigma").get<double>(), AggregationMode::smooth};
    const auto formula = tlnet::to_formula(params, ck.at("horizon").get<std::size_t>());
    auto view = metrics::explanation_view(formula);
    metrics::RunMetrics m;
    m.run = seed_dir(seed);
    m.canonical = to_canonical_string(formula);
    m.counterpart = metrics::stl_counterpart(view).to_string();
    m.accuracy = metrics::accuracy(params, test, agg);
    m.conciseness = metrics::conciseness(view);
    m.strictness = metrics::strictness(view, run_p);
    m.complete = view.slots[0].present && view.slots[1].present;
    runs.push_back(std::move(m));
    views.push_back(std::move(view));
  }
  return metrics::build_report(std::move(runs), views, *p);
}

int run_cli(int argc, const char* const* argv) {
  configure_logging();
  CLI::App app{"Explain trajectory classifiers with weighted signal temporal logic", "wstl-explain"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;

  // generate
  data::ReachAvoidConfig gen;
  fs::path gen_out;
  bool gen_csv = false;
  bool gen_no_constant = false;
  std::vector<double> goal, hazard;
  auto* generate = app.add_subcommand("generate", "Write a synthetic reach-avoid dataset and its schema");
  generate->add_option("--config", config_path, "JSON file of option values; flags take precedence");
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--n-positive", gen.n_positive, "Positive trajectories")->capture_default_str();
  generate->add_option("--n-negative", gen.n_negative, "Negative trajectories")->capture_default_str();
  generate->add_option("--horizon", gen.horizon, "Steps per trajectory")->capture_default_str();
  generate->add_option("--step", gen.step, "Step length")->capture_default_str();
  generate->add_option("--arena", gen.arena, "Arena half-width")->capture_default_str();
  generate->add_option("--goal", goal, "Goal centre x y")->expected(2);
  generate->add_option("--goal-radius", gen.goal_radius, "Goal radius")->capture_default_str();
  generate->add_option("--hazard", hazard, "Hazard centre x y")->expected(2);
  generate->add_option("--hazard-radius", gen.hazard_radius, "Hazard radius")->capture_default_str();
  generate->add_flag("--csv", gen_csv, "Also export trajectories.csv");
  generate->add_flag("--no-constant", gen_no_constant, "Omit the constant irrelevant predicate from the schema");

  // explain
  RunConfig run;
  std::string seeds_text = "0..9";
  auto* explain_cmd = app.add_subcommand("explain", "Train and simplify one explanation per seed");
  explain_cmd->add_option("--config", config_path, "JSON file of option values; flags take precedence");
  explain_cmd->add_option("--data", run.data, "Trajectories (JSON Lines)")->required();
  explain_cmd->add_option("--schema", run.schema, "Predicate schema (JSON)")->required();
  explain_cmd->add_option("--out", run.out, "Output directory")->required();
  explain_cmd->add_option("--seeds", seeds_text, "Seed list, e.g. 0..9 or 0,3,5")->capture_default_str();
  explain_cmd->add_option("--jobs", run.jobs, "Seeds trained concurrently")->capture_default_str();
  explain_cmd->add_flag("--bounds-from-data", run.bounds_from_data,
                        "Estimate predicate bounds from the training split");
  add_hyperparameters(*explain_cmd, run);

  // evaluate
  fs::path eval_runs, eval_out, eval_data, eval_schema;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score the runs written by explain");
  evaluate_cmd->add_option("--config", config_path, "JSON file of option values; flags take precedence");
  evaluate_cmd->add_option("--runs", eval_runs, "Directory written by explain")->required();
  evaluate_cmd->add_option("--out", eval_out, "Output directory (default: the run directory)");
  evaluate_cmd->add_option("--data", eval_data, "Test trajectories (default: the stored test split)");
  evaluate_cmd->add_option("--schema", eval_schema, "Predicate schema (default: the stored schema)");

  // filter-report
  fs::path filter_data, filter_schema, filter_out;
  simplify::SimplifyConfig filter_cfg;
  auto* filter_cmd = app.add_subcommand("filter-report", "Show the predicate filter similarities of a dataset");
  filter_cmd->add_option("--config", config_path, "JSON file of option values; flags take precedence");
  filter_cmd->add_option("--data", filter_data, "Trajectories (JSON Lines)")->required();
  filter_cmd->add_option("--schema", filter_schema, "Predicate schema (JSON)")->required();
  filter_cmd->add_option("--out", filter_out, "Write the report as JSON to this file");
  filter_cmd->add_option("--s-th", filter_cfg.s_threshold, "Similarity threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
    for (auto* cmd : app.get_subcommands()) apply_config_file(*cmd, config_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  } catch (const ConfigError& e) {
    return report_failure(e, kConfigFailure);
  }

  if (generate->parsed()) {
    return guarded([&] {
      if (!goal.empty()) gen.goal = {goal[0], goal[1]};
      if (!hazard.empty()) gen.hazard = {hazard[0], hazard[1]};
      auto generated = data::generate_reach_avoid(gen);
      fs::create_directories(gen_out);
      data::save_dataset(gen_out / "trajectories.jsonl", generated.trajectories);
      data::save_schema(gen_out / "schema.json", data::reach_avoid_schema(gen, !gen_no_constant));
      write_json(gen_out / "manifest.json", generated.manifest);
      if (gen_csv) data::export_csv(gen_out / "trajectories.csv", generated.trajectories);
      spdlog::info("wrote {} trajectories to {}", generated.trajectories.size(), gen_out.string());
    });
  }
  if (explain_cmd->parsed()) {
    return guarded([&] {
      run.seeds = parse_seed_list(seeds_text);
      explain(run);
    });
  }
  if (evaluate_cmd->parsed()) {
    return guarded([&] {
      const auto report = evaluate(eval_runs, eval_data, eval_schema);
      const fs::path out = eval_out.empty() ? eval_runs : eval_out;
      fs::create_directories(out);
      write_json(out / "metrics.json", metrics::to_json(report));
      const auto table = metrics::to_table(report);
      write_text(out / "metrics.txt", table);
      std::cout << table;
    });
  }
  if (filter_cmd->parsed()) {
    return guarded([&] {
      const auto schema = data::load_schema(filter_schema);
      const auto trajectories = data::load_dataset(filter_data, schema);
      const auto report = simplify::filter_predicates(trajectories, schema.predicates, filter_cfg);
      for (const auto& e : report.entries) {
        std::cout << fmt::format("{:<16} S = {:.4f}  {}  positive ({:.3f}, {:.3f}, {:.3f})  negative ({:.3f}, {:.3f}, {:.3f})\n",
                                 e.predicate, e.similarity, e.retained ? "kept   " : "removed", e.positive.always_sat,
                                 e.positive.sometimes_sat, e.positive.never_sat, e.negative.always_sat,
                                 e.negative.sometimes_sat, e.negative.never_sat);
      }
      if (!filter_out.empty()) write_json(filter_out, simplify::to_json(report));
    });
  }
  return kConfigFailure;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("wstl-explain");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wstl::cli
