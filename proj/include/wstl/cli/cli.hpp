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

#ifndef WSTL_CLI_CLI_HPP_
#define WSTL_CLI_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "wstl/data/generator.hpp"
#include "wstl/metrics/metrics.hpp"
#include "wstl/simplify/simplify.hpp"
#include "wstl/tlnet/model.hpp"

namespace wstl::cli {

enum ExitCode : int {
  kOk = 0,
  /// Bad usage, bad configuration, missing or inconsistent inputs.
  kConfigFailure = 2,
  /// Every predicate was filtered out.
  kDegenerateData = 3,
  /// Non-finite loss or gradient during training.
  kNumericFailure = 4,
};

struct RunConfig {
  tlnet::TrainConfig train;
  simplify::SimplifyConfig simplify;
  double split_fraction = 0.8;
  /// Shared by every seed so that all runs see the same test split.
  std::uint64_t split_seed = 0;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t jobs = 1;
  /// Replace the schema's predicate bounds with estimates from the training split.
  bool bounds_from_data = false;
  std::filesystem::path data;
  std::filesystem::path schema;
  std::filesystem::path out;

  /// Throws ConfigError on out-of-range values or an empty seed list.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Parses "0..9", "3", "0,2,5" or mixes such as "0..2,7". Ranges are
/// inclusive. Throws ConfigError on malformed input.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Runs every seed of cfg and writes
///   out/schema.json, out/test.jsonl, out/aggregate.json,
///   out/seed_<k>/{explanation.json, checkpoint.json, manifest.json}.
/// Throws the first pipeline error in seed order.
void explain(const RunConfig& cfg);

/// Scores a run directory written by explain(). `test_override` and
/// `schema_override` replace the stored test split and schema when set.
/// Throws ConfigError when the runs disagree on the predicate schema.
metrics::MetricsReport evaluate(const std::filesystem::path& run_dir, const std::filesystem::path& test_override = {},
                                const std::filesystem::path& schema_override = {});

/// Entry point of the wstl-explain executable; returns the process exit code.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace wstl::cli

#endif  // WSTL_CLI_CLI_HPP_
