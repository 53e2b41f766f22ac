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

#ifndef WSTL_METRICS_METRICS_HPP_
#define WSTL_METRICS_METRICS_HPP_

#include <array>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "wstl/core/aggregation.hpp"
#include "wstl/core/formula.hpp"
#include "wstl/core/trajectory.hpp"
#include "wstl/tlnet/params.hpp"

namespace wstl::metrics {

using tlnet::Clause;

/// Number of temporal clauses the template expects: one F, one G.
inline constexpr std::size_t kExpectedClauses = 2;

/// One disjunctive clause without weights.
using LiteralSet = std::set<LiteralKey>;
/// Weight-stripped CNF; equality is set-of-sets equality.
using ClauseStructure = std::set<LiteralSet>;

/// The CNF inside one temporal operator. `clauses` keeps repeated literals
/// and repeated clauses so that counts see every occurrence.
struct ClauseView {
  Clause kind = Clause::F;
  std::vector<std::vector<LiteralKey>> clauses;
  bool present = false;

  /// m: literal occurrences.
  std::size_t literal_count() const;
  /// C: binary conjunctions, clauses - 1.
  std::size_t conjunction_count() const;
  /// D: binary disjunctions, sum of (clause size - 1).
  std::size_t disjunction_count() const;
  ClauseStructure counterpart() const;
};

/// Both slots of an explanation; a slot that is absent encodes the empty clause.
struct ExplanationView {
  std::array<ClauseView, 2> slots;

  const ClauseView& slot(Clause c) const { return slots[tlnet::index(c)]; }
};

/// Reads a formula of the shape  w_F F[CNF] AND w_G G[CNF]  (either part may
/// be missing, or be the whole formula). Zero-weight operands are ignored.
/// Throws StructuralError for any other shape or for two operators of the
/// same kind.
ExplanationView explanation_view(const WstlFormula& phi);

/// Weight-stripped structure of both slots, e.g. "F(ψ_goal) ∧ G(¬ψ_hazard)";
/// an absent slot renders as "∅".
struct StlCounterpart {
  std::array<ClauseStructure, 2> slots;
  std::array<bool, 2> present{};

  bool operator==(const StlCounterpart&) const = default;
  std::string to_string() const;
};

StlCounterpart stl_counterpart(const ExplanationView& view);
StlCounterpart stl_counterpart(const WstlFormula& phi);

/// Sign-of-robustness classification at t = 0, r = 0 counted as positive.
/// Returns 0 on an empty set.
double accuracy(const WstlFormula& phi, const TrajectorySet& test, const AggregationConfig& cfg);
double accuracy(const tlnet::TlnetParams& params, const TrajectorySet& test, const AggregationConfig& cfg);

/// (1/N) sum_n 1/m_n, absent or empty slots contributing 0.
double conciseness(const ExplanationView& view, std::size_t expected_n = kExpectedClauses);

/// (1/N) sum_n max_sigma count(sigma) / (K |Sigma_n|) with Sigma_n the
/// distinct non-empty counterparts of slot n; 0 when Sigma_n is empty.
double consistency(std::span<const ExplanationView> runs, std::size_t expected_n = kExpectedClauses);

/// 1 / (P - C + D) of one slot, 0 when absent. Throws StructuralError when
/// P - C + D <= 0.
double clause_strictness(const ClauseView& clause, std::size_t p);

/// (1/N) sum_n clause_strictness.
double strictness(const ExplanationView& view, std::size_t p, std::size_t expected_n = kExpectedClauses);

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation; 0 for fewer than two values.
  double std = 0.0;
};

Summary summarize(std::span<const double> values);

struct RunMetrics {
  std::string run;
  std::string canonical;
  std::string counterpart;
  double accuracy = 0.0;
  double conciseness = 0.0;
  double strictness = 0.0;
  bool complete = true;
};

struct MetricsReport {
  std::vector<RunMetrics> runs;
  Summary accuracy;
  Summary conciseness;
  Summary strictness;
  double consistency = 0.0;
  /// Number of potentially present literals, 2 N_AP after filtering.
  std::size_t p = 0;
  /// Most frequent counterpart; ties go to the smallest string.
  std::string modal_counterpart;
  std::size_t modal_count = 0;
};

/// Assembles per-run metrics and the cross-run consistency. `views` must be
/// parallel to `runs`.
MetricsReport build_report(std::vector<RunMetrics> runs, std::span<const ExplanationView> views, std::size_t p);

nlohmann::json to_json(const MetricsReport& report);

/// Aligned table, one line per run plus mean ± std.
std::string to_table(const MetricsReport& report);

}  // namespace wstl::metrics

#endif  // WSTL_METRICS_METRICS_HPP_
