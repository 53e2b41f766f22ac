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

#include "wstl/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "wstl/core/cnf.hpp"
#include "wstl/tlnet/model.hpp"

namespace wstl::metrics {

std::size_t ClauseView::literal_count() const {
  std::size_t m = 0;
  for (const auto& c : clauses) m += c.size();
  return m;
}

std::size_t ClauseView::conjunction_count() const { return clauses.empty() ? 0 : clauses.size() - 1; }

std::size_t ClauseView::disjunction_count() const {
  std::size_t d = 0;
  for (const auto& c : clauses) d += c.empty() ? 0 : c.size() - 1;
  return d;
}

ClauseStructure ClauseView::counterpart() const {
  ClauseStructure out;
  for (const auto& c : clauses) out.emplace(c.begin(), c.end());
  return out;
}

namespace {

void read_temporal(const WstlFormula& node, ExplanationView& view) {
  const Clause kind = node.kind() == NodeKind::eventually ? Clause::F : Clause::G;
  auto& slot = view.slots[tlnet::index(kind)];
  if (slot.present) throw StructuralError("explanation has two temporal clauses of the same kind");
  const auto cnf = collect_cnf(node.children().front());
  if (!cnf) throw StructuralError("temporal clause body is not a CNF of literals");
  for (const auto& clause : *cnf) {
    std::vector<LiteralKey> lits;
    for (const auto& l : clause) lits.push_back(l.literal.key);
    slot.clauses.push_back(std::move(lits));
  }
  slot.present = !slot.clauses.empty();
}

std::string render_structure(const ClauseStructure& s) {
  std::string out;
  bool first_clause = true;
  for (const auto& clause : s) {
    if (!first_clause) out += " ∧ ";
    first_clause = false;
    const bool paren = s.size() > 1 && clause.size() > 1;
    if (paren) out += "(";
    bool first = true;
    for (const auto& lit : clause) {
      if (!first) out += " ∨ ";
      first = false;
      out += lit.to_string();
    }
    if (paren) out += ")";
  }
  return out;
}

}  // namespace

ExplanationView explanation_view(const WstlFormula& phi) {
  ExplanationView view;
  view.slots[0].kind = Clause::F;
  view.slots[1].kind = Clause::G;
  if (phi.is_temporal()) {
    read_temporal(phi, view);
    return view;
  }
  if (phi.kind() != NodeKind::conjunction) throw StructuralError("explanation must be a conjunction of F and G clauses");
  for (std::size_t i = 0; i < phi.children().size(); ++i) {
    if (phi.weights()[i] == 0.0) continue;
    const auto& c = phi.children()[i];
    if (!c.is_temporal()) throw StructuralError("explanation operand is not a temporal clause");
    read_temporal(c, view);
  }
  return view;
}

std::string StlCounterpart::to_string() const {
  std::string out;
  for (Clause c : tlnet::kClauses) {
    if (!out.empty()) out += " ∧ ";
    out += c == Clause::F ? "F(" : "G(";
    const auto k = tlnet::index(c);
    out += present[k] ? render_structure(slots[k]) : "∅";
    out += ")";
  }
  return out;
}

StlCounterpart stl_counterpart(const ExplanationView& view) {
  StlCounterpart out;
  for (std::size_t k = 0; k < 2; ++k) {
    out.present[k] = view.slots[k].present;
    out.slots[k] = view.slots[k].counterpart();
  }
  return out;
}

StlCounterpart stl_counterpart(const WstlFormula& phi) { return stl_counterpart(explanation_view(phi)); }

double accuracy(const WstlFormula& phi, const TrajectorySet& test, const AggregationConfig& cfg) {
  if (test.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& tau : test) {
    const double r = robustness(phi, tau, 0, cfg);
    hits += (r >= 0.0 ? 1 : -1) == tau.label;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

double accuracy(const tlnet::TlnetParams& params, const TrajectorySet& test, const AggregationConfig& cfg) {
  if (test.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& tau : test) {
    const double r = tlnet::template_forward(params, tau, cfg);
    hits += (r >= 0.0 ? 1 : -1) == tau.label;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

double conciseness(const ExplanationView& view, std::size_t expected_n) {
  if (expected_n == 0) throw ConfigError("conciseness: expected clause count must be positive");
  double total = 0.0;
  for (const auto& slot : view.slots) {
    const auto m = slot.literal_count();
    if (slot.present && m != 0) total += 1.0 / static_cast<double>(m);
  }
  return total / static_cast<double>(expected_n);
}

double consistency(std::span<const ExplanationView> runs, std::size_t expected_n) {
  if (expected_n == 0) throw ConfigError("consistency: expected clause count must be positive");
  if (runs.empty()) throw InputError("consistency: needs at least one run");
  const auto k = static_cast<double>(runs.size());
  double total = 0.0;
  for (std::size_t n = 0; n < 2; ++n) {
    std::map<ClauseStructure, std::size_t> counts;
    for (const auto& run : runs) {
      if (run.slots[n].present) ++counts[run.slots[n].counterpart()];
    }
    if (counts.empty()) continue;
    std::size_t best = 0;
    for (const auto& [structure, count] : counts) best = std::max(best, count);
    total += static_cast<double>(best) / (k * static_cast<double>(counts.size()));
  }
  return total / static_cast<double>(expected_n);
}

double clause_strictness(const ClauseView& clause, std::size_t p) {
  if (!clause.present) return 0.0;
  const auto denom = static_cast<long long>(p) - static_cast<long long>(clause.conjunction_count()) +
                     static_cast<long long>(clause.disjunction_count());
  if (denom <= 0) throw StructuralError("strictness: P - C + D must be positive");
  return 1.0 / static_cast<double>(denom);
}

double strictness(const ExplanationView& view, std::size_t p, std::size_t expected_n) {
  if (expected_n == 0) throw ConfigError("strictness: expected clause count must be positive");
  if (p == 0) throw ConfigError("strictness: P must be positive");
  double total = 0.0;
  for (const auto& slot : view.slots) total += clause_strictness(slot, p);
  return total / static_cast<double>(expected_n);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

MetricsReport build_report(std::vector<RunMetrics> runs, std::span<const ExplanationView> views, std::size_t p) {
  if (runs.size() != views.size()) throw InputError("build_report: runs and views differ in length");
  MetricsReport report;
  report.p = p;
  std::vector<double> acc, con, str;
  std::map<std::string, std::size_t> modal;
  for (const auto& r : runs) {
    acc.push_back(r.accuracy);
    con.push_back(r.conciseness);
    str.push_back(r.strictness);
    ++modal[r.counterpart];
  }
  report.accuracy = summarize(acc);
  report.conciseness = summarize(con);
  report.strictness = summarize(str);
  report.consistency = runs.empty() ? 0.0 : consistency(views);
  for (const auto& [text, count] : modal) {
    if (count > report.modal_count) {
      report.modal_count = count;
      report.modal_counterpart = text;
    }
  }
  report.runs = std::move(runs);
  return report;
}

nlohmann::json to_json(const MetricsReport& report) {
  auto summary = [](const Summary& s) { return nlohmann::json{{"mean", s.mean}, {"std", s.std}}; };
  auto runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"run", r.run},
                    {"canonical", r.canonical},
                    {"counterpart", r.counterpart},
                    {"accuracy", r.accuracy},
                    {"conciseness", r.conciseness},
                    {"strictness", r.strictness},
                    {"complete", r.complete}});
  }
  return {{"runs", std::move(runs)},
          {"accuracy", summary(report.accuracy)},
          {"conciseness", summary(report.conciseness)},
          {"strictness", summary(report.strictness)},
          {"consistency", report.consistency},
          {"P", report.p},
          {"K", report.runs.size()},
          {"modal_counterpart", report.modal_counterpart},
          {"modal_count", report.modal_count}};
}

std::string to_table(const MetricsReport& report) {
  std::size_t width = 3;
  for (const auto& r : report.runs) width = std::max(width, r.run.size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>11}  {:>10}  {}\n", "run", width, "accuracy", "conciseness",
                                "strictness", "explanation");
  for (const auto& r : report.runs) {
    out += fmt::format("{:<{}}  {:>8.3f}  {:>11.3f}  {:>10.3f}  {}{}\n", r.run, width, r.accuracy, r.conciseness,
                       r.strictness, r.canonical, r.complete ? "" : "  [incomplete explanation]");
  }
  auto pm = [](const Summary& s) { return fmt::format("{:.3f} ± {:.3f}", s.mean, s.std); };
  out += fmt::format("\naccuracy     {}\nconciseness  {}\nstrictness   {}\nconsistency  {:.3f}\n", pm(report.accuracy),
                     pm(report.conciseness), pm(report.strictness), report.consistency);
  out += fmt::format("P = {}, K = {}\nmodal explanation ({}/{}): {}\n", report.p, report.runs.size(),
                     report.modal_count, report.runs.size(), report.modal_counterpart);
  return out;
}

}  // namespace wstl::metrics
