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

#include "wstl/core/render.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "wstl/core/cnf.hpp"
#include "wstl/numeric.hpp"

namespace wstl {

namespace {

struct Renderer {
  int decimals;

  std::string fixed(double w) const { return fmt::format("{:.{}f}", w, decimals); }

  // Operator weights on non-literal operands: "0.5", "1.0", "0.25".
  std::string trimmed(double w) const {
    std::string s = fixed(w);
    if (s.find('.') == std::string::npos) return s + ".0";
    while (s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
  }

  // Each entry carries (unweighted text, weighted text); sorting on the pair
  // orders by structure first so weights never reorder equal shapes.
  using Piece = std::pair<std::string, std::string>;

  static std::string join(std::vector<Piece> parts, std::string_view sep, bool weighted) {
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += sep;
      out += weighted ? parts[i].second : parts[i].first;
    }
    return out;
  }

  Piece clause(WeightedClause c, bool parenthesize) const {
    std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) {
      return std::tie(x.literal.key, x.weight) < std::tie(y.literal.key, y.weight);
    });
    std::string bare, full;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j) bare += " ∨ ", full += " ∨ ";
      bare += c[j].literal.key.to_string();
      full += fixed(c[j].weight) + " " + c[j].literal.key.to_string();
    }
    if (parenthesize && c.size() > 1) {
      bare = "(" + bare + ")";
      full = "(" + full + ")";
    }
    return {bare, full};
  }

  Piece cnf(const DistributedCnf& clauses) const {
    std::vector<Piece> parts;
    for (const auto& c : clauses) parts.push_back(clause(c, clauses.size() > 1));
    return {join(parts, " ∧ ", false), join(parts, " ∧ ", true)};
  }

  Piece node(const WstlFormula& phi) const {
    switch (phi.kind()) {
      case NodeKind::top:
        return {"⊤", "⊤"};
      case NodeKind::literal: {
        auto s = phi.literal().key.to_string();
        return {s, s};
      }
      case NodeKind::negation: {
        auto [bare, full] = node(phi.children().front());
        return {"¬(" + bare + ")", "¬(" + full + ")"};
      }
      case NodeKind::globally:
      case NodeKind::eventually: {
        const char* op = phi.kind() == NodeKind::globally ? "G" : "F";
        auto [bare, full] = node(phi.children().front());
        return {std::string(op) + "[" + bare + "]", std::string(op) + "[" + full + "]"};
      }
      case NodeKind::conjunction:
      case NodeKind::disjunction:
        break;
    }
    if (auto clauses = collect_cnf(phi)) return cnf(*clauses);

    const bool is_and = phi.kind() == NodeKind::conjunction;
    std::vector<Piece> parts;
    for (std::size_t i = 0; i < phi.children().size(); ++i) {
      const double w = phi.weights()[i];
      if (w == 0.0) continue;
      const auto& c = phi.children()[i];
      auto [bare, full] = node(c);
      const bool boolean = c.kind() == NodeKind::conjunction || c.kind() == NodeKind::disjunction;
      if (boolean) {
        bare = "(" + bare + ")";
        full = "(" + full + ")";
      }
      full = c.kind() == NodeKind::literal ? fixed(w) + " " + full : trimmed(w) + full;
      parts.emplace_back(std::move(bare), std::move(full));
    }
    const std::string_view sep = is_and ? " ∧ " : " ∨ ";
    return {join(parts, sep, false), join(parts, sep, true)};
  }
};

nlohmann::json weights_json(const std::vector<double>& w) {
  auto arr = nlohmann::json::array();
  for (double x : w) arr.push_back(to_decimal_string(x));
  return arr;
}

std::vector<double> weights_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw StructuralError("formula json: 'weights' must be an array");
  std::vector<double> w;
  for (const auto& x : j) {
    if (!x.is_string()) throw StructuralError("formula json: weights must be decimal strings");
    w.push_back(parse_decimal_string(x.get<std::string>()));
  }
  return w;
}

}  // namespace

std::string to_canonical_string(const WstlFormula& phi, int decimals) {
  return Renderer{decimals}.node(phi).second;
}

nlohmann::json to_json(const WstlFormula& phi) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(phi.kind()));
  switch (phi.kind()) {
    case NodeKind::top:
      break;
    case NodeKind::literal:
      j["predicate"] = phi.literal().key.id;
      j["negated"] = phi.literal().key.negated;
      break;
    case NodeKind::globally:
    case NodeKind::eventually:
      j["interval"] = {phi.interval().a, phi.interval().b};
      [[fallthrough]];
    case NodeKind::conjunction:
    case NodeKind::disjunction:
      j["weights"] = weights_json(phi.weights());
      [[fallthrough]];
    case NodeKind::negation: {
      auto children = nlohmann::json::array();
      for (const auto& c : phi.children()) children.push_back(to_json(c));
      j["children"] = std::move(children);
      break;
    }
  }
  return j;
}

WstlFormula formula_from_json(const nlohmann::json& j, const PredicateRegistry& registry, bool allow_unbound) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    auto child = [&](std::size_t expected) {
      const auto& cs = j.at("children");
      if (!cs.is_array() || (expected && cs.size() != expected)) {
        throw StructuralError("formula json: '" + kind + "' has the wrong number of children");
      }
      std::vector<WstlFormula> out;
      for (const auto& c : cs) out.push_back(formula_from_json(c, registry, allow_unbound));
      return out;
    };
    if (kind == "true") return WstlFormula::top();
    if (kind == "literal") {
      const auto id = j.at("predicate").get<std::string>();
      const bool negated = j.at("negated").get<bool>();
      if (auto it = registry.find(id); it != registry.end()) return WstlFormula::literal(Literal::of(it->second, negated));
      if (!allow_unbound) throw ConfigError("formula json: unknown predicate '" + id + "'");
      return WstlFormula::literal(Literal::unbound(id, negated));
    }
    if (kind == "not") return WstlFormula::negation(std::move(child(1).front()));
    if (kind == "and") return WstlFormula::conjunction(weights_from_json(j.at("weights")), child(0));
    if (kind == "or") return WstlFormula::disjunction(weights_from_json(j.at("weights")), child(0));
    if (kind == "G" || kind == "F") {
      const auto& iv = j.at("interval");
      Interval interval{iv.at(0).get<std::size_t>(), iv.at(1).get<std::size_t>()};
      auto c = std::move(child(1).front());
      auto w = weights_from_json(j.at("weights"));
      return kind == "G" ? WstlFormula::globally(interval, std::move(c), std::move(w))
                         : WstlFormula::eventually(interval, std::move(c), std::move(w));
    }
    throw StructuralError("formula json: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("formula json: ") + e.what());
  }
}

}  // namespace wstl
