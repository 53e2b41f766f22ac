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

#include "wstl/core/cnf.hpp"

namespace wstl {

namespace {

// Literal or OR-of-literals, scaled by `scale`. Returns false on any other shape.
bool append_clause(const WstlFormula& phi, double scale, WeightedClause& out) {
  if (phi.kind() == NodeKind::literal) {
    out.push_back({phi.literal(), scale});
    return true;
  }
  if (phi.kind() != NodeKind::disjunction) return false;
  for (std::size_t j = 0; j < phi.children().size(); ++j) {
    const auto& c = phi.children()[j];
    if (c.kind() != NodeKind::literal) return false;
    out.push_back({c.literal(), scale * phi.weights()[j]});
  }
  return true;
}

void drop_zeros(DistributedCnf& cnf) {
  for (auto& clause : cnf) {
    std::erase_if(clause, [](const WeightedLiteral& l) { return l.weight == 0.0; });
  }
  std::erase_if(cnf, [](const WeightedClause& c) { return c.empty(); });
}

}  // namespace

DistributedCnf distribute_weights(const WstlFormula& cnf) {
  if (cnf.kind() != NodeKind::conjunction) {
    throw StructuralError("distribute_weights: expected a conjunction, got " + std::string(to_string(cnf.kind())));
  }
  DistributedCnf out;
  out.reserve(cnf.children().size());
  for (std::size_t i = 0; i < cnf.children().size(); ++i) {
    WeightedClause clause;
    if (!append_clause(cnf.children()[i], cnf.weights()[i], clause)) {
      throw StructuralError("distribute_weights: conjunct " + std::to_string(i) +
                            " is not a disjunction of literals");
    }
    out.push_back(std::move(clause));
  }
  return out;
}

WstlFormula nest_weights(const DistributedCnf& cnf) {
  std::vector<double> clause_weights;
  std::vector<WstlFormula> clauses;
  double total = 0.0;
  for (const auto& clause : cnf) {
    double row_sum = 0.0;
    for (const auto& l : clause) row_sum += l.weight;
    if (!(row_sum > 0.0)) continue;
    std::vector<double> w;
    std::vector<WstlFormula> lits;
    for (const auto& l : clause) {
      if (l.weight == 0.0) continue;
      w.push_back(l.weight / row_sum);
      lits.push_back(WstlFormula::literal(l.literal));
    }
    clause_weights.push_back(row_sum);
    clauses.push_back(WstlFormula::disjunction(std::move(w), std::move(lits)));
    total += row_sum;
  }
  if (clauses.empty()) throw StructuralError("nest_weights: no clause with positive weight");
  // Distributed weights sum to 1 up to rounding; renormalize so the
  // conjunction passes the factory's tolerance check exactly.
  for (double& w : clause_weights) w /= total;
  return WstlFormula::conjunction(std::move(clause_weights), std::move(clauses));
}

std::optional<DistributedCnf> collect_cnf(const WstlFormula& phi) {
  DistributedCnf out;
  if (phi.kind() == NodeKind::conjunction) {
    for (std::size_t i = 0; i < phi.children().size(); ++i) {
      WeightedClause clause;
      if (!append_clause(phi.children()[i], phi.weights()[i], clause)) return std::nullopt;
      out.push_back(std::move(clause));
    }
  } else {
    WeightedClause clause;
    if (!append_clause(phi, 1.0, clause)) return std::nullopt;
    out.push_back(std::move(clause));
  }
  drop_zeros(out);
  return out;
}

}  // namespace wstl
