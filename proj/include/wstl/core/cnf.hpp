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

#ifndef WSTL_CORE_CNF_HPP_
#define WSTL_CORE_CNF_HPP_

#include <optional>
#include <vector>

#include "wstl/core/formula.hpp"

namespace wstl {

struct WeightedLiteral {
  Literal literal;
  double weight = 0.0;
};

using WeightedClause = std::vector<WeightedLiteral>;

/// CNF with weights pushed onto the literals: entry (i, j) holds
/// w_i * w_ij. The full set of weights sums to 1.
using DistributedCnf = std::vector<WeightedClause>;

/// Pushes conjunction weights into the disjunctions:
///   AND_i w_i OR_j w_ij psi_ij  ->  AND_i OR_j (w_i w_ij) psi_ij.
/// `cnf` must be a conjunction whose children are disjunctions of literals
/// (a bare literal counts as a one-literal disjunction); anything else
/// throws StructuralError.
DistributedCnf distribute_weights(const WstlFormula& cnf);

/// Inverse of distribute_weights: conjunction weights are the clause sums,
/// disjunction weights the clause renormalized. Zero-weight literals and
/// zero-sum clauses are dropped. Always produces AND of OR nodes, even for a
/// single clause or literal. Throws StructuralError when nothing is left.
WstlFormula nest_weights(const DistributedCnf& cnf);

/// Lenient reading used by rendering and metrics: accepts a literal, a
/// disjunction of literals, or a conjunction of those, and returns its
/// distributed clauses with zero-weight literals and empty clauses removed.
/// Returns nullopt for any other shape.
std::optional<DistributedCnf> collect_cnf(const WstlFormula& phi);

}  // namespace wstl

#endif  // WSTL_CORE_CNF_HPP_
