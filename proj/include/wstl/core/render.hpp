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

#ifndef WSTL_CORE_RENDER_HPP_
#define WSTL_CORE_RENDER_HPP_

#include <map>
#include <memory>
#include <string>

#include "json.hpp"

#include "wstl/core/formula.hpp"

namespace wstl {

/// Human-readable rendering, e.g.
///
///   0.5F[1.00 ψ_goal] ∧ 0.5G[0.30 ψ_goal ∨ 0.70 ¬ψ_hazard]
///
/// CNF bodies print distributed literal weights with `decimals` places;
/// operator weights on non-literal operands print with trailing zeros
/// trimmed. Zero-weight operands are omitted, literals are sorted by
/// predicate id inside a clause and clauses are sorted by their unweighted
/// text, so structurally equal formulas render byte-identically.
std::string to_canonical_string(const WstlFormula& phi, int decimals = 2);

using PredicateRegistry = std::map<std::string, std::shared_ptr<const PredicateSpec>>;

/// JSON tree mirroring WstlFormula. Weights are shortest round-trip decimal
/// strings, so to_json -> formula_from_json is exact.
nlohmann::json to_json(const WstlFormula& phi);

/// Literals are bound against `registry`; ids missing from it throw
/// ConfigError unless `allow_unbound` is set. Malformed trees throw
/// StructuralError.
WstlFormula formula_from_json(const nlohmann::json& j, const PredicateRegistry& registry = {},
                              bool allow_unbound = true);

}  // namespace wstl

#endif  // WSTL_CORE_RENDER_HPP_
