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

#include "wstl/tlnet/params.hpp"

#include <string>

namespace wstl::tlnet {

TlnetParams TlnetParams::initialize(const std::vector<std::shared_ptr<const PredicateSpec>>& predicates, Rng& rng,
                                    double init_range) {
  if (predicates.empty()) throw ConfigError("tlnet: at least one predicate is required");
  const auto n = static_cast<Eigen::Index>(predicates.size());
  TlnetParams p;
  for (const auto& pred : predicates) p.predicate_order.push_back(Literal::of(pred, false));
  for (const auto& pred : predicates) p.predicate_order.push_back(Literal::of(pred, true));
  for (Clause c : kClauses) {
    auto& s = p.scores[index(c)];
    s.resize(n, 2 * n);
    // Row-major draw order so the stream does not depend on storage order.
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < 2 * n; ++j) s(i, j) = uniform(rng, -init_range, init_range);
    }
    p.masks[index(c)] = BoolMatrix::Constant(n, 2 * n, true);
  }
  return p;
}

void TlnetParams::validate(bool allow_empty) const {
  const Eigen::Index n = n_ap();
  if (n == 0) throw StructuralError("tlnet params: empty weight matrices");
  if (predicate_order.size() != static_cast<std::size_t>(2 * n)) {
    throw StructuralError("tlnet params: predicate order must list 2 N_AP literals");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& pos = predicate_order[static_cast<std::size_t>(j)].key;
    const auto& neg = predicate_order[static_cast<std::size_t>(j + n)].key;
    if (pos.negated || !neg.negated || pos.id != neg.id) {
      throw StructuralError("tlnet params: literal order must be the predicates followed by their negations");
    }
  }
  for (Clause c : kClauses) {
    const auto& s = scores[index(c)];
    const auto& m = masks[index(c)];
    if (s.rows() != n || s.cols() != 2 * n || m.rows() != n || m.cols() != 2 * n) {
      throw StructuralError("tlnet params: matrices must be N_AP x 2 N_AP");
    }
    if (!s.allFinite()) throw StructuralError("tlnet params: non-finite score");
    if (!allow_empty && active_count(c) == 0) {
      throw StructuralError(std::string("tlnet params: no active entry in the ") + (c == Clause::F ? "F" : "G") +
                            " matrix");
    }
  }
}

std::vector<double> TlnetParams::active_scores() const {
  std::vector<double> out;
  out.reserve(active_count());
  for (Clause c : kClauses) {
    const auto& s = scores[index(c)];
    const auto& m = masks[index(c)];
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (m(i, j)) out.push_back(s(i, j));
      }
    }
  }
  return out;
}

void TlnetParams::set_active_scores(std::span<const double> values) {
  if (values.size() != active_count()) throw InputError("tlnet params: active score count mismatch");
  std::size_t k = 0;
  for (Clause c : kClauses) {
    auto& s = scores[index(c)];
    const auto& m = masks[index(c)];
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (m(i, j)) s(i, j) = values[k++];
      }
    }
  }
}

Eigen::MatrixXd TlnetParams::effective(Clause c) const {
  const auto active = active_scores();
  return effective_weights<double>(*this, active)[index(c)];
}

namespace {

const char* clause_key(Clause c) { return c == Clause::F ? "F" : "G"; }

}  // namespace

nlohmann::json to_json(const TlnetParams& params) {
  nlohmann::json j;
  auto order = nlohmann::json::array();
  for (const auto& lit : params.predicate_order) {
    order.push_back({{"predicate", lit.key.id}, {"negated", lit.key.negated}});
  }
  j["predicate_order"] = std::move(order);
  for (Clause c : kClauses) {
    const auto& s = params.scores[index(c)];
    const auto& m = params.masks[index(c)];
    auto scores = nlohmann::json::array();
    auto mask = nlohmann::json::array();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      auto srow = nlohmann::json::array();
      auto mrow = nlohmann::json::array();
      for (Eigen::Index k = 0; k < s.cols(); ++k) {
        srow.push_back(to_decimal_string(s(i, k)));
        mrow.push_back(m(i, k) ? 1 : 0);
      }
      scores.push_back(std::move(srow));
      mask.push_back(std::move(mrow));
    }
    j["scores"][clause_key(c)] = std::move(scores);
    j["masks"][clause_key(c)] = std::move(mask);
  }
  return j;
}

TlnetParams params_from_json(const nlohmann::json& j, const PredicateRegistry& registry) {
  TlnetParams p;
  try {
    for (const auto& entry : j.at("predicate_order")) {
      const auto id = entry.at("predicate").get<std::string>();
      const auto it = registry.find(id);
      if (it == registry.end()) throw ConfigError("checkpoint: unknown predicate '" + id + "'");
      p.predicate_order.push_back(Literal::of(it->second, entry.at("negated").get<bool>()));
    }
    const auto n = static_cast<Eigen::Index>(p.predicate_order.size() / 2);
    for (Clause c : kClauses) {
      const auto& scores = j.at("scores").at(clause_key(c));
      const auto& mask = j.at("masks").at(clause_key(c));
      if (scores.size() != static_cast<std::size_t>(n) || mask.size() != static_cast<std::size_t>(n)) {
        throw StructuralError("checkpoint: matrix row count does not match the predicate order");
      }
      auto& s = p.scores[index(c)];
      auto& m = p.masks[index(c)];
      s.resize(n, 2 * n);
      m.resize(n, 2 * n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& srow = scores[static_cast<std::size_t>(i)];
        const auto& mrow = mask[static_cast<std::size_t>(i)];
        if (srow.size() != static_cast<std::size_t>(2 * n) || mrow.size() != static_cast<std::size_t>(2 * n)) {
          throw StructuralError("checkpoint: matrix column count does not match the predicate order");
        }
        for (Eigen::Index k = 0; k < 2 * n; ++k) {
          s(i, k) = parse_decimal_string(srow[static_cast<std::size_t>(k)].get<std::string>());
          m(i, k) = mrow[static_cast<std::size_t>(k)].get<int>() != 0;
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("checkpoint: ") + e.what());
  }
  p.validate(true);
  return p;
}

}  // namespace wstl::tlnet
