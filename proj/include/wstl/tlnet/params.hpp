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

#ifndef WSTL_TLNET_PARAMS_HPP_
#define WSTL_TLNET_PARAMS_HPP_

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "wstl/autodiff/tape.hpp"
#include "wstl/core/predicate.hpp"
#include "wstl/core/render.hpp"
#include "wstl/numeric.hpp"

namespace wstl::tlnet {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Task clause (eventually) and constraint clause (globally).
enum class Clause : int { F = 0, G = 1 };
inline constexpr std::array<Clause, 2> kClauses{Clause::F, Clause::G};

inline constexpr std::size_t index(Clause c) { return static_cast<std::size_t>(c); }

/// Two N_AP x 2N_AP score matrices. Effective weights are exp(score)
/// normalized jointly over the active entries of each matrix; masked entries
/// are exactly zero. Column j < N_AP is predicate j, column j + N_AP its
/// negation.
struct TlnetParams {
  std::array<Eigen::MatrixXd, 2> scores;
  std::array<BoolMatrix, 2> masks;
  std::vector<Literal> predicate_order;

  /// All entries active, scores uniform in [-init_range, init_range].
  static TlnetParams initialize(const std::vector<std::shared_ptr<const PredicateSpec>>& predicates, Rng& rng,
                                double init_range = 0.1);

  Eigen::Index n_ap() const { return scores[0].rows(); }

  /// Shapes, literal order, finiteness, and (unless allow_empty) at least
  /// one active entry per matrix. Throws StructuralError.
  void validate(bool allow_empty = false) const;

  std::size_t active_count(Clause c) const { return static_cast<std::size_t>(masks[index(c)].count()); }
  std::size_t active_count() const { return active_count(Clause::F) + active_count(Clause::G); }

  /// Active scores, F row-major then G row-major. This is the optimizer's
  /// parameter vector.
  std::vector<double> active_scores() const;
  void set_active_scores(std::span<const double> values);

  Eigen::MatrixXd effective(Clause c) const;
};

/// Joint exp-normalization of the active scores, generic over double and
/// ad::Var. Masked entries are the constant zero.
template <typename Scalar>
std::array<Matrix<Scalar>, 2> effective_weights(const TlnetParams& params, std::span<const Scalar> active) {
  std::array<Matrix<Scalar>, 2> out;
  std::size_t offset = 0;
  for (Clause c : kClauses) {
    const auto& mask = params.masks[index(c)];
    const auto n = params.active_count(c);
    auto& w = out[index(c)];
    w = Matrix<Scalar>::Constant(mask.rows(), mask.cols(), Scalar(0.0));
    if (n == 0) continue;
    std::vector<Scalar> p;
    auto block = active.subspan(offset, n);
    if constexpr (std::is_same_v<Scalar, double>) {
      double hi = block[0];
      for (double s : block) hi = std::max(hi, s);
      double total = 0.0;
      for (double s : block) total += p.emplace_back(std::exp(s - hi));
      for (double& x : p) x /= total;
    } else {
      p = ad::normalize_exp(block);
    }
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        if (mask(i, j)) w(i, j) = p[k++];
      }
    }
    offset += n;
  }
  return out;
}

/// Checkpoint encoding: scores as decimal strings, masks as 0/1, literal
/// order as {predicate, negated}. Round-trips bit-exactly.
nlohmann::json to_json(const TlnetParams& params);
TlnetParams params_from_json(const nlohmann::json& j, const PredicateRegistry& registry);

}  // namespace wstl::tlnet

#endif  // WSTL_TLNET_PARAMS_HPP_
