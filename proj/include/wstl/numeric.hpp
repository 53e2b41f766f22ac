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

#ifndef WSTL_NUMERIC_HPP_
#define WSTL_NUMERIC_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace wstl {

/// Shortest decimal string that parses back to exactly `value`.
std::string to_decimal_string(double value);

/// Inverse of to_decimal_string. Throws InputError on malformed text.
double parse_decimal_string(std::string_view text);

using Rng = std::mt19937_64;

/// Independent stream seed for sub-task `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace wstl

#endif  // WSTL_NUMERIC_HPP_
