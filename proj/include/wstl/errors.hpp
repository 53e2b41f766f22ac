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

#ifndef WSTL_ERRORS_HPP_
#define WSTL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wstl {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// its exit-code taxonomy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown feature map, bad hyperparameter range,
/// infeasible generator geometry.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller handed in data that violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic outside an operation's domain (e.g. all-zero aggregation weights).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A formula or clause does not have the shape an operation requires.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Every predicate was filtered out; nothing left to explain with.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss during optimization.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, int epoch, int batch)
      : Error(what + " (epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch) + ")"),
        epoch_(epoch),
        batch_(batch) {}

  int epoch() const noexcept { return epoch_; }
  int batch() const noexcept { return batch_; }

 private:
  int epoch_;
  int batch_;
};

}  // namespace wstl

#endif  // WSTL_ERRORS_HPP_
