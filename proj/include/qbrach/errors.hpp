// Copyright 2026 The qbrach Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qbrach {

/// Failure categories. The CLI maps them onto exit codes 1, 2 and 3.
enum class ErrorKind { Validation, NoSolution, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad input: wrong dimensions, unnormalized states, violated preconditions.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

/// The requested extremal does not exist (or not inside the search window).
class NoSolutionError : public Error {
 public:
  explicit NoSolutionError(const std::string& what)
      : Error(ErrorKind::NoSolution, what) {}
};

/// Numerical breakdown: singular gauge, step-size exhaustion, non-convergence.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

/// lambda0 hit zero, so G = sum(lambda_j / lambda0) X_j is undefined.
class SingularGaugeError : public NumericalError {
 public:
  explicit SingularGaugeError(const std::string& what) : NumericalError(what) {}
};

}  // namespace qbrach
