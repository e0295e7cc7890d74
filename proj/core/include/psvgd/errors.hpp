// Copyright 2026 The psvgd Authors. All Rights Reserved.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psvgd {

// Invalid user input: bad configuration, shapes, factorization failures of
// user-supplied covariances. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point outside the support of a density (e.g. uniform prior box).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite values or degenerate numerics during a run. The CLI maps this to
// exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::ptrdiff_t iteration = -1)
      : std::runtime_error(what), iteration_(iteration) {}

  // Iteration at which the failure was detected, -1 if not inside a loop.
  std::ptrdiff_t iteration() const noexcept { return iteration_; }

 private:
  std::ptrdiff_t iteration_;
};

}  // namespace psvgd
