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

#include <optional>
#include <string>
#include <utility>

#include "psvgd/types.hpp"

namespace psvgd {

// Known answers a benchmark problem can provide for scoring a run.
struct GroundTruth {
  std::optional<Vector> parameter;           // synthetic truth used to generate data
  std::optional<Vector> posterior_mean;      // analytic, when available
  std::optional<Vector> posterior_variance;  // analytic pointwise variance
};

// Likelihood f(x) of the observed data. Implementations must be safe to call
// concurrently from several threads.
class InferenceModel {
 public:
  virtual ~InferenceModel() = default;

  virtual std::string name() const = 0;
  virtual Index dim() const = 0;

  virtual double log_likelihood(const Vector& x) const = 0;
  virtual Vector grad_log_likelihood(const Vector& x) const = 0;

  virtual std::pair<double, Vector> log_likelihood_and_grad(const Vector& x) const {
    return {log_likelihood(x), grad_log_likelihood(x)};
  }

  virtual GroundTruth ground_truth() const { return {}; }
};

// f ≡ 1. The posterior equals the prior.
class FlatModel final : public InferenceModel {
 public:
  explicit FlatModel(Index dim) : dim_(dim) {}

  std::string name() const override { return "flat"; }
  Index dim() const override { return dim_; }
  double log_likelihood(const Vector&) const override { return 0.0; }
  Vector grad_log_likelihood(const Vector&) const override { return Vector::Zero(dim_); }

 private:
  Index dim_;
};

}  // namespace psvgd
