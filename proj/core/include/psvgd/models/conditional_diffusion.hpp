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

#include <cstdint>
#include <optional>
#include <string>

#include "psvgd/model.hpp"

namespace psvgd {

struct DiffusionSpec {
  Index steps = 100;        // d, Euler-Maruyama steps over (0, 1]
  Index observations = 20;  // equispaced, must divide `steps`
  double noise_std = 0.1;
  std::uint64_t seed = 1;
};

// du = β(u) dt + dB on (0, 1], u(0) = 0, with β(u) = 10u(1−u²)/(1+u²).
// The parameter is the vector of whitened increments x_k ~ N(0, 1), the
// Brownian increment being √Δt·x_k, so the prior is N(0, I).
class ConditionalDiffusionModel final : public InferenceModel {
 public:
  ConditionalDiffusionModel(Index steps, Index observations, double noise_std, Vector data,
                            std::optional<Vector> truth = std::nullopt);

  std::string name() const override { return "diffusion"; }
  Index dim() const override { return steps_; }

  double log_likelihood(const Vector& x) const override;
  Vector grad_log_likelihood(const Vector& x) const override;
  std::pair<double, Vector> log_likelihood_and_grad(const Vector& x) const override;
  GroundTruth ground_truth() const override;

  double dt() const { return 1.0 / static_cast<double>(steps_); }
  Index observations() const { return observations_; }
  double noise_std() const { return noise_std_; }
  const Vector& data() const { return data_; }

  // Step index of observation i (0-based): (i+1)·steps/observations.
  Index observation_step(Index i) const { return (i + 1) * (steps_ / observations_); }

  // u_0 … u_d.
  Vector path(const Vector& x) const;
  // u at the observation steps.
  Vector forward(const Vector& x) const;

  static double drift(double u);
  static double drift_derivative(double u);

 private:
  Index steps_;
  Index observations_;
  double noise_std_;
  Vector data_;
  std::optional<Vector> truth_;
};

// Brownian path B(t_k) = √Δt·Σ_{j<k} x_j for k = 1…d.
Vector brownian_path(const Vector& increments);

// Draws x_true ~ N(0, I) and noisy observations of its solution path.
ConditionalDiffusionModel diffusion_build(const DiffusionSpec& spec);

}  // namespace psvgd
