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

#include "psvgd/models/conditional_diffusion.hpp"

#include <cmath>
#include <utility>

#include "psvgd/errors.hpp"
#include "psvgd/rng.hpp"

namespace psvgd {

ConditionalDiffusionModel::ConditionalDiffusionModel(Index steps, Index observations,
                                                     double noise_std, Vector data,
                                                     std::optional<Vector> truth)
    : steps_(steps),
      observations_(observations),
      noise_std_(noise_std),
      data_(std::move(data)),
      truth_(std::move(truth)) {
  if (steps_ < 1) throw ConfigError("diffusion needs at least one step");
  if (observations_ < 1 || steps_ % observations_ != 0) {
    throw ConfigError("observation count must divide the step count");
  }
  if (data_.size() != observations_) throw ConfigError("diffusion data has the wrong size");
  if (!data_.allFinite()) throw ConfigError("diffusion data must be finite");
  if (!(noise_std_ > 0.0)) throw ConfigError("noise standard deviation must be positive");
  if (truth_ && truth_->size() != steps_) throw ConfigError("truth has the wrong size");
}

double ConditionalDiffusionModel::drift(double u) {
  const double u2 = u * u;
  return 10.0 * u * (1.0 - u2) / (1.0 + u2);
}

double ConditionalDiffusionModel::drift_derivative(double u) {
  const double u2 = u * u;
  const double denom = 1.0 + u2;
  return 10.0 * (1.0 - 4.0 * u2 - u2 * u2) / (denom * denom);
}

Vector ConditionalDiffusionModel::path(const Vector& x) const {
  if (x.size() != steps_) throw ConfigError("increment vector has the wrong size");
  const double step = dt();
  const double scale = std::sqrt(step);
  Vector u(steps_ + 1);
  u[0] = 0.0;
  for (Index k = 0; k < steps_; ++k) u[k + 1] = u[k] + drift(u[k]) * step + scale * x[k];
  return u;
}

Vector ConditionalDiffusionModel::forward(const Vector& x) const {
  const Vector u = path(x);
  Vector out(observations_);
  for (Index i = 0; i < observations_; ++i) out[i] = u[observation_step(i)];
  return out;
}

double ConditionalDiffusionModel::log_likelihood(const Vector& x) const {
  const Vector residual = data_ - forward(x);
  return -0.5 * residual.squaredNorm() / (noise_std_ * noise_std_);
}

Vector ConditionalDiffusionModel::grad_log_likelihood(const Vector& x) const {
  return log_likelihood_and_grad(x).second;
}

std::pair<double, Vector> ConditionalDiffusionModel::log_likelihood_and_grad(
    const Vector& x) const {
  const Vector u = path(x);
  const double inv_var = 1.0 / (noise_std_ * noise_std_);
  const double step = dt();
  const double scale = std::sqrt(step);

  // Source term ∂ log f / ∂u_k, nonzero only at observation steps.
  Vector source = Vector::Zero(steps_ + 1);
  double value = 0.0;
  for (Index i = 0; i < observations_; ++i) {
    const Index k = observation_step(i);
    const double r = data_[i] - u[k];
    value -= 0.5 * inv_var * r * r;
    source[k] = inv_var * r;
  }

  // λ_k = source_k + λ_{k+1}(1 + β'(u_k)Δt), with ∂u_{k+1}/∂x_k = √Δt.
  Vector grad(steps_);
  double adjoint = source[steps_];
  for (Index k = steps_ - 1; k >= 0; --k) {
    grad[k] = scale * adjoint;
    adjoint = source[k] + adjoint * (1.0 + drift_derivative(u[k]) * step);
  }
  return {value, grad};
}

GroundTruth ConditionalDiffusionModel::ground_truth() const {
  GroundTruth truth;
  truth.parameter = truth_;
  return truth;
}

Vector brownian_path(const Vector& increments) {
  const double scale = std::sqrt(1.0 / static_cast<double>(increments.size()));
  Vector b(increments.size());
  double acc = 0.0;
  for (Index k = 0; k < increments.size(); ++k) {
    acc += scale * increments[k];
    b[k] = acc;
  }
  return b;
}

ConditionalDiffusionModel diffusion_build(const DiffusionSpec& spec) {
  if (spec.steps < 1 || spec.observations < 1 || spec.steps % spec.observations != 0) {
    throw ConfigError("diffusion steps must be a positive multiple of the observation count");
  }
  Engine truth_engine = make_engine(spec.seed, StreamDomain::kModelData, 0);
  const Vector truth = standard_normal_vector(truth_engine, spec.steps);

  // Build once without data to reuse the forward map.
  const ConditionalDiffusionModel probe(spec.steps, spec.observations, spec.noise_std,
                                        Vector::Zero(spec.observations));
  Engine noise_engine = make_engine(spec.seed, StreamDomain::kModelData, 1);
  const Vector data = probe.forward(truth) +
                      spec.noise_std * standard_normal_vector(noise_engine, spec.observations);
  return ConditionalDiffusionModel(spec.steps, spec.observations, spec.noise_std, data, truth);
}

}  // namespace psvgd
