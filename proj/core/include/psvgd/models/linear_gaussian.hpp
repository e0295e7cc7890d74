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
#include <memory>
#include <optional>
#include <string>

#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"

namespace psvgd {

struct LinearModelSpec {
  Index dim = 17;               // grid nodes, 2ⁿ + 1
  Index observations = 15;      // equispaced interior points j/(s+1)
  double noise_relative = 0.01; // σ = noise_relative · max|O u_true|
  double prior_diffusion = 0.1; // prior covariance (−αΔ + I)⁻¹
  std::uint64_t seed = 1;
};

// y = A x + ξ with ξ ~ N(0, σ²I) and a Gaussian prior. The posterior is
// N(x_MAP, Σ_y), Σ_y = (AᵀA/σ² + Σ_x⁻¹)⁻¹, stored densely at construction.
class LinearGaussianModel final : public InferenceModel {
 public:
  LinearGaussianModel(Matrix forward, double noise_std, Vector data,
                      std::shared_ptr<const GaussianPrior> prior,
                      std::optional<Vector> truth = std::nullopt);

  std::string name() const override { return "linear"; }
  Index dim() const override { return forward_.cols(); }

  double log_likelihood(const Vector& x) const override;
  Vector grad_log_likelihood(const Vector& x) const override;
  std::pair<double, Vector> log_likelihood_and_grad(const Vector& x) const override;
  GroundTruth ground_truth() const override;

  const Matrix& forward() const { return forward_; }
  double noise_std() const { return noise_std_; }
  const Vector& data() const { return data_; }
  const std::shared_ptr<const GaussianPrior>& prior() const { return prior_; }

  const Matrix& posterior_covariance() const { return posterior_cov_; }
  const Vector& map_point() const { return map_; }

 private:
  Matrix forward_;
  double noise_std_;
  Vector data_;
  std::shared_ptr<const GaussianPrior> prior_;
  std::optional<Vector> truth_;
  Matrix posterior_cov_;
  Vector map_;
};

// Piecewise-linear FEM for −u'' + u = x on (0, 1), u(0) = 0, u(1) = 1, on
// `nodes` uniform nodes; x is the vector of nodal values. Returns the affine
// map from x to the observed values of u at the points j/(s+1):
// O u = matrix · x + offset. `offset` carries the Dirichlet lift.
struct ObservedSolutionMap {
  Matrix matrix;
  Vector offset;
};
ObservedSolutionMap diffusion_reaction_observation_map(Index nodes, Index observations);

// Assembles the FEM forward map, draws x_true from the prior and synthesizes
// data with relative noise; the lift is subtracted from the data so the model
// is linear. The prior is N(0, Σ_x) with Σ_x⁻¹ = laplacian_precision(d).
LinearGaussianModel linear_build(const LinearModelSpec& spec);

}  // namespace psvgd
