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

#include "psvgd/models/linear_gaussian.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "psvgd/errors.hpp"
#include "psvgd/rng.hpp"

namespace psvgd {

namespace {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Dense Γ⁻¹ column by column; the priors used here are small enough.
Matrix dense_precision(const GaussianPrior& prior) {
  const Index d = prior.dim();
  Matrix q(d, d);
  for (Index j = 0; j < d; ++j) q.col(j) = prior.apply_precision(Vector::Unit(d, j));
  return 0.5 * (q + q.transpose());
}

}  // namespace

LinearGaussianModel::LinearGaussianModel(Matrix forward, double noise_std, Vector data,
                                         std::shared_ptr<const GaussianPrior> prior,
                                         std::optional<Vector> truth)
    : forward_(std::move(forward)),
      noise_std_(noise_std),
      data_(std::move(data)),
      prior_(std::move(prior)),
      truth_(std::move(truth)) {
  if (!prior_) throw ConfigError("linear model needs a prior");
  if (forward_.cols() < 1 || forward_.cols() != prior_->dim()) {
    throw ConfigError("forward matrix columns must match the prior dimension");
  }
  if (forward_.rows() != data_.size()) throw ConfigError("data size must match forward rows");
  if (!(noise_std_ > 0.0) || !std::isfinite(noise_std_)) {
    throw ConfigError("noise standard deviation must be positive");
  }
  if (!forward_.allFinite() || !data_.allFinite()) {
    throw ConfigError("forward matrix and data must be finite");
  }
  if (truth_ && truth_->size() != forward_.cols()) throw ConfigError("truth has the wrong size");

  const double inv_var = 1.0 / (noise_std_ * noise_std_);
  const Matrix prior_precision = dense_precision(*prior_);
  const Matrix posterior_precision =
      inv_var * forward_.transpose() * forward_ + prior_precision;
  const Eigen::LLT<Matrix> llt(posterior_precision);
  if (llt.info() != Eigen::Success) throw NumericalError("posterior precision is not SPD");

  const Index d = forward_.cols();
  posterior_cov_ = llt.solve(Matrix::Identity(d, d));
  posterior_cov_ = 0.5 * (posterior_cov_ + posterior_cov_.transpose());
  map_ = llt.solve(inv_var * forward_.transpose() * data_ + prior_precision * prior_->mean());
}

double LinearGaussianModel::log_likelihood(const Vector& x) const {
  const Vector residual = data_ - forward_ * x;
  return -0.5 * residual.squaredNorm() / (noise_std_ * noise_std_);
}

Vector LinearGaussianModel::grad_log_likelihood(const Vector& x) const {
  return forward_.transpose() * (data_ - forward_ * x) / (noise_std_ * noise_std_);
}

std::pair<double, Vector> LinearGaussianModel::log_likelihood_and_grad(const Vector& x) const {
  const Vector residual = data_ - forward_ * x;
  const double inv_var = 1.0 / (noise_std_ * noise_std_);
  return {-0.5 * inv_var * residual.squaredNorm(), inv_var * (forward_.transpose() * residual)};
}

GroundTruth LinearGaussianModel::ground_truth() const {
  GroundTruth truth;
  truth.parameter = truth_;
  truth.posterior_mean = map_;
  truth.posterior_variance = posterior_cov_.diagonal();
  return truth;
}

ObservedSolutionMap diffusion_reaction_observation_map(Index nodes, Index observations) {
  if (nodes < 3) throw ConfigError("FEM grid needs at least three nodes");
  if (observations < 1 || observations >= nodes) {
    throw ConfigError("observation count must lie in [1, nodes)");
  }
  const Index d = nodes;
  const Index m = d - 2;  // interior unknowns
  const double h = 1.0 / static_cast<double>(d - 1);

  // Stiffness + consistent mass for −u'' + u, and the mass matrix for the
  // load ∫ x φ_i with x interpolated on the same basis.
  Matrix system = Matrix::Zero(d, d);
  Matrix mass = Matrix::Zero(d, d);
  for (Index e = 0; e + 1 < d; ++e) {
    const Index a = e, b = e + 1;
    system(a, a) += 1.0 / h + h / 3.0;
    system(b, b) += 1.0 / h + h / 3.0;
    system(a, b) += -1.0 / h + h / 6.0;
    system(b, a) += -1.0 / h + h / 6.0;
    mass(a, a) += h / 3.0;
    mass(b, b) += h / 3.0;
    mass(a, b) += h / 6.0;
    mass(b, a) += h / 6.0;
  }

  const Matrix interior = system.block(1, 1, m, m);
  const Eigen::LLT<Matrix> llt(interior);
  if (llt.info() != Eigen::Success) throw NumericalError("FEM stiffness matrix is singular");

  // u_I = S_II⁻¹ (M_I· x − S_I,last · 1); u_0 = 0 drops out.
  Matrix solution(d, d);
  solution.setZero();
  solution.middleRows(1, m) = llt.solve(mass.middleRows(1, m));
  Vector lift = Vector::Zero(d);
  lift.segment(1, m) = -llt.solve(system.block(1, d - 1, m, 1));
  lift[d - 1] = 1.0;

  Matrix observe = Matrix::Zero(observations, d);
  for (Index j = 0; j < observations; ++j) {
    const double t = static_cast<double>(j + 1) / static_cast<double>(observations + 1);
    const double pos = t * static_cast<double>(d - 1);
    const Index i = std::min<Index>(static_cast<Index>(std::floor(pos)), d - 2);
    const double theta = pos - static_cast<double>(i);
    observe(j, i) += 1.0 - theta;
    observe(j, i + 1) += theta;
  }

  return ObservedSolutionMap{observe * solution, observe * lift};
}

LinearGaussianModel linear_build(const LinearModelSpec& spec) {
  if (spec.dim < 3 || !is_power_of_two(spec.dim - 1)) {
    throw ConfigError("linear model dimension must be 2^n + 1 with n >= 1, got " +
                      std::to_string(spec.dim));
  }
  if (!(spec.noise_relative > 0.0)) throw ConfigError("relative noise level must be positive");
  if (!(spec.prior_diffusion > 0.0)) throw ConfigError("prior diffusion must be positive");

  const ObservedSolutionMap map = diffusion_reaction_observation_map(spec.dim, spec.observations);
  auto prior = std::make_shared<const GaussianPrior>(GaussianPrior::from_precision(
      Vector::Zero(spec.dim), laplacian_precision(spec.dim, spec.prior_diffusion)));

  Engine truth_engine = make_engine(spec.seed, StreamDomain::kModelData, 0);
  const Vector truth = prior->sample(truth_engine);
  const Vector clean = map.matrix * truth;
  const double sigma = spec.noise_relative * (clean + map.offset).cwiseAbs().maxCoeff();
  if (!(sigma > 0.0)) throw NumericalError("noise level is zero for the drawn truth");

  Engine noise_engine = make_engine(spec.seed, StreamDomain::kModelData, 1);
  const Vector data = clean + sigma * standard_normal_vector(noise_engine, clean.size());

  return LinearGaussianModel(map.matrix, sigma, data, std::move(prior), truth);
}

}  // namespace psvgd
