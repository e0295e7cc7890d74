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

#include <memory>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "psvgd/rng.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Operations with a square-root factor L of the prior covariance, Γ = L Lᵀ.
enum class FactorOp {
  kApply,           // L v
  kApplyTranspose,  // Lᵀ v
  kSolve,           // L⁻¹ v
  kSolveTranspose,  // L⁻ᵀ v
};

class Prior {
 public:
  virtual ~Prior() = default;

  virtual Index dim() const = 0;
  virtual Vector sample(Engine& engine) const = 0;

  // Log density up to an additive constant.
  virtual double log_density(const Vector& x) const = 0;
  virtual Vector grad_log_density(const Vector& x) const = 0;

  // Maps x onto the support. No-op for priors with full support.
  virtual void project_to_support(Eigen::Ref<Vector> x) const { (void)x; }
  virtual bool in_support(const Vector& x) const {
    (void)x;
    return true;
  }

  virtual bool is_gaussian() const = 0;

  virtual Vector mean() const = 0;
  virtual Vector variance() const = 0;
  virtual Matrix covariance() const = 0;

  // Applies `op` to every column of `columns`. For non-Gaussian priors the
  // factor is that of the moment-matched covariance.
  virtual Matrix covariance_factor(FactorOp op, const Matrix& columns) const = 0;
};

class GaussianPrior final : public Prior {
 public:
  // Dense covariance; must be symmetric to 1e-12 relative and admit a
  // Cholesky factorization, otherwise ConfigError.
  static GaussianPrior from_covariance(Vector mean, const Matrix& covariance);

  // Sparse precision Γ⁻¹, factorized once without reordering (the intended
  // inputs are banded).
  static GaussianPrior from_precision(Vector mean, const SparseMatrix& precision);

  static GaussianPrior isotropic(Index dim, double variance = 1.0);

  Index dim() const override { return mean_.size(); }
  Vector sample(Engine& engine) const override;
  double log_density(const Vector& x) const override;
  Vector grad_log_density(const Vector& x) const override;
  bool is_gaussian() const override { return true; }
  Vector mean() const override { return mean_; }
  Vector variance() const override;
  Matrix covariance() const override;
  Matrix covariance_factor(FactorOp op, const Matrix& columns) const override;

  // Γ⁻¹ v.
  Vector apply_precision(const Vector& v) const;

 private:
  GaussianPrior() = default;

  Vector mean_;
  // Exactly one representation is populated.
  std::optional<Eigen::LLT<Matrix>> covariance_llt_;
  SparseMatrix precision_;
  SparseMatrix precision_factor_;  // R with Γ⁻¹ = R Rᵀ, lower triangular
};

class UniformPrior final : public Prior {
 public:
  UniformPrior(Vector lower, Vector upper);
  static UniformPrior box(Index dim, double lower, double upper);

  Index dim() const override { return lower_.size(); }
  Vector sample(Engine& engine) const override;

  // Flat inside the closed box; DomainError outside.
  double log_density(const Vector& x) const override;
  Vector grad_log_density(const Vector& x) const override;

  // Componentwise clamp to [lower, upper].
  void project_to_support(Eigen::Ref<Vector> x) const override;
  bool in_support(const Vector& x) const override;

  bool is_gaussian() const override { return false; }
  Vector mean() const override;
  Vector variance() const override;
  Matrix covariance() const override;
  Matrix covariance_factor(FactorOp op, const Matrix& columns) const override;

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  void check_inside(const Vector& x) const;

  Vector lower_;
  Vector upper_;
};

// Tridiagonal FEM precision 0.1·K + M of (−0.1Δ + I) on a uniform grid of
// `nodes` points over [0, 1] with natural boundary conditions and lumped
// mass. Its inverse is the nodal covariance of the field.
SparseMatrix laplacian_precision(Index nodes, double diffusion = 0.1);

}  // namespace psvgd
