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

#include "psvgd/prior.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "psvgd/errors.hpp"

namespace psvgd {

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ConfigError(std::string(what) + " has non-finite entries");
}

}  // namespace

GaussianPrior GaussianPrior::from_covariance(Vector mean, const Matrix& covariance) {
  const Index d = mean.size();
  if (d < 1) throw ConfigError("prior dimension must be at least 1");
  if (covariance.rows() != d || covariance.cols() != d) {
    throw ConfigError("prior covariance is " + std::to_string(covariance.rows()) + "x" +
                      std::to_string(covariance.cols()) + ", expected " + std::to_string(d) +
                      "x" + std::to_string(d));
  }
  require_finite(mean, "prior mean");
  if (!covariance.allFinite()) throw ConfigError("prior covariance has non-finite entries");

  const double scale = covariance.cwiseAbs().maxCoeff();
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("prior covariance is not symmetric");
  }

  GaussianPrior prior;
  prior.mean_ = std::move(mean);
  prior.covariance_llt_.emplace(covariance);
  if (scale == 0.0 || prior.covariance_llt_->info() != Eigen::Success) {
    throw ConfigError("prior covariance is not positive definite");
  }
  // LLT does not flag tiny or negative pivots reliably; inspect the factor.
  const Vector diag = prior.covariance_llt_->matrixLLT().diagonal();
  if (!diag.allFinite() || diag.minCoeff() <= 0.0) {
    throw ConfigError("prior covariance is not positive definite");
  }
  return prior;
}

GaussianPrior GaussianPrior::from_precision(Vector mean, const SparseMatrix& precision) {
  const Index d = mean.size();
  if (d < 1) throw ConfigError("prior dimension must be at least 1");
  if (precision.rows() != d || precision.cols() != d) {
    throw ConfigError("prior precision has the wrong shape");
  }
  require_finite(mean, "prior mean");

  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(precision);
  if (llt.info() != Eigen::Success) throw ConfigError("prior precision is not positive definite");

  GaussianPrior prior;
  prior.mean_ = std::move(mean);
  prior.precision_ = precision;
  prior.precision_factor_ = llt.matrixL();
  prior.precision_factor_.makeCompressed();
  return prior;
}

GaussianPrior GaussianPrior::isotropic(Index dim, double variance) {
  if (!(variance > 0.0)) throw ConfigError("prior variance must be positive");
  return from_covariance(Vector::Zero(dim), variance * Matrix::Identity(dim, dim));
}

Vector GaussianPrior::sample(Engine& engine) const {
  const Vector z = standard_normal_vector(engine, dim());
  return mean_ + covariance_factor(FactorOp::kApply, z);
}

Vector GaussianPrior::apply_precision(const Vector& v) const {
  if (covariance_llt_) return covariance_llt_->solve(v);
  return precision_ * v;
}

double GaussianPrior::log_density(const Vector& x) const {
  const Vector centered = x - mean_;
  return -0.5 * centered.dot(apply_precision(centered));
}

Vector GaussianPrior::grad_log_density(const Vector& x) const {
  return -apply_precision(x - mean_);
}

Vector GaussianPrior::variance() const {
  if (covariance_llt_) return covariance_llt_->reconstructedMatrix().diagonal();
  // diag(R⁻ᵀR⁻¹): squared column norms of R⁻¹.
  const Matrix inv_factor = covariance_factor(FactorOp::kApply, Matrix::Identity(dim(), dim()));
  return inv_factor.rowwise().squaredNorm();
}

Matrix GaussianPrior::covariance() const {
  if (covariance_llt_) return covariance_llt_->reconstructedMatrix();
  const Matrix factor = covariance_factor(FactorOp::kApply, Matrix::Identity(dim(), dim()));
  return factor * factor.transpose();
}

Matrix GaussianPrior::covariance_factor(FactorOp op, const Matrix& columns) const {
  if (columns.rows() != dim()) throw ConfigError("covariance factor operand has the wrong size");
  if (covariance_llt_) {
    const auto lower = covariance_llt_->matrixL();
    switch (op) {
      case FactorOp::kApply: return lower * columns;
      case FactorOp::kApplyTranspose: return lower.transpose() * columns;
      case FactorOp::kSolve: return lower.solve(columns);
      case FactorOp::kSolveTranspose: return lower.transpose().solve(columns);
    }
  }
  // Γ⁻¹ = R Rᵀ, so L = R⁻ᵀ.
  const auto r = precision_factor_.triangularView<Eigen::Lower>();
  switch (op) {
    case FactorOp::kApply: return r.transpose().solve(columns);
    case FactorOp::kApplyTranspose: return r.solve(columns);
    case FactorOp::kSolve: return Matrix(precision_factor_.transpose() * columns);
    case FactorOp::kSolveTranspose: return Matrix(precision_factor_ * columns);
  }
  return columns;
}

UniformPrior::UniformPrior(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1) throw ConfigError("prior dimension must be at least 1");
  if (lower_.size() != upper_.size()) throw ConfigError("uniform prior bounds differ in size");
  require_finite(lower_, "uniform prior lower bound");
  require_finite(upper_, "uniform prior upper bound");
  if (!(lower_.array() < upper_.array()).all()) {
    throw ConfigError("uniform prior requires lower < upper componentwise");
  }
}

UniformPrior UniformPrior::box(Index dim, double lower, double upper) {
  return UniformPrior(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
}

Vector UniformPrior::sample(Engine& engine) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(dim());
  for (Index i = 0; i < dim(); ++i) x[i] = lower_[i] + (upper_[i] - lower_[i]) * unit(engine);
  return x;
}

bool UniformPrior::in_support(const Vector& x) const {
  return x.size() == dim() && ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all();
}

void UniformPrior::check_inside(const Vector& x) const {
  if (x.size() != dim()) throw ConfigError("uniform prior evaluated at a point of the wrong size");
  if (!in_support(x)) throw DomainError("point lies outside the uniform prior support");
}

double UniformPrior::log_density(const Vector& x) const {
  check_inside(x);
  return 0.0;
}

Vector UniformPrior::grad_log_density(const Vector& x) const {
  check_inside(x);
  return Vector::Zero(dim());
}

void UniformPrior::project_to_support(Eigen::Ref<Vector> x) const {
  x = x.cwiseMax(lower_).cwiseMin(upper_);
}

Vector UniformPrior::mean() const { return 0.5 * (lower_ + upper_); }

Vector UniformPrior::variance() const { return (upper_ - lower_).array().square() / 12.0; }

Matrix UniformPrior::covariance() const { return variance().asDiagonal(); }

Matrix UniformPrior::covariance_factor(FactorOp op, const Matrix& columns) const {
  if (columns.rows() != dim()) throw ConfigError("covariance factor operand has the wrong size");
  const Vector stddev = variance().cwiseSqrt();
  switch (op) {
    case FactorOp::kApply:
    case FactorOp::kApplyTranspose: return stddev.asDiagonal() * columns;
    case FactorOp::kSolve:
    case FactorOp::kSolveTranspose: return stddev.cwiseInverse().asDiagonal() * columns;
  }
  return columns;
}

SparseMatrix laplacian_precision(Index nodes, double diffusion) {
  if (nodes < 2) throw ConfigError("laplacian precision needs at least two nodes");
  const double h = 1.0 / static_cast<double>(nodes - 1);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(3 * nodes));
  for (Index i = 0; i < nodes; ++i) {
    const bool boundary = (i == 0 || i == nodes - 1);
    const double stiffness = (boundary ? 1.0 : 2.0) / h;
    const double mass = (boundary ? 0.5 : 1.0) * h;
    entries.emplace_back(i, i, diffusion * stiffness + mass);
    if (i + 1 < nodes) {
      entries.emplace_back(i, i + 1, -diffusion / h);
      entries.emplace_back(i + 1, i, -diffusion / h);
    }
  }
  SparseMatrix precision(nodes, nodes);
  precision.setFromTriplets(entries.begin(), entries.end());
  precision.makeCompressed();
  return precision;
}

}  // namespace psvgd
