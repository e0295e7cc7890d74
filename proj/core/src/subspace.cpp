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

#include "psvgd/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "psvgd/errors.hpp"
#include "psvgd/parallel.hpp"

namespace psvgd {

GradientStack assemble_gradient_stack(const InferenceModel& model,
                                      const ParticleEnsemble& ensemble, WorkerPool* pool) {
  if (model.dim() != ensemble.dim()) throw ConfigError("model and ensemble dimensions differ");
  GradientStack stack{RowMatrix(ensemble.count(), ensemble.dim())};
  parallel_rows(pool, ensemble.count(), [&](Index m) {
    stack.grads.row(m) = model.grad_log_likelihood(ensemble.particle(m).transpose()).transpose();
  });
  if (!stack.grads.allFinite()) throw NumericalError("log-likelihood gradient is not finite");
  return stack;
}

ProjectionBasis generalized_eigensolve(const GradientStack& stack, const Prior& prior,
                                       Index max_rank, EigenPencil pencil) {
  const Index m = stack.count();
  const Index d = stack.dim();
  if (m < 1) throw ConfigError("gradient stack is empty");
  if (d != prior.dim()) throw ConfigError("gradient stack and prior dimensions differ");
  if (max_rank < 1) throw ConfigError("max_rank must be at least 1");
  if (!stack.grads.allFinite()) throw NumericalError("gradient stack has non-finite entries");

  const bool precision = pencil == EigenPencil::kPriorPrecision;

  // Columns are whitened gradients: Lᵀg (precision pencil) or L⁻¹g.
  const Matrix whitened = prior.covariance_factor(
      precision ? FactorOp::kApplyTranspose : FactorOp::kSolve, stack.grads.transpose());

  const Matrix gram = whitened.transpose() * whitened / static_cast<double>(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success) throw NumericalError("Gram eigensolve failed");

  const Index available = std::min(m, d);
  const Index rank = std::min(max_rank, available);

  // SelfAdjointEigenSolver sorts ascending.
  Vector spectrum(available);
  for (Index i = 0; i < available; ++i) {
    spectrum[i] = std::max(0.0, solver.eigenvalues()[m - 1 - i]);
  }

  // Eigenvectors of the whitened Ĥ: v_i = W u_i / sqrt(M λ_i). Directions with
  // numerically zero eigenvalue are completed from coordinate axes.
  const double cutoff = 1e-12 * std::max(spectrum[0], std::numeric_limits<double>::min());
  Matrix v(d, rank);
  Index filled = 0;
  for (; filled < rank && spectrum[filled] > cutoff; ++filled) {
    const Vector u = solver.eigenvectors().col(m - 1 - filled);
    v.col(filled) = whitened * u;
    v.col(filled).normalize();
  }
  for (Index axis = 0; filled < rank && axis < d; ++axis) {
    Vector candidate = Vector::Unit(d, axis);
    for (int pass = 0; pass < 2; ++pass) {
      candidate -= v.leftCols(filled) * (v.leftCols(filled).transpose() * candidate);
    }
    const double norm = candidate.norm();
    if (norm > 1e-6) v.col(filled++) = candidate / norm;
  }

  const Matrix raw = prior.covariance_factor(
      precision ? FactorOp::kApply : FactorOp::kSolveTranspose, v);

  Eigen::HouseholderQR<Matrix> qr(raw);
  Matrix psi = qr.householderQ() * Matrix::Identity(d, rank);
  for (Index i = 0; i < rank; ++i) {
    if (psi.col(i).dot(raw.col(i)) < 0.0) psi.col(i) *= -1.0;
  }

  ProjectionBasis basis;
  basis.psi = std::move(psi);
  basis.eigenvalues = spectrum.head(rank);
  basis.spectrum = std::move(spectrum);
  return basis;
}

Index select_rank(const Vector& eigenvalues, double threshold) {
  if (eigenvalues.size() == 0) throw ConfigError("cannot select a rank from an empty spectrum");
  if (!(threshold > 0.0)) throw ConfigError("rank threshold must be positive");
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < threshold) return std::max<Index>(i, 1);
  }
  return eigenvalues.size();
}

ProjectionBasis truncate(const ProjectionBasis& basis, Index rank) {
  if (rank < 1 || rank > basis.rank()) {
    throw ConfigError("cannot truncate a rank-" + std::to_string(basis.rank()) + " basis to rank " +
                      std::to_string(rank));
  }
  ProjectionBasis out;
  out.psi = basis.psi.leftCols(rank);
  out.eigenvalues = basis.eigenvalues.head(rank);
  out.spectrum = basis.spectrum;
  out.truncation_threshold = basis.truncation_threshold;
  return out;
}

ProjectionBasis build_basis(const GradientStack& stack, const Prior& prior, double threshold,
                            Index max_rank, EigenPencil pencil) {
  ProjectionBasis full = generalized_eigensolve(stack, prior, max_rank, pencil);
  const Index rank = select_rank(full.eigenvalues, threshold);
  ProjectionBasis basis = truncate(full, rank);
  basis.truncation_threshold = threshold;
  return basis;
}

Projection project(const ProjectionBasis& basis, const Vector& x) {
  if (x.size() != basis.dim()) {
    throw ConfigError("cannot project a " + std::to_string(x.size()) + "-vector onto a basis in R^" +
                      std::to_string(basis.dim()));
  }
  Projection p;
  p.coeffs = basis.psi.transpose() * x;
  p.complement = x - basis.psi * p.coeffs;
  return p;
}

Vector reconstruct(const ProjectionBasis& basis, const Vector& coeffs, const Vector& complement) {
  if (coeffs.size() != basis.rank() || complement.size() != basis.dim()) {
    throw ConfigError("reconstruct: coefficient or complement size mismatch");
  }
  return basis.psi * coeffs + complement;
}

double projection_error_bound(const Vector& tail_eigenvalues, double gamma) {
  if (tail_eigenvalues.size() == 0) return 0.0;
  if (tail_eigenvalues.minCoeff() < 0.0) throw ConfigError("tail eigenvalues must be non-negative");
  return 0.5 * gamma * tail_eigenvalues.sum();
}

}  // namespace psvgd
