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

#include "psvgd/ensemble.hpp"
#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

class WorkerPool;

// Rows are ∇ log f(x_m). Represents Ĥ = (1/M) GᵀG without forming it.
struct GradientStack {
  RowMatrix grads;

  Index count() const { return grads.rows(); }
  Index dim() const { return grads.cols(); }
};

GradientStack assemble_gradient_stack(const InferenceModel& model,
                                      const ParticleEnsemble& ensemble,
                                      WorkerPool* pool = nullptr);

// Which prior operator forms the pencil with Ĥ.
//
// kPriorCovariance solves Ĥψ = λΓψ; kPriorPrecision solves Ĥψ = λΓ⁻¹ψ, i.e.
// the spectrum of the prior-whitened information matrix LᵀĤL (Γ = LLᵀ), which
// measures data information relative to prior information.
enum class EigenPencil { kPriorCovariance, kPriorPrecision };

// Dominant eigenpairs of the pencil with Euclidean-orthonormal basis columns.
struct ProjectionBasis {
  Matrix psi;                 // d×r, ΨᵀΨ = I
  Vector eigenvalues;         // λ_1 ≥ … ≥ λ_r ≥ 0
  Vector spectrum;            // every computed eigenvalue, descending
  double truncation_threshold = 0.0;

  Index rank() const { return psi.cols(); }
  Index dim() const { return psi.rows(); }
  // Eigenvalues past the retained rank.
  Vector tail() const { return spectrum.tail(spectrum.size() - rank()); }
};

// Top min(max_rank, M, d) eigenpairs via the M×M Gram matrix of whitened
// gradients. Eigenvalues are exact up to rounding; the returned columns are
// re-orthonormalized in the Euclidean sense (thin QR, order preserving) so
// that Ψ defines an orthogonal projector. `spectrum` holds all min(M, d)
// eigenvalues.
ProjectionBasis generalized_eigensolve(const GradientStack& stack, const Prior& prior,
                                       Index max_rank,
                                       EigenPencil pencil = EigenPencil::kPriorPrecision);

// Smallest r with λ_{r+1} < threshold; at least 1, at most the spectrum length.
Index select_rank(const Vector& eigenvalues, double threshold);

// Keeps the leading `rank` columns and eigenvalues.
ProjectionBasis truncate(const ProjectionBasis& basis, Index rank);

// Eigensolve, rank selection against `threshold`, truncation.
ProjectionBasis build_basis(const GradientStack& stack, const Prior& prior, double threshold,
                            Index max_rank, EigenPencil pencil = EigenPencil::kPriorPrecision);

struct Projection {
  Vector coeffs;      // w = Ψᵀx
  Vector complement;  // x⊥ = x − Ψw
};

Projection project(const ProjectionBasis& basis, const Vector& x);
Vector reconstruct(const ProjectionBasis& basis, const Vector& coeffs, const Vector& complement);

// (γ/2)·Σ tail. Only meaningful as a relative indicator; γ is not known.
double projection_error_bound(const Vector& tail_eigenvalues, double gamma = 1.0);

}  // namespace psvgd
