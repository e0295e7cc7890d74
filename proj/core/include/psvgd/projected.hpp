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

#include "psvgd/ensemble.hpp"
#include "psvgd/kernel.hpp"
#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"
#include "psvgd/run_record.hpp"
#include "psvgd/subspace.hpp"
#include "psvgd/svgd.hpp"

namespace psvgd {

class WorkerPool;

// Particles split as x_n = Ψ w_n + x⊥_n. The complements stay frozen while
// the coefficients are transported.
class CoefficientEnsemble {
 public:
  // Projects every particle onto `basis`.
  CoefficientEnsemble(ProjectionBasis basis, const ParticleEnsemble& particles);

  // Takes coefficients and complements as given; checks Ψᵀx⊥ = 0 to 1e-10
  // relative to the particle scale.
  CoefficientEnsemble(ProjectionBasis basis, RowMatrix coeffs, RowMatrix complements);

  Index count() const { return coeffs_.rows(); }
  Index rank() const { return coeffs_.cols(); }
  Index dim() const { return complements_.cols(); }

  const ProjectionBasis& basis() const { return basis_; }
  const RowMatrix& coeffs() const { return coeffs_; }
  const RowMatrix& complements() const { return complements_; }

  // Complements are never touched.
  void set_coeffs(RowMatrix coeffs);

  // x_n = Ψ w_n + x⊥_n for the given coefficient rows.
  RowMatrix reconstruct(const RowMatrix& coeffs) const;

 private:
  ProjectionBasis basis_;
  RowMatrix coeffs_;
  RowMatrix complements_;
};

ParticleEnsemble reconstruct_ensemble(const CoefficientEnsemble& ensemble);

// Ψᵀ[∇ log f + ∇ log p_0](Ψ w + x⊥). The full prior score stands in for the
// score of the prior marginal on the subspace; the two agree for Gaussian
// priors and the result is approximate otherwise.
Vector coefficient_grad_log_posterior(const InferenceModel& model, const Prior& prior,
                                      const ProjectionBasis& basis, const Vector& coeffs,
                                      const Vector& complement);

// Stein direction in coefficient space; same formula as `svgd_direction`
// with the kernel metric of `kernel` (euclidean or Λ + I weighted).
SteinDirection psvgd_direction(const RowMatrix& coeffs, const RowMatrix& coeff_grads,
                               const KernelConfig& kernel, WorkerPool* pool = nullptr);

struct PsvgdInnerConfig {
  Index max_iterations = 10;  // zero is a valid no-op
  StepConfig step;
  // Mean coefficient step norm tolerance; negative selects 1e-3·sqrt(r).
  double tolerance = -1.0;
  KernelConfig kernel;
  // Replace the kernel metric with Λ + I from the basis eigenvalues.
  bool eigen_weighted_metric = true;
  Index outer = 0;
  Index first_iteration = 0;

  void validate() const;
};

struct PsvgdInnerResult {
  CoefficientEnsemble ensemble;
  RunRecord record;
};

PsvgdInnerResult run_psvgd_inner(const CoefficientEnsemble& ensemble, const InferenceModel& model,
                                 const Prior& prior, const PsvgdInnerConfig& config,
                                 WorkerPool* pool = nullptr);

struct AdaptivePsvgdConfig {
  Index outer_iterations = 10;     // L^x_max
  Index inner_iterations = 10;     // L^w_max, iterations per subspace
  double x_tolerance = -1.0;       // negative selects 1e-3·sqrt(d)
  double w_tolerance = -1.0;       // negative selects 1e-3·sqrt(r)
  double rank_threshold = 1e-2;    // keep eigenpairs until λ_{r+1} < threshold
  Index max_rank = 0;              // 0 selects min(N, d)
  EigenPencil pencil = EigenPencil::kPriorPrecision;
  bool eigen_weighted_metric = true;
  KernelConfig kernel;
  StepConfig step;

  void validate() const;
};

struct AdaptivePsvgdResult {
  ParticleEnsemble ensemble;
  RunRecord record;
};

// Outer loop: gradient stack at the current particles, eigensolve, rank
// selection, projection (complements re-frozen), inner pSVGD, reconstruction.
AdaptivePsvgdResult run_adaptive_psvgd(const InferenceModel& model, const Prior& prior,
                                       const ParticleEnsemble& initial,
                                       const AdaptivePsvgdConfig& config,
                                       WorkerPool* pool = nullptr);

AdaptivePsvgdResult run_adaptive_psvgd(const InferenceModel& model, const Prior& prior,
                                       Index count, std::uint64_t seed,
                                       const AdaptivePsvgdConfig& config,
                                       WorkerPool* pool = nullptr);

}  // namespace psvgd
