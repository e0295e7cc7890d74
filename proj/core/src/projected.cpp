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

#include "psvgd/projected.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "psvgd/errors.hpp"
#include "psvgd/parallel.hpp"
#include "transport_loop.hpp"

namespace psvgd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_complements(const ProjectionBasis& basis, const RowMatrix& complements) {
  for (Index n = 0; n < complements.rows(); ++n) {
    const double scale = std::max(1.0, complements.row(n).norm());
    const double leak = (basis.psi.transpose() * complements.row(n).transpose()).norm();
    if (leak > 1e-10 * scale) {
      throw NumericalError("complement of particle " + std::to_string(n) +
                           " is not orthogonal to the basis");
    }
  }
}

void merge_timings(PhaseTimings& into, const PhaseTimings& from) {
  into.gradient += from.gradient;
  into.kernel += from.kernel;
  into.update += from.update;
}

}  // namespace

CoefficientEnsemble::CoefficientEnsemble(ProjectionBasis basis, const ParticleEnsemble& particles)
    : basis_(std::move(basis)) {
  if (particles.dim() != basis_.dim()) throw ConfigError("ensemble and basis dimensions differ");
  coeffs_.resize(particles.count(), basis_.rank());
  complements_.resize(particles.count(), basis_.dim());
  for (Index n = 0; n < particles.count(); ++n) {
    const Projection p = project(basis_, particles.particle(n).transpose());
    coeffs_.row(n) = p.coeffs.transpose();
    complements_.row(n) = p.complement.transpose();
  }
}

CoefficientEnsemble::CoefficientEnsemble(ProjectionBasis basis, RowMatrix coeffs,
                                         RowMatrix complements)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)), complements_(std::move(complements)) {
  if (coeffs_.rows() < 1 || coeffs_.rows() != complements_.rows() ||
      coeffs_.cols() != basis_.rank() || complements_.cols() != basis_.dim()) {
    throw ConfigError("coefficient ensemble shapes do not match the basis");
  }
  if (!coeffs_.allFinite() || !complements_.allFinite()) {
    throw NumericalError("coefficient ensemble has non-finite entries");
  }
  check_complements(basis_, complements_);
}

void CoefficientEnsemble::set_coeffs(RowMatrix coeffs) {
  if (coeffs.rows() != coeffs_.rows() || coeffs.cols() != coeffs_.cols()) {
    throw ConfigError("coefficient matrix shape changed");
  }
  if (!coeffs.allFinite()) throw NumericalError("non-finite coefficients");
  coeffs_ = std::move(coeffs);
}

RowMatrix CoefficientEnsemble::reconstruct(const RowMatrix& coeffs) const {
  RowMatrix x(coeffs.rows(), dim());
  for (Index n = 0; n < coeffs.rows(); ++n) {
    x.row(n) = (basis_.psi * coeffs.row(n).transpose()).transpose() + complements_.row(n);
  }
  return x;
}

ParticleEnsemble reconstruct_ensemble(const CoefficientEnsemble& ensemble) {
  return ParticleEnsemble(ensemble.reconstruct(ensemble.coeffs()));
}

Vector coefficient_grad_log_posterior(const InferenceModel& model, const Prior& prior,
                                      const ProjectionBasis& basis, const Vector& coeffs,
                                      const Vector& complement) {
  const Vector x = reconstruct(basis, coeffs, complement);
  return basis.psi.transpose() * (model.grad_log_likelihood(x) + prior.grad_log_density(x));
}

SteinDirection psvgd_direction(const RowMatrix& coeffs, const RowMatrix& coeff_grads,
                               const KernelConfig& kernel, WorkerPool* pool) {
  return svgd_direction(coeffs, coeff_grads, kernel, pool);
}

void PsvgdInnerConfig::validate() const {
  if (max_iterations < 0) throw ConfigError("inner iteration count must be non-negative");
  step.validate();
  kernel.validate();
}

PsvgdInnerResult run_psvgd_inner(const CoefficientEnsemble& ensemble, const InferenceModel& model,
                                 const Prior& prior, const PsvgdInnerConfig& config,
                                 WorkerPool* pool) {
  config.validate();
  if (model.dim() != ensemble.dim() || prior.dim() != ensemble.dim()) {
    throw ConfigError("model, prior and ensemble dimensions differ");
  }

  const auto start = Clock::now();
  const ProjectionBasis& basis = ensemble.basis();

  KernelConfig kernel = config.kernel;
  if (config.eigen_weighted_metric) kernel.metric = KernelMetric::eigen_weighted(basis.eigenvalues);

  detail::TransportHooks hooks;
  hooks.scores = [&](const RowMatrix& w) {
    RowMatrix grads(w.rows(), w.cols());
    parallel_rows(pool, w.rows(), [&](Index n) {
      grads.row(n) = coefficient_grad_log_posterior(model, prior, basis, w.row(n).transpose(),
                                                    ensemble.complements().row(n).transpose())
                         .transpose();
    });
    return grads;
  };
  hooks.objective = [&](const RowMatrix& w) {
    const RowMatrix x = ensemble.reconstruct(w);
    if (!prior.is_gaussian()) {
      for (Index n = 0; n < x.rows(); ++n) {
        if (!prior.in_support(x.row(n).transpose())) return -std::numeric_limits<double>::infinity();
      }
    }
    return mean_log_posterior(model, prior, x, pool);
  };

  detail::TransportSettings settings;
  settings.max_iterations = config.max_iterations;
  settings.step = config.step;
  settings.tolerance = config.tolerance >= 0.0
                           ? config.tolerance
                           : 1e-3 * std::sqrt(static_cast<double>(ensemble.rank()));
  settings.kernel = kernel;
  settings.outer = config.outer;
  settings.first_iteration = config.first_iteration;

  RowMatrix coeffs = ensemble.coeffs();
  RunRecord record;
  record.converged = detail::run_transport(coeffs, hooks, settings, pool, record);

  CoefficientEnsemble out = ensemble;
  out.set_coeffs(std::move(coeffs));
  record.timings.total = seconds_since(start);
  return PsvgdInnerResult{std::move(out), std::move(record)};
}

void AdaptivePsvgdConfig::validate() const {
  if (outer_iterations < 1) throw ConfigError("adaptive pSVGD needs outer_iterations >= 1");
  if (inner_iterations < 0) throw ConfigError("inner_iterations must be non-negative");
  if (!(rank_threshold > 0.0)) throw ConfigError("rank threshold must be positive");
  if (max_rank < 0) throw ConfigError("max_rank must be non-negative");
  kernel.validate();
  step.validate();
}

AdaptivePsvgdResult run_adaptive_psvgd(const InferenceModel& model, const Prior& prior,
                                       const ParticleEnsemble& initial,
                                       const AdaptivePsvgdConfig& config, WorkerPool* pool) {
  config.validate();
  if (model.dim() != prior.dim() || initial.dim() != model.dim()) {
    throw ConfigError("model, prior and ensemble dimensions differ");
  }

  const auto start = Clock::now();
  const Index d = model.dim();
  const Index max_rank =
      config.max_rank > 0 ? config.max_rank : std::min<Index>(initial.count(), d);
  const double x_tol =
      config.x_tolerance >= 0.0 ? config.x_tolerance : 1e-3 * std::sqrt(static_cast<double>(d));

  ParticleEnsemble particles = initial;
  RunRecord record;
  Index next_iteration = 0;

  for (Index outer = 0; outer < config.outer_iterations; ++outer) {
    auto phase = Clock::now();
    const GradientStack stack = assemble_gradient_stack(model, particles, pool);
    ProjectionBasis basis =
        build_basis(stack, prior, config.rank_threshold, max_rank, config.pencil);
    record.timings.gradient += seconds_since(phase);

    AdaptationRecord adaptation;
    adaptation.outer = outer;
    adaptation.first_iteration = next_iteration;
    adaptation.rank = basis.rank();
    adaptation.tail_bound = projection_error_bound(basis.tail());
    adaptation.spectrum = basis.spectrum;

    PsvgdInnerConfig inner;
    inner.max_iterations = config.inner_iterations;
    inner.step = config.step;
    inner.tolerance = config.w_tolerance;
    inner.kernel = config.kernel;
    inner.eigen_weighted_metric = config.eigen_weighted_metric;
    inner.outer = outer;
    inner.first_iteration = next_iteration;

    PsvgdInnerResult result = [&] {
      try {
        return run_psvgd_inner(CoefficientEnsemble(std::move(basis), particles), model, prior,
                               inner, pool);
      } catch (const NumericalError& e) {
        throw NumericalError("outer step " + std::to_string(outer) + ": " + e.what(),
                             e.iteration());
      }
    }();

    RowMatrix next = result.ensemble.reconstruct(result.ensemble.coeffs());
    if (!prior.is_gaussian()) {
      for (Index n = 0; n < next.rows(); ++n) {
        Vector row = next.row(n).transpose();
        prior.project_to_support(row);
        next.row(n) = row.transpose();
      }
    }

    double outer_step = 0.0;
    for (Index n = 0; n < next.rows(); ++n) {
      outer_step += (next.row(n) - particles.particle(n)).norm();
    }
    outer_step /= static_cast<double>(next.rows());
    adaptation.outer_step_norm = outer_step;

    next_iteration += result.record.iteration_count();
    for (auto& it : result.record.iterations) record.iterations.push_back(it);
    merge_timings(record.timings, result.record.timings);
    record.adaptations.push_back(std::move(adaptation));

    particles.assign(std::move(next));
    if (outer_step <= x_tol) {
      record.converged = true;
      break;
    }
  }

  record.timings.total = seconds_since(start);
  return AdaptivePsvgdResult{std::move(particles), std::move(record)};
}

AdaptivePsvgdResult run_adaptive_psvgd(const InferenceModel& model, const Prior& prior,
                                       Index count, std::uint64_t seed,
                                       const AdaptivePsvgdConfig& config, WorkerPool* pool) {
  return run_adaptive_psvgd(model, prior, sample_prior(prior, count, seed, pool), config, pool);
}

}  // namespace psvgd
