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

#include "psvgd/svgd.hpp"

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

double mean_row_norm(const RowMatrix& delta) {
  double sum = 0.0;
  for (Index m = 0; m < delta.rows(); ++m) sum += delta.row(m).norm();
  return sum / static_cast<double>(delta.rows());
}

}  // namespace

void StepConfig::validate() const {
  if (rule == StepRule::kFixed && !(fixed_step > 0.0)) {
    throw ConfigError("fixed step size must be positive");
  }
  if (rule == StepRule::kLineSearch && !(initial_step > 0.0)) {
    throw ConfigError("initial line-search step must be positive");
  }
  if (max_backtracks < 0) throw ConfigError("max_backtracks must be non-negative");
}

void SvgdConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("SVGD needs max_iterations >= 1");
  step.validate();
  kernel.validate();
}

namespace detail {

RowMatrix stein_direction_from_table(const RowMatrix& points, const RowMatrix& scores,
                                     const Matrix& table, double bandwidth,
                                     const KernelMetric& metric, WorkerPool* pool) {
  const Index n = points.rows();
  const Index dim = points.cols();
  const double repulsion = 2.0 / bandwidth;
  const double inv_n = 1.0 / static_cast<double>(n);
  RowMatrix direction(n, dim);
  parallel_rows(pool, n, [&](Index m) {
    Vector drive = Vector::Zero(dim);
    Vector spread = Vector::Zero(dim);
    for (Index j = 0; j < n; ++j) {
      const double k = table(j, m);
      drive.noalias() += k * scores.row(j).transpose();
      spread.noalias() += k * (points.row(m) - points.row(j)).transpose();
    }
    direction.row(m) = (inv_n * (drive + repulsion * metric.apply(spread))).transpose();
  });
  return direction;
}

bool run_transport(RowMatrix& points, const TransportHooks& hooks,
                   const TransportSettings& settings, WorkerPool* pool, RunRecord& record) {
  for (Index it = 0; it < settings.max_iterations; ++it) {
    const Index global = settings.first_iteration + it;

    auto phase = Clock::now();
    const RowMatrix scores = hooks.scores(points);
    if (!scores.allFinite()) {
      throw NumericalError("non-finite log-posterior gradient at iteration " +
                               std::to_string(global),
                           global);
    }
    record.timings.gradient += seconds_since(phase);

    phase = Clock::now();
    const double bandwidth = resolve_bandwidth(settings.kernel, points);
    const Matrix table = kernel_table(points, bandwidth, settings.kernel.metric, pool);
    record.timings.kernel += seconds_since(phase);

    phase = Clock::now();
    const RowMatrix direction = stein_direction_from_table(points, scores, table, bandwidth,
                                                           settings.kernel.metric, pool);

    auto candidate = [&](double step) {
      RowMatrix moved = points + step * direction;
      if (hooks.constrain) hooks.constrain(moved);
      return moved;
    };

    LineSearchResult search;
    if (settings.step.rule == StepRule::kFixed) {
      search.step = settings.step.fixed_step;
    } else {
      search = line_search_step(
          [&](double step) { return hooks.objective(step == 0.0 ? points : candidate(step)); },
          settings.step);
    }

    RowMatrix next = candidate(search.step);
    if (!next.allFinite()) {
      throw NumericalError("non-finite particle at iteration " + std::to_string(global), global);
    }
    const double step_norm = mean_row_norm(next - points);
    points = std::move(next);
    record.timings.update += seconds_since(phase);

    record.iterations.push_back(IterationRecord{global, settings.outer, step_norm, bandwidth,
                                                search.step, search.exhausted});
    if (step_norm <= settings.tolerance) return true;
  }
  return false;
}

}  // namespace detail

RowMatrix stein_direction(const RowMatrix& points, const RowMatrix& scores, double bandwidth,
                          const KernelMetric& metric, WorkerPool* pool) {
  if (points.rows() != scores.rows() || points.cols() != scores.cols()) {
    throw ConfigError("scores must be row-aligned with the points");
  }
  if (!(bandwidth > 0.0)) throw DegenerateBandwidthError("kernel bandwidth must be positive");
  const Matrix table = kernel_table(points, bandwidth, metric, pool);
  return detail::stein_direction_from_table(points, scores, table, bandwidth, metric, pool);
}

SteinDirection svgd_direction(const RowMatrix& points, const RowMatrix& grads,
                              const KernelConfig& kernel, WorkerPool* pool) {
  SteinDirection out;
  out.bandwidth = resolve_bandwidth(kernel, points);
  out.direction = stein_direction(points, grads, out.bandwidth, kernel.metric, pool);
  return out;
}

LineSearchResult line_search_step(const std::function<double(double)>& objective,
                                  const StepConfig& config) {
  const double baseline = objective(0.0);
  LineSearchResult result;
  double step = config.initial_step;
  double value = baseline;
  for (int k = 0; k <= config.max_backtracks; ++k) {
    value = objective(step);
    if (std::isfinite(value) && value >= baseline) {
      result.step = step;
      result.backtracks = k;
      return result;
    }
    if (k < config.max_backtracks) step *= 0.5;
  }
  // An unusable smallest step (non-finite or infeasible) is not taken at all.
  result.step = std::isfinite(value) ? step : 0.0;
  result.backtracks = config.max_backtracks;
  result.exhausted = true;
  return result;
}

double mean_log_posterior(const InferenceModel& model, const Prior& prior,
                          const RowMatrix& points, WorkerPool* pool) {
  std::vector<double> values(static_cast<std::size_t>(points.rows()));
  parallel_rows(pool, points.rows(), [&](Index m) {
    const Vector x = points.row(m).transpose();
    values[static_cast<std::size_t>(m)] = model.log_likelihood(x) + prior.log_density(x);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(points.rows());
}

RowMatrix log_posterior_grads(const InferenceModel& model, const Prior& prior,
                              const RowMatrix& points, WorkerPool* pool) {
  RowMatrix grads(points.rows(), points.cols());
  parallel_rows(pool, points.rows(), [&](Index m) {
    const Vector x = points.row(m).transpose();
    grads.row(m) = (model.grad_log_likelihood(x) + prior.grad_log_density(x)).transpose();
  });
  return grads;
}

SvgdResult run_svgd(const InferenceModel& model, const Prior& prior,
                    const ParticleEnsemble& initial, const SvgdConfig& config, WorkerPool* pool) {
  config.validate();
  if (model.dim() != prior.dim() || initial.dim() != model.dim()) {
    throw ConfigError("model, prior and ensemble dimensions differ");
  }

  const auto start = Clock::now();
  detail::TransportHooks hooks;
  hooks.scores = [&](const RowMatrix& x) { return log_posterior_grads(model, prior, x, pool); };
  hooks.objective = [&](const RowMatrix& x) { return mean_log_posterior(model, prior, x, pool); };
  if (!prior.is_gaussian()) {
    hooks.constrain = [&](RowMatrix& x) {
      for (Index m = 0; m < x.rows(); ++m) {
        Vector row = x.row(m).transpose();
        prior.project_to_support(row);
        x.row(m) = row.transpose();
      }
    };
  }

  detail::TransportSettings settings;
  settings.max_iterations = config.max_iterations;
  settings.step = config.step;
  settings.tolerance = config.tolerance >= 0.0
                           ? config.tolerance
                           : 1e-3 * std::sqrt(static_cast<double>(model.dim()));
  settings.kernel = config.kernel;

  RowMatrix points = initial.particles();
  RunRecord record;
  record.converged = detail::run_transport(points, hooks, settings, pool, record);
  record.timings.total = seconds_since(start);
  return SvgdResult{ParticleEnsemble(std::move(points)), std::move(record)};
}

SvgdResult run_svgd(const InferenceModel& model, const Prior& prior, Index count,
                    std::uint64_t seed, const SvgdConfig& config, WorkerPool* pool) {
  return run_svgd(model, prior, sample_prior(prior, count, seed, pool), config, pool);
}

}  // namespace psvgd
