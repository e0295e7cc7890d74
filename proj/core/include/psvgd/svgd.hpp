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
#include <functional>
#include <utility>

#include "psvgd/ensemble.hpp"
#include "psvgd/kernel.hpp"
#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"
#include "psvgd/run_record.hpp"

namespace psvgd {

class WorkerPool;

enum class StepRule { kLineSearch, kFixed };

struct StepConfig {
  StepRule rule = StepRule::kLineSearch;
  double fixed_step = 1e-2;
  double initial_step = 1.0;  // line search restarts here every iteration
  int max_backtracks = 20;

  void validate() const;
};

struct SvgdConfig {
  Index max_iterations = 100;
  StepConfig step;
  // Stop once the mean particle step norm is ≤ tolerance. Negative selects
  // 1e-3·sqrt(d).
  double tolerance = -1.0;
  KernelConfig kernel;

  void validate() const;
};

// Kernelized Stein direction for every row m:
//   φ_m = (1/N) Σ_n [ k(x_n, x_m) s_n + ∇_{x_n} k(x_n, x_m) ].
// The inner sum runs over n in index order for every worker layout.
RowMatrix stein_direction(const RowMatrix& points, const RowMatrix& scores, double bandwidth,
                          const KernelMetric& metric, WorkerPool* pool = nullptr);

struct SteinDirection {
  RowMatrix direction;
  double bandwidth = 0.0;
};

// Resolves the bandwidth from the current ensemble, then `stein_direction`.
SteinDirection svgd_direction(const RowMatrix& points, const RowMatrix& log_posterior_grads,
                              const KernelConfig& kernel, WorkerPool* pool = nullptr);

struct LineSearchResult {
  double step = 0.0;
  int backtracks = 0;
  bool exhausted = false;
};

// Backtracking on an ensemble-averaged log posterior. `objective(ε)` is the
// mean log posterior after moving by ε along the direction; ε = initial·2⁻ᵏ,
// k = 0…max_backtracks, is accepted at the first k with
// objective(ε) ≥ objective(0). Exhaustion returns the smallest trial step
// with `exhausted` set, or 0 if even that step has a non-finite objective.
// Non-finite objective values count as decrease.
LineSearchResult line_search_step(const std::function<double(double)>& objective,
                                  const StepConfig& config);

// (1/N) Σ_m [log f(x_m) + log p_0(x_m)] summed in row order.
double mean_log_posterior(const InferenceModel& model, const Prior& prior,
                          const RowMatrix& points, WorkerPool* pool = nullptr);

// Rows ∇ log f(x_m) + ∇ log p_0(x_m).
RowMatrix log_posterior_grads(const InferenceModel& model, const Prior& prior,
                              const RowMatrix& points, WorkerPool* pool = nullptr);

struct SvgdResult {
  ParticleEnsemble ensemble;
  RunRecord record;
};

// SVGD from the given ensemble. Throws NumericalError with the iteration
// index on non-finite particles.
SvgdResult run_svgd(const InferenceModel& model, const Prior& prior,
                    const ParticleEnsemble& initial, const SvgdConfig& config,
                    WorkerPool* pool = nullptr);

// SVGD from `count` prior draws.
SvgdResult run_svgd(const InferenceModel& model, const Prior& prior, Index count,
                    std::uint64_t seed, const SvgdConfig& config, WorkerPool* pool = nullptr);

}  // namespace psvgd
