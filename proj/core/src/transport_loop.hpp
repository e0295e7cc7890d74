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

#include <functional>

#include "psvgd/run_record.hpp"
#include "psvgd/svgd.hpp"

namespace psvgd::detail {

// The coordinate-space specifics of one Stein transport: full space for SVGD,
// coefficient space for pSVGD.
struct TransportHooks {
  std::function<RowMatrix(const RowMatrix&)> scores;
  std::function<double(const RowMatrix&)> objective;
  std::function<void(RowMatrix&)> constrain;  // optional
};

struct TransportSettings {
  Index max_iterations = 0;
  StepConfig step;
  double tolerance = 0.0;
  KernelConfig kernel;
  Index outer = 0;
  Index first_iteration = 0;
};

// φ from a precomputed kernel table.
RowMatrix stein_direction_from_table(const RowMatrix& points, const RowMatrix& scores,
                                     const Matrix& table, double bandwidth,
                                     const KernelMetric& metric, WorkerPool* pool);

// Iterates x ← x + ε φ(x) in place. Per iteration: scores (gradient phase),
// bandwidth and kernel table (kernel phase), direction, step size and update
// (update phase); each phase ends in a barrier. Appends to `record` and
// returns true when the step-norm tolerance fired.
bool run_transport(RowMatrix& points, const TransportHooks& hooks,
                   const TransportSettings& settings, WorkerPool* pool, RunRecord& record);

}  // namespace psvgd::detail
