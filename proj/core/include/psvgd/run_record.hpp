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

#include <string>
#include <vector>

#include "psvgd/types.hpp"

namespace psvgd {

struct IterationRecord {
  Index iteration = 0;  // global, strictly increasing across outer steps
  Index outer = 0;      // adaptation step (0 for plain SVGD)
  double mean_step_norm = 0.0;
  double bandwidth = 0.0;
  double step_size = 0.0;
  bool line_search_exhausted = false;
};

struct AdaptationRecord {
  Index outer = 0;
  Index first_iteration = 0;  // global index of the first inner iteration using this basis
  Index rank = 0;
  double tail_bound = 0.0;  // ½·Σ_{i>r} λ_i
  double outer_step_norm = 0.0;
  Vector spectrum;          // descending
};

// Wall-clock seconds. The gradient phase includes the eigensolve.
struct PhaseTimings {
  double gradient = 0.0;
  double kernel = 0.0;
  double update = 0.0;
  double total = 0.0;
};

struct RunRecord {
  std::vector<IterationRecord> iterations;
  std::vector<AdaptationRecord> adaptations;
  PhaseTimings timings;
  bool converged = false;  // stopped on a tolerance rather than an iteration cap

  Index iteration_count() const { return static_cast<Index>(iterations.size()); }
};

}  // namespace psvgd
