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

#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"

namespace psvgd {

struct RwmhConfig {
  Index chain_length = 200000;  // post burn-in steps
  Index burn_in = -1;           // negative selects chain_length / 5
  // During burn-in the step scale is tuned towards 0.234 acceptance and the
  // proposal covariance is replaced by the running chain covariance. Both
  // are frozen afterwards so the recorded chain is a plain Metropolis chain.
  bool adapt = true;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RwmhResult {
  Vector mean;
  Vector variance;
  Vector ess;  // per coordinate, batch-means estimate
  double acceptance_rate = 0.0;
  bool acceptance_warning = false;  // rate outside [0.05, 0.8]
  Index samples = 0;
  double proposal_scale = 0.0;
};

// Random-walk Metropolis started at the prior mean with proposals
// x' = x + s·L z, L a factor of the prior covariance (or of the adapted
// covariance). Proposals outside the prior support are rejected.
RwmhResult reference_posterior_rwmh(const InferenceModel& model, const Prior& prior,
                                    const RwmhConfig& config);

}  // namespace psvgd
