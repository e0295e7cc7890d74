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
#include "psvgd/types.hpp"

namespace psvgd {

// ‖v − r‖₂ / ‖r‖₂ with v the unbiased sample variance, i.e. the
// root-mean-square error relative to the root-mean-square reference.
double variance_rmse(const Vector& sample_variance, const Vector& reference);
double variance_rmse(const ParticleEnsemble& ensemble, const Vector& reference);

// sqrt(mean((a − b)²)).
double rms_error(const Vector& estimate, const Vector& truth);

struct CredibleBand {
  Vector lower;
  Vector upper;
};

// Per-coordinate empirical quantiles at (1 − level)/2 and (1 + level)/2,
// linear interpolation between order statistics at position p·(N − 1).
CredibleBand credible_interval(const RowMatrix& samples, double level = 0.9);

// Fraction of coordinates with lower ≤ truth ≤ upper.
double coverage(const CredibleBand& band, const Vector& truth);

}  // namespace psvgd
