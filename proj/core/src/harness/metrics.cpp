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

#include "psvgd/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "psvgd/errors.hpp"

namespace psvgd {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double variance_rmse(const Vector& sample_variance, const Vector& reference) {
  if (sample_variance.size() != reference.size() || reference.size() == 0) {
    throw ConfigError("variance and reference sizes differ");
  }
  if (!reference.allFinite() || (reference.array() <= 0.0).any()) {
    throw ConfigError("reference variance must be finite and positive");
  }
  return (sample_variance - reference).norm() / reference.norm();
}

double variance_rmse(const ParticleEnsemble& ensemble, const Vector& reference) {
  if (ensemble.count() < 2) throw ConfigError("variance RMSE needs at least two particles");
  return variance_rmse(ensemble.sample_variance(), reference);
}

double rms_error(const Vector& estimate, const Vector& truth) {
  if (estimate.size() != truth.size() || truth.size() == 0) {
    throw ConfigError("estimate and truth sizes differ");
  }
  return std::sqrt((estimate - truth).squaredNorm() / static_cast<double>(truth.size()));
}

CredibleBand credible_interval(const RowMatrix& samples, double level) {
  if (samples.rows() < 1 || samples.cols() < 1) throw ConfigError("credible interval of an empty ensemble");
  if (!(level > 0.0 && level <= 1.0)) throw ConfigError("credible level must lie in (0, 1]");
  const double p_lo = 0.5 * (1.0 - level);
  const double p_hi = 0.5 * (1.0 + level);

  CredibleBand band{Vector(samples.cols()), Vector(samples.cols())};
  std::vector<double> column(static_cast<std::size_t>(samples.rows()));
  for (Index i = 0; i < samples.cols(); ++i) {
    for (Index n = 0; n < samples.rows(); ++n) column[static_cast<std::size_t>(n)] = samples(n, i);
    std::sort(column.begin(), column.end());
    band.lower[i] = quantile_sorted(column, p_lo);
    band.upper[i] = quantile_sorted(column, p_hi);
  }
  return band;
}

double coverage(const CredibleBand& band, const Vector& truth) {
  if (truth.size() != band.lower.size()) throw ConfigError("truth and band sizes differ");
  Index inside = 0;
  for (Index i = 0; i < truth.size(); ++i) {
    if (band.lower[i] <= truth[i] && truth[i] <= band.upper[i]) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(truth.size());
}

}  // namespace psvgd
