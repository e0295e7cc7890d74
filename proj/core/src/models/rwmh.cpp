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

#include "psvgd/models/rwmh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>

#include "psvgd/errors.hpp"
#include "psvgd/rng.hpp"

namespace psvgd {

namespace {

double log_target(const InferenceModel& model, const Prior& prior, const Vector& x) {
  if (!prior.in_support(x)) return -std::numeric_limits<double>::infinity();
  const double value = model.log_likelihood(x) + prior.log_density(x);
  return std::isfinite(value) ? value : -std::numeric_limits<double>::infinity();
}

// Running mean and scatter (Welford).
struct Moments {
  explicit Moments(Index d) : mean(Vector::Zero(d)), scatter(Matrix::Zero(d, d)) {}
  void add(const Vector& x) {
    ++count;
    const Vector delta = x - mean;
    mean += delta / static_cast<double>(count);
    scatter.noalias() += delta * (x - mean).transpose();
  }
  Index count = 0;
  Vector mean;
  Matrix scatter;
};

}  // namespace

void RwmhConfig::validate() const {
  if (chain_length < 2) throw ConfigError("chain length must be at least 2");
}

RwmhResult reference_posterior_rwmh(const InferenceModel& model, const Prior& prior,
                                    const RwmhConfig& config) {
  config.validate();
  const Index d = model.dim();
  if (prior.dim() != d) throw ConfigError("model and prior dimensions differ");
  const Index burn_in = config.burn_in >= 0 ? config.burn_in : config.chain_length / 5;

  Engine engine = make_engine(config.seed, StreamDomain::kMarkovChain, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vector x = prior.mean();
  double current = log_target(model, prior, x);
  if (!std::isfinite(current)) throw NumericalError("log posterior is not finite at the prior mean");

  double log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));
  std::optional<Matrix> adapted_factor;  // replaces the prior factor once set
  Moments burn_moments(d);
  const Index adapt_every = std::max<Index>(100, burn_in / 20);

  auto propose = [&](const Vector& z) -> Vector {
    const Vector step = adapted_factor ? Vector(*adapted_factor * z)
                                       : Vector(prior.covariance_factor(FactorOp::kApply, z));
    return x + std::exp(log_scale) * step;
  };

  for (Index t = 0; t < burn_in; ++t) {
    const Vector candidate = propose(standard_normal_vector(engine, d));
    const double proposed = log_target(model, prior, candidate);
    const double accept_prob =
        std::isfinite(proposed) ? std::min(1.0, std::exp(proposed - current)) : 0.0;
    if (unit(engine) < accept_prob) {
      x = candidate;
      current = proposed;
    }
    if (!config.adapt) continue;

    log_scale += (accept_prob - 0.234) / std::pow(static_cast<double>(t + 1), 0.6);
    if (t >= burn_in / 10) burn_moments.add(x);
    if ((t + 1) % adapt_every == 0 && burn_moments.count > 10 * d) {
      Matrix cov = burn_moments.scatter / static_cast<double>(burn_moments.count - 1);
      cov.diagonal().array() += 1e-10 * std::max(cov.diagonal().mean(), 1e-300);
      const Eigen::LLT<Matrix> llt(cov);
      if (llt.info() == Eigen::Success) {
        // Rescale so the step keeps its tuned size under the new covariance.
        if (!adapted_factor) log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));
        adapted_factor = Matrix(llt.matrixL());
      }
    }
  }

  const Index n = config.chain_length;
  const Index batch = std::max<Index>(1, static_cast<Index>(std::sqrt(static_cast<double>(n))));
  const Index batches = n / batch;
  Matrix batch_sums = Matrix::Zero(d, batches);
  Vector mean = Vector::Zero(d);
  Vector m2 = Vector::Zero(d);
  Index accepted = 0;

  for (Index t = 0; t < n; ++t) {
    const Vector candidate = propose(standard_normal_vector(engine, d));
    const double proposed = log_target(model, prior, candidate);
    const double accept_prob =
        std::isfinite(proposed) ? std::min(1.0, std::exp(proposed - current)) : 0.0;
    if (unit(engine) < accept_prob) {
      x = candidate;
      current = proposed;
      ++accepted;
    }
    const Vector delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta.cwiseProduct(x - mean);
    if (t / batch < batches) batch_sums.col(t / batch) += x;
  }

  RwmhResult result;
  result.samples = n;
  result.mean = mean;
  result.variance = m2 / static_cast<double>(n - 1);
  result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(n);
  result.acceptance_warning = result.acceptance_rate < 0.05 || result.acceptance_rate > 0.8;
  result.proposal_scale = std::exp(log_scale);

  result.ess = Vector::Constant(d, static_cast<double>(n));
  if (batches >= 2) {
    const Matrix batch_means = batch_sums / static_cast<double>(batch);
    const Vector grand = batch_means.rowwise().mean();
    for (Index i = 0; i < d; ++i) {
      const double var_bm = (batch_means.row(i).array() - grand[i]).square().sum() /
                            static_cast<double>(batches - 1);
      const double long_run = static_cast<double>(batch) * var_bm;
      if (long_run > 0.0) {
        result.ess[i] = std::min(static_cast<double>(n),
                                 static_cast<double>(n) * result.variance[i] / long_run);
      }
    }
  }
  return result;
}

}  // namespace psvgd
