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

#include "psvgd/ensemble.hpp"

#include "psvgd/errors.hpp"
#include "psvgd/parallel.hpp"

namespace psvgd {

namespace {

void validate(const RowMatrix& particles) {
  if (particles.rows() < 1 || particles.cols() < 1) {
    throw ConfigError("ensemble must have at least one particle and one dimension");
  }
  if (!particles.allFinite()) throw NumericalError("ensemble contains non-finite entries");
}

}  // namespace

ParticleEnsemble::ParticleEnsemble(RowMatrix particles) : particles_(std::move(particles)) {
  validate(particles_);
}

void ParticleEnsemble::assign(RowMatrix particles) {
  validate(particles);
  particles_ = std::move(particles);
}

Vector ParticleEnsemble::sample_mean() const {
  return particles_.colwise().mean().transpose();
}

Vector ParticleEnsemble::sample_variance() const {
  if (count() < 2) throw ConfigError("sample variance needs at least two particles");
  const Vector mean = sample_mean();
  Vector var = Vector::Zero(dim());
  for (Index n = 0; n < count(); ++n) {
    var += (particles_.row(n).transpose() - mean).array().square().matrix();
  }
  return var / static_cast<double>(count() - 1);
}

ParticleEnsemble sample_prior(const Prior& prior, Index count, std::uint64_t seed,
                              WorkerPool* pool) {
  if (count < 1) throw ConfigError("sample_prior needs at least one particle");
  RowMatrix draws(count, prior.dim());
  parallel_rows(pool, count, [&](Index n) {
    Engine engine = make_engine(seed, StreamDomain::kPriorSample, static_cast<std::uint64_t>(n));
    draws.row(n) = prior.sample(engine).transpose();
  });
  return ParticleEnsemble(std::move(draws));
}

}  // namespace psvgd
