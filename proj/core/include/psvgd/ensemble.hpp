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

#include "psvgd/prior.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

class WorkerPool;

// N×d matrix of samples, one particle per row. Always finite and non-empty.
class ParticleEnsemble {
 public:
  explicit ParticleEnsemble(RowMatrix particles);

  Index count() const { return particles_.rows(); }
  Index dim() const { return particles_.cols(); }

  const RowMatrix& particles() const { return particles_; }
  auto particle(Index n) const { return particles_.row(n); }

  // Replaces the contents; the new matrix must satisfy the same invariants.
  void assign(RowMatrix particles);

  Vector sample_mean() const;
  // Unbiased (N−1) per-coordinate variance; requires N ≥ 2.
  Vector sample_variance() const;

 private:
  RowMatrix particles_;
};

// N i.i.d. prior draws. Particle n uses its own stream derived from `seed`,
// so the result is independent of the worker count.
ParticleEnsemble sample_prior(const Prior& prior, Index count, std::uint64_t seed,
                              WorkerPool* pool = nullptr);

// Gradient of the log prior; thin wrapper kept for symmetry with the model API.
inline Vector grad_log_prior(const Prior& prior, const Vector& x) {
  return prior.grad_log_density(x);
}

}  // namespace psvgd
