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

#include "psvgd/errors.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

class WorkerPool;

class DegenerateBandwidthError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Squared distance Q(v) = vᵀ W v with W = I (euclidean) or W = Λ + I
// (eigen-weighted by the subspace spectrum).
class KernelMetric {
 public:
  KernelMetric() = default;

  static KernelMetric euclidean() { return {}; }
  // Requires every eigenvalue to be finite and ≥ 0.
  static KernelMetric eigen_weighted(const Vector& eigenvalues);

  bool is_euclidean() const { return weights_.size() == 0; }
  // Diagonal of W; empty for the euclidean metric.
  const Vector& weights() const { return weights_; }

  // Accepts row or column vectors; callers pass particle-row differences.
  // Both branches sum in the same order, so Λ = 0 matches euclidean bitwise.
  template <typename Derived>
  double quadratic(const Eigen::MatrixBase<Derived>& v) const {
    double q = 0.0;
    if (is_euclidean()) {
      for (Index i = 0; i < v.size(); ++i) q += v(i) * v(i);
      return q;
    }
    if (v.size() != weights_.size()) throw ConfigError("metric and vector sizes differ");
    for (Index i = 0; i < v.size(); ++i) q += weights_[i] * v(i) * v(i);
    return q;
  }

  // W v.
  Vector apply(const Vector& v) const;

 private:
  Vector weights_;
};

enum class BandwidthRule { kMedian, kFixed };

struct KernelConfig {
  BandwidthRule bandwidth_rule = BandwidthRule::kMedian;
  double fixed_bandwidth = 1.0;
  KernelMetric metric;

  void validate() const;
};

// h = med² / log N, med the median of the N(N−1)/2 pairwise distances measured
// with `metric`. ConfigError for N < 2; DegenerateBandwidthError when the
// median distance is zero.
double median_bandwidth(const RowMatrix& points, const KernelMetric& metric = {});

// Bandwidth for the current points. A single point has no pairwise distance;
// any positive bandwidth gives the same Stein direction, so 1 is returned.
double resolve_bandwidth(const KernelConfig& config, const RowMatrix& points);

// exp(−Q(w − w') / h).
double kernel_eval(const Vector& w, const Vector& w_prime, double bandwidth,
                   const KernelMetric& metric = {});

// ∇_w k(w, w') = −(2/h) k(w, w') W (w − w').
Vector kernel_grad_first_arg(const Vector& w, const Vector& w_prime, double bandwidth,
                             const KernelMetric& metric = {});

// Symmetric N×N table K(n, m) = k(x_n, x_m). Rows are filled in parallel.
Matrix kernel_table(const RowMatrix& points, double bandwidth, const KernelMetric& metric,
                    WorkerPool* pool = nullptr);

}  // namespace psvgd
