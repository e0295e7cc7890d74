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

#include "psvgd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "psvgd/parallel.hpp"

namespace psvgd {

KernelMetric KernelMetric::eigen_weighted(const Vector& eigenvalues) {
  if (!eigenvalues.allFinite() || (eigenvalues.size() > 0 && eigenvalues.minCoeff() < 0.0)) {
    throw ConfigError("eigen-weighted metric needs finite non-negative eigenvalues");
  }
  KernelMetric metric;
  metric.weights_ = eigenvalues.array() + 1.0;
  return metric;
}

Vector KernelMetric::apply(const Vector& v) const {
  if (is_euclidean()) return v;
  if (v.size() != weights_.size()) throw ConfigError("metric and vector sizes differ");
  return weights_.cwiseProduct(v);
}

void KernelConfig::validate() const {
  if (bandwidth_rule == BandwidthRule::kFixed && !(fixed_bandwidth > 0.0)) {
    throw ConfigError("fixed kernel bandwidth must be positive");
  }
}

double median_bandwidth(const RowMatrix& points, const KernelMetric& metric) {
  const Index n = points.rows();
  if (n < 2) throw ConfigError("median bandwidth needs at least two points");
  if (!metric.is_euclidean() && metric.weights().size() != points.cols()) {
    throw ConfigError("metric dimension does not match the points");
  }

  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      distances.push_back(std::sqrt(metric.quadratic(points.row(i) - points.row(j))));
    }
  }

  const std::size_t count = distances.size();
  const std::size_t mid = count / 2;
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                   distances.end());
  double median = distances[mid];
  if (count % 2 == 0) {
    const double lower =
        *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }

  if (!(median > 0.0) || !std::isfinite(median)) {
    throw DegenerateBandwidthError("median pairwise distance is zero; bandwidth is degenerate");
  }
  return median * median / std::log(static_cast<double>(n));
}

double resolve_bandwidth(const KernelConfig& config, const RowMatrix& points) {
  if (config.bandwidth_rule == BandwidthRule::kFixed) return config.fixed_bandwidth;
  if (points.rows() < 2) return 1.0;
  return median_bandwidth(points, config.metric);
}

double kernel_eval(const Vector& w, const Vector& w_prime, double bandwidth,
                   const KernelMetric& metric) {
  if (w.size() != w_prime.size()) throw ConfigError("kernel arguments differ in size");
  return std::exp(-metric.quadratic(w - w_prime) / bandwidth);
}

Vector kernel_grad_first_arg(const Vector& w, const Vector& w_prime, double bandwidth,
                             const KernelMetric& metric) {
  const double k = kernel_eval(w, w_prime, bandwidth, metric);
  return (-2.0 / bandwidth * k) * metric.apply(w - w_prime);
}

Matrix kernel_table(const RowMatrix& points, double bandwidth, const KernelMetric& metric,
                    WorkerPool* pool) {
  const Index n = points.rows();
  Matrix table(n, n);
  parallel_rows(pool, n, [&](Index i) {
    for (Index j = 0; j < n; ++j) {
      table(i, j) = std::exp(-metric.quadratic(points.row(i) - points.row(j)) / bandwidth);
    }
  });
  return table;
}

}  // namespace psvgd
