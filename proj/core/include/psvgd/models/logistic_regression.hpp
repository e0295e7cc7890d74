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
#include <optional>
#include <string>

#include "psvgd/model.hpp"

namespace psvgd {

struct ClassificationData {
  RowMatrix features;  // one data point per row
  Vector labels;       // 0 or 1
};

// Gaussian features, labels drawn from the logistic model with a planted
// weight vector w ~ N(0, weight_scale² I). The planted vector is returned in
// `planted` when non-null.
ClassificationData synthetic_classification_data(Index points, Index dim, std::uint64_t seed,
                                                 double weight_scale = 1.0,
                                                 Vector* planted = nullptr);

// Numeric text, whitespace or comma separated, one data point per line, the
// last column being the 0/1 label. Blank lines and lines starting with '#'
// are skipped.
ClassificationData load_classification_data(const std::string& path);

// log σ(z) without overflow.
double log_sigmoid(double z);
double sigmoid(double z);

class LogisticRegressionModel final : public InferenceModel {
 public:
  explicit LogisticRegressionModel(ClassificationData data,
                                   std::optional<Vector> truth = std::nullopt);

  std::string name() const override { return "logistic"; }
  Index dim() const override { return data_.features.cols(); }

  double log_likelihood(const Vector& x) const override;
  Vector grad_log_likelihood(const Vector& x) const override;
  std::pair<double, Vector> log_likelihood_and_grad(const Vector& x) const override;
  GroundTruth ground_truth() const override;

  const ClassificationData& data() const { return data_; }

  // Fraction of points whose label matches σ(zᵀx) > 1/2.
  double accuracy(const Vector& x) const;

 private:
  ClassificationData data_;
  std::optional<Vector> truth_;
};

}  // namespace psvgd
