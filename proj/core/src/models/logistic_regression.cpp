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

#include "psvgd/models/logistic_regression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "psvgd/errors.hpp"
#include "psvgd/rng.hpp"

namespace psvgd {

double log_sigmoid(double z) {
  // log σ(z) = −log(1 + e⁻ᶻ); for negative z use z − log(1 + eᶻ).
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ClassificationData synthetic_classification_data(Index points, Index dim, std::uint64_t seed,
                                                 double weight_scale, Vector* planted) {
  if (points < 1 || dim < 1) throw ConfigError("synthetic data needs points >= 1 and dim >= 1");
  Engine weight_engine = make_engine(seed, StreamDomain::kModelData, 0);
  const Vector w = weight_scale * standard_normal_vector(weight_engine, dim);

  ClassificationData data;
  data.features.resize(points, dim);
  data.labels.resize(points);
  Engine feature_engine = make_engine(seed, StreamDomain::kModelData, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index i = 0; i < points; ++i) {
    const Vector z = standard_normal_vector(feature_engine, dim) / std::sqrt(static_cast<double>(dim));
    data.features.row(i) = z.transpose();
    data.labels[i] = unit(feature_engine) < sigmoid(z.dot(w)) ? 1.0 : 0.0;
  }
  if (planted) *planted = w;
  return data;
}

ClassificationData load_classification_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": not a number: " + token);
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": inconsistent column count");
    }
    if (row.size() < 2) throw ConfigError(path + ":" + std::to_string(line_no) + ": need >= 2 columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("dataset " + path + " is empty");

  const Index n = static_cast<Index>(rows.size());
  const Index cols = static_cast<Index>(rows.front().size());
  ClassificationData data;
  data.features.resize(n, cols - 1);
  data.labels.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j + 1 < cols; ++j) data.features(i, j) = rows[i][j];
    const double label = rows[i][cols - 1];
    if (label != 0.0 && label != 1.0) {
      throw ConfigError(path + ": label on data row " + std::to_string(i + 1) + " is not 0 or 1");
    }
    data.labels[i] = label;
  }
  return data;
}

LogisticRegressionModel::LogisticRegressionModel(ClassificationData data,
                                                 std::optional<Vector> truth)
    : data_(std::move(data)), truth_(std::move(truth)) {
  if (data_.features.rows() < 1 || data_.features.cols() < 1) {
    throw ConfigError("logistic model needs a non-empty feature matrix");
  }
  if (data_.labels.size() != data_.features.rows()) {
    throw ConfigError("label count must match feature rows");
  }
  if (!data_.features.allFinite()) throw ConfigError("features must be finite");
  for (Index i = 0; i < data_.labels.size(); ++i) {
    if (data_.labels[i] != 0.0 && data_.labels[i] != 1.0) {
      throw ConfigError("labels must be 0 or 1");
    }
  }
  if (truth_ && truth_->size() != dim()) throw ConfigError("truth has the wrong size");
}

double LogisticRegressionModel::log_likelihood(const Vector& x) const {
  return log_likelihood_and_grad(x).first;
}

Vector LogisticRegressionModel::grad_log_likelihood(const Vector& x) const {
  return log_likelihood_and_grad(x).second;
}

std::pair<double, Vector> LogisticRegressionModel::log_likelihood_and_grad(
    const Vector& x) const {
  if (x.size() != dim()) throw ConfigError("parameter has the wrong size");
  const Vector logits = data_.features * x;
  Vector weights(logits.size());
  double value = 0.0;
  for (Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    // log(1 − σ(z)) = log σ(−z).
    value += data_.labels[i] > 0.5 ? log_sigmoid(z) : log_sigmoid(-z);
    weights[i] = data_.labels[i] - sigmoid(z);
  }
  return {value, data_.features.transpose() * weights};
}

GroundTruth LogisticRegressionModel::ground_truth() const {
  GroundTruth truth;
  truth.parameter = truth_;
  return truth;
}

double LogisticRegressionModel::accuracy(const Vector& x) const {
  const Vector logits = data_.features * x;
  Index hits = 0;
  for (Index i = 0; i < logits.size(); ++i) {
    if ((logits[i] > 0.0) == (data_.labels[i] > 0.5)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(logits.size());
}

}  // namespace psvgd
