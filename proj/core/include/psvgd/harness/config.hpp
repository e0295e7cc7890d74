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
#include <map>
#include <string>

#include "psvgd/kernel.hpp"
#include "psvgd/subspace.hpp"
#include "psvgd/svgd.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

enum class Algorithm { kSvgd, kPsvgd, kPsvgdAdaptive, kRwmhReference };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& text);

// Registered model name plus free-form parameters; the registry validates
// the keys.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;

  bool operator==(const ModelSpec&) const = default;
};

// "default" uses the prior the model was built with. Only models without a
// built-in prior accept "gaussian" (isotropic) or "uniform" (box).
struct PriorSpec {
  std::string kind = "default";
  double variance = 1.0;
  double lower = -1.0;
  double upper = 1.0;

  bool operator==(const PriorSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSpec model;
  PriorSpec prior;
  Algorithm algorithm = Algorithm::kSvgd;

  Index particles = 64;
  Index workers = 1;
  std::uint64_t seed = 1;

  KernelConfig kernel;
  StepConfig step;

  // Total transport iterations. For psvgd-adaptive the subspace is rebuilt
  // every `inner_iterations`; plain psvgd builds it once.
  Index iterations = 100;
  Index inner_iterations = 10;
  double tolerance = -1.0;    // svgd step-norm / psvgd x tolerance, negative = auto
  double w_tolerance = -1.0;  // psvgd coefficient tolerance, negative = auto

  double rank_threshold = 1e-2;
  Index max_rank = 0;
  EigenPencil pencil = EigenPencil::kPriorPrecision;
  bool eigen_weighted_metric = true;

  Index chain_length = 200000;
  Index burn_in = -1;

  double credible_level = 0.9;
  // Directory of an rwmh-reference run whose moments serve as the reference
  // posterior for models without an analytic one.
  std::string reference_dir;

  std::string output_dir;

  // Throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON with every field resolved; parse_config(to_json(c)) == c.
std::string to_json(const ExperimentConfig& config);

}  // namespace psvgd
