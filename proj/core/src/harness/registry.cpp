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

#include "psvgd/harness/registry.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "psvgd/errors.hpp"
#include "psvgd/models/conditional_diffusion.hpp"
#include "psvgd/models/linear_gaussian.hpp"
#include "psvgd/models/logistic_regression.hpp"

namespace psvgd {

namespace {

class Params {
 public:
  Params(const ModelSpec& spec, std::set<std::string> numbers, std::set<std::string> strings)
      : spec_(spec) {
    for (const auto& [key, value] : spec.numbers) {
      (void)value;
      if (!numbers.count(key)) throw ConfigError("model '" + spec.name + "' has no numeric parameter '" + key + "'");
    }
    for (const auto& [key, value] : spec.strings) {
      (void)value;
      if (!strings.count(key)) throw ConfigError("model '" + spec.name + "' has no string parameter '" + key + "'");
    }
  }

  double number(const std::string& key, double fallback) const {
    const auto it = spec_.numbers.find(key);
    return it == spec_.numbers.end() ? fallback : it->second;
  }

  Index integer(const std::string& key, Index fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    if (!std::isfinite(v) || std::floor(v) != v) {
      throw ConfigError("model parameter '" + key + "' must be an integer");
    }
    return static_cast<Index>(v);
  }

  std::uint64_t seed(std::uint64_t fallback) const {
    const Index v = integer("seed", static_cast<Index>(fallback));
    if (v < 0) throw ConfigError("model seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }

  const std::string* string(const std::string& key) const {
    const auto it = spec_.strings.find(key);
    return it == spec_.strings.end() ? nullptr : &it->second;
  }

 private:
  const ModelSpec& spec_;
};

void require_default_prior(const std::string& model, const PriorSpec& prior) {
  if (prior.kind != "default") {
    throw ConfigError("model '" + model + "' defines its own prior; prior.kind must be \"default\"");
  }
}

Problem make_linear(const ModelSpec& spec, const PriorSpec& prior) {
  require_default_prior(spec.name, prior);
  const Params p(spec, {"dim", "observations", "noise_relative", "prior_diffusion", "seed"}, {});
  LinearModelSpec s;
  s.dim = p.integer("dim", s.dim);
  s.observations = p.integer("observations", s.observations);
  s.noise_relative = p.number("noise_relative", s.noise_relative);
  s.prior_diffusion = p.number("prior_diffusion", s.prior_diffusion);
  s.seed = p.seed(s.seed);
  auto model = std::make_shared<const LinearGaussianModel>(linear_build(s));
  return Problem{model, model->prior()};
}

Problem make_diffusion(const ModelSpec& spec, const PriorSpec& prior) {
  require_default_prior(spec.name, prior);
  const Params p(spec, {"dim", "observations", "noise_std", "seed"}, {});
  DiffusionSpec s;
  s.steps = p.integer("dim", s.steps);
  s.observations = p.integer("observations", s.observations);
  s.noise_std = p.number("noise_std", s.noise_std);
  s.seed = p.seed(s.seed);
  auto model = std::make_shared<const ConditionalDiffusionModel>(diffusion_build(s));
  auto gaussian = std::make_shared<const GaussianPrior>(GaussianPrior::isotropic(model->dim()));
  return Problem{model, gaussian};
}

Problem make_logistic(const ModelSpec& spec, const PriorSpec& prior) {
  const Params p(spec, {"points", "dim", "seed", "weight_scale"}, {"data"});
  std::shared_ptr<const LogisticRegressionModel> model;
  if (const std::string* path = p.string("data")) {
    model = std::make_shared<const LogisticRegressionModel>(load_classification_data(*path));
  } else {
    Vector planted;
    ClassificationData data = synthetic_classification_data(
        p.integer("points", 200), p.integer("dim", 20), p.seed(1), p.number("weight_scale", 1.0),
        &planted);
    model = std::make_shared<const LogisticRegressionModel>(std::move(data), planted);
  }

  const Index d = model->dim();
  std::shared_ptr<const Prior> base;
  if (prior.kind == "uniform") {
    base = std::make_shared<const UniformPrior>(UniformPrior::box(d, prior.lower, prior.upper));
  } else {
    base = std::make_shared<const GaussianPrior>(GaussianPrior::isotropic(d, prior.variance));
  }
  return Problem{model, base};
}

struct Entry {
  const char* name;
  std::function<Problem(const ModelSpec&, const PriorSpec&)> make;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"linear", make_linear},
      {"diffusion", make_diffusion},
      {"logistic", make_logistic},
  };
  return table;
}

}  // namespace

Problem make_problem(const ModelSpec& model, const PriorSpec& prior) {
  for (const Entry& e : entries()) {
    if (model.name == e.name) return e.make(model, prior);
  }
  throw ConfigError("model '" + model.name + "' is not registered");
}

std::vector<std::string> registered_models() {
  std::vector<std::string> names;
  for (const Entry& e : entries()) names.emplace_back(e.name);
  return names;
}

}  // namespace psvgd
