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

#include "psvgd/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "psvgd/errors.hpp"
#include "psvgd/harness/registry.hpp"

namespace psvgd {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& object, const char* key, T& out) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void read_index(const json& object, const char* key, Index& out) {
  if (!object.contains(key)) return;
  const json& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
  out = v.get<Index>();
}

std::string pencil_name(EigenPencil p) {
  return p == EigenPencil::kPriorPrecision ? "precision" : "covariance";
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSvgd: return "svgd";
    case Algorithm::kPsvgd: return "psvgd";
    case Algorithm::kPsvgdAdaptive: return "psvgd-adaptive";
    case Algorithm::kRwmhReference: return "rwmh-reference";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
  for (Algorithm a : {Algorithm::kSvgd, Algorithm::kPsvgd, Algorithm::kPsvgdAdaptive,
                      Algorithm::kRwmhReference}) {
    if (text == to_string(a)) return a;
  }
  throw ConfigError("unknown algorithm '" + text + "'");
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("experiment name must not be empty");
  const auto models = registered_models();
  if (std::find(models.begin(), models.end(), model.name) == models.end()) {
    throw ConfigError("model '" + model.name + "' is not registered");
  }
  if (prior.kind != "default" && prior.kind != "gaussian" && prior.kind != "uniform") {
    throw ConfigError("unknown prior kind '" + prior.kind + "'");
  }
  if (particles < 1) throw ConfigError("particles must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (particles % workers != 0) {
    throw ConfigError("particles (" + std::to_string(particles) + ") must be divisible by workers (" +
                      std::to_string(workers) + ")");
  }
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (inner_iterations < 1) throw ConfigError("inner_iterations must be at least 1");
  if (!(rank_threshold > 0.0)) throw ConfigError("rank_threshold must be positive");
  if (max_rank < 0) throw ConfigError("max_rank must be non-negative");
  if (chain_length < 2) throw ConfigError("chain_length must be at least 2");
  if (!(credible_level > 0.0 && credible_level <= 1.0)) {
    throw ConfigError("credible_level must lie in (0, 1]");
  }
  kernel.validate();
  step.validate();
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(root,
                 {"name", "model", "prior", "algorithm", "particles", "workers", "seed", "kernel",
                  "step", "iterations", "inner_iterations", "tolerance", "w_tolerance",
                  "rank_threshold", "max_rank", "pencil", "eigen_weighted_metric",
                  "chain_length", "burn_in", "credible_level", "reference_dir", "output_dir"},
                 "config");

  ExperimentConfig c;
  read(root, "name", c.name);

  if (!root.contains("model") || !root["model"].is_object()) {
    throw ConfigError("config needs a 'model' object");
  }
  for (const auto& [key, value] : root["model"].items()) {
    if (key == "name") {
      if (!value.is_string()) throw ConfigError("model name must be a string");
      c.model.name = value.get<std::string>();
    } else if (value.is_number()) {
      c.model.numbers[key] = value.get<double>();
    } else if (value.is_string()) {
      c.model.strings[key] = value.get<std::string>();
    } else {
      throw ConfigError("model parameter '" + key + "' must be a number or string");
    }
  }

  if (root.contains("prior")) {
    const json& p = root["prior"];
    if (!p.is_object()) throw ConfigError("'prior' must be an object");
    reject_unknown(p, {"kind", "variance", "lower", "upper"}, "prior");
    read(p, "kind", c.prior.kind);
    read(p, "variance", c.prior.variance);
    read(p, "lower", c.prior.lower);
    read(p, "upper", c.prior.upper);
  }

  if (root.contains("algorithm")) {
    std::string text;
    read(root, "algorithm", text);
    c.algorithm = parse_algorithm(text);
  }
  read_index(root, "particles", c.particles);
  read_index(root, "workers", c.workers);
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }

  if (root.contains("kernel")) {
    const json& k = root["kernel"];
    if (!k.is_object()) throw ConfigError("'kernel' must be an object");
    reject_unknown(k, {"bandwidth"}, "kernel");
    if (k.contains("bandwidth")) {
      const json& b = k["bandwidth"];
      if (b.is_string() && b.get<std::string>() == "median") {
        c.kernel.bandwidth_rule = BandwidthRule::kMedian;
      } else if (b.is_number()) {
        c.kernel.bandwidth_rule = BandwidthRule::kFixed;
        c.kernel.fixed_bandwidth = b.get<double>();
      } else {
        throw ConfigError("kernel bandwidth must be \"median\" or a positive number");
      }
    }
  }

  if (root.contains("step")) {
    const json& s = root["step"];
    if (!s.is_object()) throw ConfigError("'step' must be an object");
    reject_unknown(s, {"rule", "initial", "max_backtracks", "size"}, "step");
    std::string rule = "line-search";
    read(s, "rule", rule);
    if (rule == "line-search") {
      c.step.rule = StepRule::kLineSearch;
    } else if (rule == "fixed") {
      c.step.rule = StepRule::kFixed;
    } else {
      throw ConfigError("step rule must be \"line-search\" or \"fixed\"");
    }
    read(s, "initial", c.step.initial_step);
    read(s, "max_backtracks", c.step.max_backtracks);
    read(s, "size", c.step.fixed_step);
  }

  read_index(root, "iterations", c.iterations);
  read_index(root, "inner_iterations", c.inner_iterations);
  read(root, "tolerance", c.tolerance);
  read(root, "w_tolerance", c.w_tolerance);
  read(root, "rank_threshold", c.rank_threshold);
  read_index(root, "max_rank", c.max_rank);
  if (root.contains("pencil")) {
    std::string pencil;
    read(root, "pencil", pencil);
    if (pencil == "precision") {
      c.pencil = EigenPencil::kPriorPrecision;
    } else if (pencil == "covariance") {
      c.pencil = EigenPencil::kPriorCovariance;
    } else {
      throw ConfigError("pencil must be \"precision\" or \"covariance\"");
    }
  }
  read(root, "eigen_weighted_metric", c.eigen_weighted_metric);
  read_index(root, "chain_length", c.chain_length);
  read_index(root, "burn_in", c.burn_in);
  read(root, "credible_level", c.credible_level);
  read(root, "reference_dir", c.reference_dir);
  read(root, "output_dir", c.output_dir);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_json(const ExperimentConfig& c) {
  json model = json::object();
  model["name"] = c.model.name;
  for (const auto& [k, v] : c.model.numbers) model[k] = v;
  for (const auto& [k, v] : c.model.strings) model[k] = v;

  json kernel = json::object();
  if (c.kernel.bandwidth_rule == BandwidthRule::kMedian) {
    kernel["bandwidth"] = "median";
  } else {
    kernel["bandwidth"] = c.kernel.fixed_bandwidth;
  }

  json step = {{"rule", c.step.rule == StepRule::kLineSearch ? "line-search" : "fixed"},
               {"initial", c.step.initial_step},
               {"max_backtracks", c.step.max_backtracks},
               {"size", c.step.fixed_step}};

  json root = {
      {"name", c.name},
      {"model", model},
      {"prior",
       {{"kind", c.prior.kind},
        {"variance", c.prior.variance},
        {"lower", c.prior.lower},
        {"upper", c.prior.upper}}},
      {"algorithm", to_string(c.algorithm)},
      {"particles", c.particles},
      {"workers", c.workers},
      {"seed", c.seed},
      {"kernel", kernel},
      {"step", step},
      {"iterations", c.iterations},
      {"inner_iterations", c.inner_iterations},
      {"tolerance", c.tolerance},
      {"w_tolerance", c.w_tolerance},
      {"rank_threshold", c.rank_threshold},
      {"max_rank", c.max_rank},
      {"pencil", pencil_name(c.pencil)},
      {"eigen_weighted_metric", c.eigen_weighted_metric},
      {"chain_length", c.chain_length},
      {"burn_in", c.burn_in},
      {"credible_level", c.credible_level},
      {"reference_dir", c.reference_dir},
      {"output_dir", c.output_dir},
  };
  return root.dump(2) + "\n";
}

}  // namespace psvgd
