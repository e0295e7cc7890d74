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

#include <memory>
#include <string>
#include <vector>

#include "psvgd/harness/config.hpp"
#include "psvgd/model.hpp"
#include "psvgd/prior.hpp"

namespace psvgd {

struct Problem {
  std::shared_ptr<const InferenceModel> model;
  std::shared_ptr<const Prior> prior;
};

// Builds a registered model with its prior. Unknown names or parameters
// raise ConfigError.
Problem make_problem(const ModelSpec& model, const PriorSpec& prior = {});

std::vector<std::string> registered_models();

}  // namespace psvgd
