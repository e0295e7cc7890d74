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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psvgd/harness/artifacts.hpp"
#include "psvgd/harness/config.hpp"
#include "psvgd/run_record.hpp"

namespace psvgd {

// Environment variable that overrides the configured output directory
// (a --out flag on the command line still takes precedence).
inline constexpr const char* kOutputDirEnv = "PSVGD_OUT_DIR";

struct ExperimentResult {
  ExperimentConfig config;
  std::optional<RowMatrix> ensemble;  // particle methods
  std::optional<RowMatrix> moments;   // rwmh: rows mean, variance, ess
  RunRecord record;
  MetricList metrics;
};

// Runs the configured algorithm in memory. Throws ConfigError or
// NumericalError.
ExperimentResult run_experiment(const ExperimentConfig& config);

// config.json, ensemble.csv or moments.csv, iterations.csv, adaptations.csv,
// spectra.csv, metrics.csv, timings.csv. Everything except timings.csv is a
// deterministic function of the configuration.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

// Output directory: explicit override, then $PSVGD_OUT_DIR, then the config,
// then runs/<name>.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config,
                                         const std::optional<std::string>& override_dir);

// One row per run directory: final metrics, iteration counts, ranks and
// timings, aligned on the union of metric names. Runs must share the model
// spec. Writes comparison.csv into `out_dir` and returns its path.
std::filesystem::path compare_runs(const std::vector<std::filesystem::path>& runs,
                                   const std::filesystem::path& out_dir);

}  // namespace psvgd
