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

// Experiment driver.
//
//   psvgd run --config <path> [--seed S] [--workers K] [--out DIR]
//   psvgd compare --out DIR run1 run2 ...
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psvgd/errors.hpp"
#include "psvgd/harness/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int run_command(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::optional<long>& workers, const std::optional<std::string>& out) {
  psvgd::ExperimentConfig config = psvgd::load_config(config_path);
  if (seed) config.seed = *seed;
  if (workers) config.workers = *workers;
  config.validate();

  const std::filesystem::path dir = psvgd::resolve_output_dir(config, out);
  const psvgd::ExperimentResult result = psvgd::run_experiment(config);
  psvgd::write_artifacts(result, dir);

  std::cout << "run " << config.name << " (" << psvgd::to_string(config.algorithm) << ") -> "
            << dir.string() << '\n';
  for (const auto& [name, value] : result.metrics) {
    std::cout << "  " << name << " = " << psvgd::format_double(value) << '\n';
  }
  std::cout << "  time_total = " << psvgd::format_double(result.record.timings.total) << " s\n";
  return 0;
}

int compare_command(const std::vector<std::string>& runs, const std::string& out) {
  std::vector<std::filesystem::path> dirs(runs.begin(), runs.end());
  const auto path = psvgd::compare_runs(dirs, out);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein variational inference experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> workers;
  std::optional<std::string> run_out;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the run seed");
  run->add_option("--workers", workers, "Override the worker count");
  run->add_option("--out", run_out,
                  std::string("Output directory (overrides $") + psvgd::kOutputDirEnv + ")");

  auto* compare = app.add_subcommand("compare", "Tabulate finished runs into comparison.csv");
  std::string compare_out;
  std::vector<std::string> runs;
  compare->add_option("--out", compare_out, "Directory for comparison.csv")->required();
  compare->add_option("runs", runs, "Run directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, seed, workers, run_out);
    return compare_command(runs, compare_out);
  } catch (const psvgd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const psvgd::NumericalError& e) {
    std::cerr << "numerical failure";
    if (e.iteration() >= 0) std::cerr << " at iteration " << e.iteration();
    std::cerr << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
