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

#include "psvgd/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>

#include "psvgd/errors.hpp"
#include "psvgd/harness/metrics.hpp"
#include "psvgd/harness/registry.hpp"
#include "psvgd/models/conditional_diffusion.hpp"
#include "psvgd/models/rwmh.hpp"
#include "psvgd/parallel.hpp"
#include "psvgd/projected.hpp"
#include "psvgd/svgd.hpp"

namespace psvgd {

namespace fs = std::filesystem;

namespace {

struct Reference {
  std::optional<Vector> mean;
  std::optional<Vector> variance;
};

Reference load_reference(const ExperimentConfig& config, const GroundTruth& truth, Index dim) {
  Reference ref{truth.posterior_mean, truth.posterior_variance};
  if (config.reference_dir.empty()) return ref;
  const RowMatrix moments = read_matrix_csv(fs::path(config.reference_dir) / "moments.csv");
  if (moments.rows() < 2 || moments.cols() != dim) {
    throw ConfigError("reference moments in " + config.reference_dir + " do not match the model");
  }
  ref.mean = moments.row(0).transpose();
  ref.variance = moments.row(1).transpose();
  return ref;
}

RowMatrix map_rows(const RowMatrix& x, Vector (*fn)(const Vector&)) {
  RowMatrix out(x.rows(), x.cols());
  for (Index n = 0; n < x.rows(); ++n) out.row(n) = fn(x.row(n).transpose()).transpose();
  return out;
}

void particle_metrics(const ExperimentConfig& config, const InferenceModel& model,
                      const Reference& ref, const RowMatrix& particles, MetricList& metrics) {
  const ParticleEnsemble ensemble(particles);
  const Vector mean = ensemble.sample_mean();
  if (ref.variance && ensemble.count() >= 2) {
    metrics.emplace_back("variance_rmse", variance_rmse(ensemble, *ref.variance));
  }
  if (ref.mean) metrics.emplace_back("mean_rmse", rms_error(mean, *ref.mean));

  const GroundTruth truth = model.ground_truth();
  if (!truth.parameter) return;
  const CredibleBand band = credible_interval(particles, config.credible_level);
  metrics.emplace_back("truth_rmse", rms_error(mean, *truth.parameter));
  metrics.emplace_back("truth_coverage", coverage(band, *truth.parameter));

  if (dynamic_cast<const ConditionalDiffusionModel*>(&model)) {
    const RowMatrix paths = map_rows(particles, &brownian_path);
    const Vector true_path = brownian_path(*truth.parameter);
    const CredibleBand path_band = credible_interval(paths, config.credible_level);
    metrics.emplace_back("path_truth_rmse", rms_error(paths.colwise().mean().transpose(), true_path));
    metrics.emplace_back("path_truth_coverage", coverage(path_band, true_path));
  }
}

void record_metrics(const RunRecord& record, MetricList& metrics) {
  metrics.emplace_back("iterations", static_cast<double>(record.iteration_count()));
  metrics.emplace_back("converged", record.converged ? 1.0 : 0.0);
  metrics.emplace_back("final_step_norm",
                       record.iterations.empty() ? 0.0 : record.iterations.back().mean_step_norm);
  if (!record.adaptations.empty()) {
    metrics.emplace_back("adaptations", static_cast<double>(record.adaptations.size()));
    metrics.emplace_back("final_rank", static_cast<double>(record.adaptations.back().rank));
    metrics.emplace_back("final_tail_bound", record.adaptations.back().tail_bound);
  }
}

std::string csv_field(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  return text;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem problem = make_problem(config.model, config.prior);
  const InferenceModel& model = *problem.model;
  const Prior& prior = *problem.prior;
  const Reference ref = load_reference(config, model.ground_truth(), model.dim());

  WorkerPool pool(static_cast<std::size_t>(config.workers));
  ExperimentResult result;
  result.config = config;

  switch (config.algorithm) {
    case Algorithm::kSvgd: {
      SvgdConfig svgd;
      svgd.max_iterations = config.iterations;
      svgd.step = config.step;
      svgd.tolerance = config.tolerance;
      svgd.kernel = config.kernel;
      SvgdResult run = run_svgd(model, prior, config.particles, config.seed, svgd, &pool);
      result.ensemble = run.ensemble.particles();
      result.record = std::move(run.record);
      break;
    }
    case Algorithm::kPsvgd:
    case Algorithm::kPsvgdAdaptive: {
      AdaptivePsvgdConfig ap;
      if (config.algorithm == Algorithm::kPsvgd) {
        ap.outer_iterations = 1;
        ap.inner_iterations = config.iterations;
      } else {
        ap.inner_iterations = std::min(config.inner_iterations, config.iterations);
        ap.outer_iterations =
            (config.iterations + ap.inner_iterations - 1) / ap.inner_iterations;
      }
      ap.x_tolerance = config.tolerance;
      ap.w_tolerance = config.w_tolerance;
      ap.rank_threshold = config.rank_threshold;
      ap.max_rank = config.max_rank;
      ap.pencil = config.pencil;
      ap.eigen_weighted_metric = config.eigen_weighted_metric;
      ap.kernel = config.kernel;
      ap.step = config.step;
      AdaptivePsvgdResult run =
          run_adaptive_psvgd(model, prior, config.particles, config.seed, ap, &pool);
      result.ensemble = run.ensemble.particles();
      result.record = std::move(run.record);
      break;
    }
    case Algorithm::kRwmhReference: {
      RwmhConfig rw;
      rw.chain_length = config.chain_length;
      rw.burn_in = config.burn_in;
      rw.seed = config.seed;
      const auto start = std::chrono::steady_clock::now();
      const RwmhResult chain = reference_posterior_rwmh(model, prior, rw);
      // The chain has no phases; only the total is meaningful.
      result.record.timings.total =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      RowMatrix moments(3, model.dim());
      moments.row(0) = chain.mean.transpose();
      moments.row(1) = chain.variance.transpose();
      moments.row(2) = chain.ess.transpose();
      result.moments = moments;
      result.metrics.emplace_back("samples", static_cast<double>(chain.samples));
      result.metrics.emplace_back("acceptance_rate", chain.acceptance_rate);
      result.metrics.emplace_back("acceptance_warning", chain.acceptance_warning ? 1.0 : 0.0);
      result.metrics.emplace_back("min_ess", chain.ess.minCoeff());
      if (ref.variance) {
        result.metrics.emplace_back("variance_rmse", variance_rmse(chain.variance, *ref.variance));
      }
      if (ref.mean) result.metrics.emplace_back("mean_rmse", rms_error(chain.mean, *ref.mean));
      return result;
    }
  }

  record_metrics(result.record, result.metrics);
  particle_metrics(config, model, ref, *result.ensemble, result.metrics);
  return result;
}

void write_artifacts(const ExperimentResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.json", to_json(result.config));
  if (result.ensemble) write_matrix_csv(dir / "ensemble.csv", *result.ensemble);
  if (result.moments) write_matrix_csv(dir / "moments.csv", *result.moments);
  write_run_record(dir, result.record);
  write_metrics_csv(dir / "metrics.csv", result.metrics);
}

fs::path resolve_output_dir(const ExperimentConfig& config,
                            const std::optional<std::string>& override_dir) {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (!config.output_dir.empty()) return config.output_dir;
  return fs::path("runs") / config.name;
}

fs::path compare_runs(const std::vector<fs::path>& runs, const fs::path& out_dir) {
  if (runs.empty()) throw ConfigError("compare needs at least one run directory");

  struct Row {
    std::string run;
    ExperimentConfig config;
    MetricList metrics;
    RunRecord record;
  };
  std::vector<Row> rows;
  std::vector<std::string> names;
  for (const fs::path& dir : runs) {
    Row row{dir.string(), parse_config(read_text(dir / "config.json")),
            read_metrics_csv(dir / "metrics.csv"), read_run_record(dir)};
    if (!rows.empty() &&
        (!(row.config.model == rows.front().config.model) ||
         !(row.config.prior == rows.front().config.prior))) {
      throw ConfigError("run " + row.run + " uses a different model spec than " + rows.front().run);
    }
    for (const auto& [name, value] : row.metrics) {
      (void)value;
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    rows.push_back(std::move(row));
  }

  fs::create_directories(out_dir);
  const fs::path path = out_dir / "comparison.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "run,name,algorithm,particles,workers,seed";
  for (const auto& name : names) out << ',' << name;
  out << ",time_gradient,time_kernel,time_update,time_total\n";
  for (const Row& row : rows) {
    out << csv_field(row.run) << ',' << csv_field(row.config.name) << ','
        << to_string(row.config.algorithm) << ',' << row.config.particles << ','
        << row.config.workers << ',' << row.config.seed;
    for (const auto& name : names) {
      out << ',';
      const auto it = std::find_if(row.metrics.begin(), row.metrics.end(),
                                   [&](const auto& m) { return m.first == name; });
      if (it != row.metrics.end()) out << format_double(it->second);
    }
    const PhaseTimings& t = row.record.timings;
    out << ',' << format_double(t.gradient) << ',' << format_double(t.kernel) << ','
        << format_double(t.update) << ',' << format_double(t.total) << '\n';
  }
  return path;
}

}  // namespace psvgd
