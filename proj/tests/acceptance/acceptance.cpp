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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// only on an unexpected exception, or on any FAIL under --strict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "psvgd/ensemble.hpp"
#include "psvgd/harness/experiment.hpp"
#include "psvgd/harness/registry.hpp"
#include "psvgd/models/linear_gaussian.hpp"
#include "psvgd/projected.hpp"
#include "psvgd/subspace.hpp"
#include "psvgd/svgd.hpp"

namespace fs = std::filesystem;

namespace psvgd {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path config_dir = PSVGD_CONFIG_DIR;
  Index workers = 4;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double metric(const ExperimentResult& r, const std::string& name) {
  for (const auto& [key, value] : r.metrics) {
    if (key == name) return value;
  }
  throw std::runtime_error("run " + r.config.name + " has no metric " + name);
}

ExperimentResult run_config(const Options& opt, const std::string& stem) {
  ExperimentConfig config = load_config((opt.config_dir / (stem + ".json")).string());
  config.workers = opt.workers;  // results do not depend on it
  return run_experiment(config);
}

ProjectionBasis basis_from(const Matrix& psi) {
  ProjectionBasis b;
  b.psi = psi;
  b.eigenvalues = Vector::Ones(psi.cols());
  b.spectrum = Vector::Ones(psi.cols());
  return b;
}

// ---- 1: variance accuracy on the linear-Gaussian model --------------------

Outcome analytic_posterior_accuracy(const Options& opt) {
  const std::vector<int> dims = {17, 65, 257};
  std::vector<double> svgd, psvgd;
  std::ostringstream detail;
  for (int d : dims) {
    const std::string base = "linear_d" + std::to_string(d) + "_";
    svgd.push_back(metric(run_config(opt, base + "svgd"), "variance_rmse"));
    psvgd.push_back(metric(run_config(opt, base + "psvgd-adaptive"), "variance_rmse"));
    detail << "d=" << d << " svgd " << fmt(svgd.back()) << " psvgd " << fmt(psvgd.back()) << "; ";
  }
  const bool a = psvgd[1] < svgd[1] && psvgd[2] < svgd[2];
  const double p_growth = psvgd[2] / psvgd[0];
  const double s_growth = svgd[2] / svgd[0];
  const bool b = p_growth < 2.0 && s_growth > 2.0;
  detail << "(a) " << (a ? "ok" : "violated") << ", (b) psvgd x" << fmt(p_growth) << " svgd x"
         << fmt(s_growth) << " " << (b ? "ok" : "violated");
  return {a && b, detail.str()};
}

// ---- 2: coefficient gradient vs projected full-space gradient -------------

Outcome coefficient_gradient_equivalence(const Options&) {
  Engine engine(2024);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index d = 2 + (t * 7) % 49;
    const Index r = 1 + t % std::min<Index>(10, d);
    const Index obs = 1 + t % 9;
    const Matrix cov = testing::random_spd(engine, d);
    const Matrix precision = cov.inverse();
    const Vector mean = standard_normal_vector(engine, d);
    auto prior = std::make_shared<const GaussianPrior>(GaussianPrior::from_covariance(mean, cov));
    const LinearGaussianModel model(testing::random_gaussian(engine, obs, d), 0.3,
                                    standard_normal_vector(engine, obs), prior);
    const Matrix psi = testing::random_orthonormal(engine, d, r);
    const Vector w = standard_normal_vector(engine, r);

    const Vector g = coefficient_grad_log_posterior(model, *prior, basis_from(psi), w,
                                                    Vector::Zero(d));
    // Ψᵀ∇ log p at x = Ψw, written out for the linear-Gaussian posterior.
    const Vector x = psi * w;
    const Matrix& a = model.forward();
    const double s2 = model.noise_std() * model.noise_std();
    const Vector full = a.transpose() * (model.data() - a * x) / s2 - precision * (x - mean);
    const Vector oracle = psi.transpose() * full;
    worst = std::max(worst, (g - oracle).norm() / std::max(oracle.norm(), 1e-300));
  }
  return {worst <= 1e-10, "50 instances, worst relative error " + fmt(worst)};
}

// ---- 3: likelihood gradients vs finite differences ------------------------

Outcome gradient_correctness(const Options&) {
  std::ostringstream detail;
  bool pass = true;
  for (const std::string& name : registered_models()) {
    ModelSpec spec;
    spec.name = name;
    const Problem problem = make_problem(spec);
    Engine engine(99);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Vector x = problem.prior->sample(engine);
      const Vector g = problem.model->grad_log_likelihood(x);
      const Vector fd = testing::fd_gradient(
          [&](const Vector& z) { return problem.model->log_likelihood(z); }, x);
      worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1.0));
    }
    pass = pass && worst <= 1e-5;
    detail << name << " " << fmt(worst) << "; ";
  }
  return {pass, detail.str() + "20 points each"};
}

// ---- 4: factor-form eigensolve vs dense whitened eigensolve ---------------

Outcome eigensolver_equivalence(const Options&) {
  Engine engine(404);
  double worst_value = 0.0, worst_angle = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index d = 2 + t % 19;
    const Index m = 1 + (t * 3) % 20;
    const Matrix grads = testing::random_gaussian(engine, m, d);
    const Matrix gamma = testing::random_spd(engine, d);
    const GaussianPrior prior = GaussianPrior::from_covariance(Vector::Zero(d), gamma);
    const ProjectionBasis basis = generalized_eigensolve(GradientStack{RowMatrix(grads)}, prior, d);

    // Ĥ = GᵀG/M whitened by an independent dense Cholesky: LᵀĤL.
    const Matrix h = grads.transpose() * grads / static_cast<double>(m);
    const Matrix l = gamma.llt().matrixL();
    const Matrix whitened = l.transpose() * h * l;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (whitened + whitened.transpose()));
    const Vector values = eig.eigenvalues().reverse();
    const Matrix directions = l * eig.eigenvectors().rowwise().reverse();

    const Index k = std::min(m, d);
    for (Index i = 0; i < k; ++i) {
      worst_value = std::max(worst_value, std::abs(basis.spectrum[i] - values[i]) / values[0]);
    }
    for (Index r = 1; r <= k; ++r) {
      const double next = r < d ? values[r] : 0.0;
      if (values[r - 1] - next < 1e-3 * values[0]) continue;  // subspace not unique
      Eigen::HouseholderQR<Matrix> qr(directions.leftCols(r));
      const Matrix span = qr.householderQ() * Matrix::Identity(d, r);
      worst_angle = std::max(worst_angle, testing::subspace_angle(span, basis.psi.leftCols(r)));
    }
  }
  return {worst_value <= 1e-8 && worst_angle < 1e-6,
          "20 instances, eigenvalue error " + fmt(worst_value) + " (relative to the largest), angle " +
              fmt(worst_angle) + " rad"};
}

// ---- 5: spectrum decay on conditional diffusion ---------------------------

Outcome diffusion_spectrum_decay(const Options& opt) {
  const ExperimentResult r = run_config(opt, "diffusion_d100_psvgd-converged");
  const AdaptationRecord& last = r.record.adaptations.back();
  const double ratio = last.spectrum.size() >= 30 ? last.spectrum[29] / last.spectrum[0] : 0.0;
  return {last.rank <= 30 && ratio < 1e-2,
          "rank " + std::to_string(last.rank) + ", lambda30/lambda1 " + fmt(ratio) + " after " +
              std::to_string(r.record.iteration_count()) + " iterations (" +
              (r.record.converged ? "converged" : "budget") + ")"};
}

// ---- 6: posterior mean on conditional diffusion ---------------------------

Outcome diffusion_mean_recovery(const Options& opt) {
  const ExperimentResult s = run_config(opt, "diffusion_d100_svgd");
  const ExperimentResult p = run_config(opt, "diffusion_d100_psvgd-adaptive");
  const double s_rmse = metric(s, "path_truth_rmse");
  const double p_rmse = metric(p, "path_truth_rmse");
  const double cover = metric(p, "path_truth_coverage");
  return {p_rmse < s_rmse && cover >= 0.85,
          "path rmse psvgd " + fmt(p_rmse) + " svgd " + fmt(s_rmse) + ", psvgd 90% band covers " +
              fmt(cover) + " (increment rmse psvgd " + fmt(metric(p, "truth_rmse")) + " svgd " +
              fmt(metric(s, "truth_rmse")) + ")"};
}

// ---- 7: full-rank projection reproduces SVGD ------------------------------

Outcome full_rank_degeneracy(const Options&) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const Index d = model.dim();
  const ParticleEnsemble start = sample_prior(*model.prior(), 32, 6);
  Engine engine(77);
  double worst = 0.0;
  for (const Matrix& psi : {Matrix(Matrix::Identity(d, d)), testing::random_orthonormal(engine, d, d)}) {
    for (StepRule rule : {StepRule::kFixed, StepRule::kLineSearch}) {
      SvgdConfig svgd;
      svgd.max_iterations = 1;
      svgd.step.rule = rule;
      svgd.step.fixed_step = 1e-3;
      const SvgdResult reference = run_svgd(model, *model.prior(), start, svgd);

      PsvgdInnerConfig inner;
      inner.max_iterations = 1;
      inner.step = svgd.step;
      inner.eigen_weighted_metric = false;
      const PsvgdInnerResult projected =
          run_psvgd_inner(CoefficientEnsemble(basis_from(psi), start), model, *model.prior(), inner);
      const RowMatrix x = reconstruct_ensemble(projected.ensemble).particles();
      worst = std::max(worst, (x - reference.ensemble.particles()).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, "max particle difference " + fmt(worst) + " over 4 cases"};
}

// ---- 8: determinism and worker-count independence -------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const Options& opt) {
  const fs::path scratch = fs::temp_directory_path() / "psvgd_acceptance";
  fs::remove_all(scratch);
  double worst = 0.0;
  bool identical = true;
  for (const char* stem : {"linear_d17_svgd", "linear_d17_psvgd-adaptive", "diffusion_d100_psvgd-adaptive"}) {
    ExperimentConfig config = load_config((opt.config_dir / (std::string(stem) + ".json")).string());
    config.iterations = 30;
    config.particles = 48;
    std::vector<ExperimentResult> runs;
    for (Index k : {1, 4, 1}) {
      config.workers = k;
      runs.push_back(run_experiment(config));
    }
    for (std::size_t i = 0; i < runs[0].metrics.size(); ++i) {
      const auto& [name, v1] = runs[0].metrics[i];
      if (name.rfind("time", 0) == 0) continue;
      const double v4 = runs[1].metrics[i].second;
      worst = std::max(worst, std::abs(v1 - v4) / std::max(std::abs(v1), 1.0));
    }
    const fs::path a = scratch / stem / "a", b = scratch / stem / "b";
    write_artifacts(runs[0], a);
    write_artifacts(runs[2], b);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path name = entry.path().filename();
      if (name == "timings.csv") continue;
      identical = identical && slurp(entry.path()) == slurp(b / name);
    }
  }
  fs::remove_all(scratch);
  return {worst <= 1e-12 && identical,
          "K=1 vs K=4 metric difference " + fmt(worst) + ", repeated artifacts " +
              (identical ? "byte-identical" : "differ")};
}

}  // namespace
}  // namespace psvgd

int main(int argc, char** argv) {
  using namespace psvgd;
  Options opt;
  bool strict = false;
  std::string only;
  std::string report_path;
  std::string config_dir = opt.config_dir.string();
  CLI::App app{"psvgd acceptance checks"};
  app.add_option("--config-dir", config_dir, "directory holding the experiment configs");
  app.add_option("--workers", opt.workers, "worker threads for the long runs")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "comma-separated criterion numbers");
  app.add_option("--report", report_path, "also write the result lines to this file");
  app.add_flag("--strict", strict, "exit 1 if any criterion fails");
  CLI11_PARSE(app, argc, argv);
  opt.config_dir = config_dir;

  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria = {
      {"analytic-posterior variance accuracy", analytic_posterior_accuracy},
      {"coefficient gradient equivalence", coefficient_gradient_equivalence},
      {"gradient correctness across models", gradient_correctness},
      {"eigensolver oracle equivalence", eigensolver_equivalence},
      {"diffusion spectrum decay", diffusion_spectrum_decay},
      {"diffusion posterior-mean recovery", diffusion_mean_recovery},
      {"full-rank degeneracy", full_rank_degeneracy},
      {"determinism and worker independence", determinism},
  };

  std::ofstream report;
  if (!report_path.empty()) report.open(report_path);
  auto emit = [&](const std::string& line) {
    std::cout << line << std::endl;
    if (report) report << line << "\n" << std::flush;
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const std::string id = std::to_string(i + 1);
    if (!only.empty() && ("," + only + ",").find("," + id + ",") == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second(opt);
    } catch (const std::exception& e) {
      emit("criterion " + id + " ERROR " + criteria[i].first + ": " + e.what());
      return 2;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += outcome.pass ? 0 : 1;
    emit("criterion " + id + " " + (outcome.pass ? "PASS" : "FAIL") + " " + criteria[i].first +
         ": " + outcome.detail + " [" + fmt(secs) + " s]");
  }
  emit(std::to_string(failures) + " criterion(s) failed");
  return strict && failures > 0 ? 1 : 0;
}
