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


#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psvgd/ensemble.hpp"
#include "psvgd/parallel.hpp"
#include "psvgd/prior.hpp"
#include "psvgd/svgd.hpp"

namespace psvgd {
namespace {

// log f(x) = −½‖x − c‖²/s².
class GaussianLikelihood final : public InferenceModel {
 public:
  GaussianLikelihood(Vector center, double scale) : center_(std::move(center)), scale_(scale) {}
  std::string name() const override { return "gaussian"; }
  Index dim() const override { return center_.size(); }
  double log_likelihood(const Vector& x) const override {
    return -0.5 * (x - center_).squaredNorm() / (scale_ * scale_);
  }
  Vector grad_log_likelihood(const Vector& x) const override {
    return -(x - center_) / (scale_ * scale_);
  }

 private:
  Vector center_;
  double scale_;
};

RowMatrix column(std::initializer_list<double> values) {
  RowMatrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

TEST(SteinDirection, SingleParticleIsGradientAscent) {
  RowMatrix x(1, 3), g(1, 3);
  x << 0.1, -2, 4;
  g << 1, 2, 3;
  EXPECT_EQ(svgd_direction(x, g, KernelConfig{}).direction, g);
}

TEST(SteinDirection, TwoParticlesByHand) {
  const double a = 0.3, b = -0.9, sa = -0.7, sb = 1.4, h = 0.8;
  const double k = std::exp(-(a - b) * (a - b) / h);
  // ∇_{x_j} k(x_j, x_m) = (2/h)·k·(x_m − x_j).
  const double phi_a = 0.5 * (sa + k * sb + (2.0 / h) * k * (a - b));
  const double phi_b = 0.5 * (k * sa + sb + (2.0 / h) * k * (b - a));
  const RowMatrix phi = stein_direction(column({a, b}), column({sa, sb}), h, KernelMetric{});
  EXPECT_NEAR(phi(0, 0), phi_a, 1e-15);
  EXPECT_NEAR(phi(1, 0), phi_b, 1e-15);
}

TEST(SteinDirection, BalancedSymmetricPair) {
  // Target N(0,1), score −x. At ±a the direction vanishes when
  // exp(−4a²/h)(1 + 4/h) = 1.
  const double h = 1.0;
  const double a = std::sqrt(h / 4.0 * std::log((h + 4.0) / h));
  const RowMatrix phi = stein_direction(column({-a, a}), column({a, -a}), h, KernelMetric{});
  EXPECT_EQ(phi(0, 0), -phi(1, 0));
  EXPECT_LT(std::abs(phi(0, 0)), 1e-14);

  const RowMatrix off = stein_direction(column({-0.2, 0.2}), column({0.2, -0.2}), h, KernelMetric{});
  EXPECT_EQ(off(0, 0), -off(1, 0));
  EXPECT_LT(off(0, 0), 0.0);  // too close together: repulsion wins
}

TEST(SteinDirection, PermutationEquivariance) {
  Engine engine(6);
  const RowMatrix x = testing::random_gaussian(engine, 9, 3);
  const RowMatrix g = testing::random_gaussian(engine, 9, 3);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(9);
  perm.setIdentity();
  std::swap(perm.indices()[0], perm.indices()[5]);
  std::swap(perm.indices()[2], perm.indices()[8]);
  const double h = median_bandwidth(x);
  const RowMatrix direct = stein_direction(x, g, h, KernelMetric{});
  const RowMatrix permuted = stein_direction(perm * x, perm * g, h, KernelMetric{});
  EXPECT_LT((RowMatrix(perm * direct) - permuted).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SteinDirection, WorkerCountDoesNotChangeBits) {
  Engine engine(7);
  const RowMatrix x = testing::random_gaussian(engine, 17, 4);
  const RowMatrix g = testing::random_gaussian(engine, 17, 4);
  WorkerPool pool(4);
  EXPECT_EQ(svgd_direction(x, g, KernelConfig{}).direction,
            svgd_direction(x, g, KernelConfig{}, &pool).direction);
}

TEST(LineSearch, StationaryDirectionKeepsInitialStep) {
  StepConfig config;
  config.initial_step = 0.75;
  const LineSearchResult r = line_search_step([](double) { return -3.0; }, config);
  EXPECT_EQ(r.step, 0.75);
  EXPECT_EQ(r.backtracks, 0);
  EXPECT_FALSE(r.exhausted);
}

TEST(LineSearch, OvershootOnQuadraticBacktracks) {
  // log p(x) = −x²/2 at x = 1 moving along d = −1: objective(ε) = −(1−ε)²/2,
  // non-decreasing only for ε ≤ 2.
  StepConfig config;
  config.initial_step = 8.0;
  auto objective = [](double eps) { return -0.5 * (1.0 - eps) * (1.0 - eps); };
  const LineSearchResult r = line_search_step(objective, config);
  EXPECT_LT(r.step, config.initial_step);
  EXPECT_EQ(r.step, 2.0);
  EXPECT_GE(objective(r.step), objective(0.0));
  EXPECT_FALSE(r.exhausted);
}

TEST(LineSearch, ExhaustionReturnsSmallestStep) {
  StepConfig config;
  config.max_backtracks = 5;
  const LineSearchResult r = line_search_step([](double eps) { return -eps; }, config);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.step, std::ldexp(1.0, -5));

  const LineSearchResult blocked = line_search_step(
      [](double eps) { return eps == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity(); },
      config);
  EXPECT_TRUE(blocked.exhausted);
  EXPECT_EQ(blocked.step, 0.0);
}

TEST(RunSvgd, ZeroIterationsRejected) {
  SvgdConfig config;
  config.max_iterations = 0;
  EXPECT_THROW(config.validate(), ConfigError);
  const FlatModel flat(1);
  EXPECT_THROW(run_svgd(flat, GaussianPrior::isotropic(1), 8, 1, config), ConfigError);
}

// A finite prior sample is not itself stationary; the ensemble settles on the
// target instead, slightly underdispersed.
TEST(RunSvgd, PriorSampleStaysOnTarget) {
  const FlatModel flat(1);
  const auto prior = GaussianPrior::isotropic(1);
  const ParticleEnsemble start = sample_prior(prior, 128, 3);
  SvgdConfig config;
  config.max_iterations = 100;
  config.tolerance = 0.0;
  const SvgdResult r = run_svgd(flat, prior, start, config);
  EXPECT_NEAR(r.ensemble.sample_mean()[0], 0.0, 0.05);
  EXPECT_GT(r.ensemble.sample_variance()[0], 0.9);
  EXPECT_LT(r.ensemble.sample_variance()[0], 1.05);
}

TEST(RunSvgd, RecoversStandardNormalMoments) {
  // Flat-ish prior so the likelihood sets the target.
  const GaussianLikelihood like(Vector::Zero(1), 1.0);
  const auto prior = GaussianPrior::isotropic(1, 1e6);
  Engine engine(4);
  const ParticleEnsemble start(RowMatrix::Constant(64, 1, 3.0) +
                               0.1 * testing::random_gaussian(engine, 64, 1));
  SvgdConfig config;
  config.max_iterations = 2000;
  const SvgdResult r = run_svgd(like, prior, start, config);
  EXPECT_NEAR(r.ensemble.sample_mean()[0], 0.0, 0.1);
  EXPECT_NEAR(r.ensemble.sample_variance()[0], 1.0, 0.15);
}

TEST(RunSvgd, TranslationEquivariance) {
  const Vector c = (Vector(2) << 3.0, -1.5).finished();
  const GaussianLikelihood centered(Vector::Zero(2), 0.5);
  const GaussianLikelihood shifted(c, 0.5);
  const auto prior0 = GaussianPrior::isotropic(2);
  const auto prior_c = GaussianPrior::from_covariance(c, Matrix::Identity(2, 2));
  SvgdConfig config;
  config.max_iterations = 300;
  const SvgdResult a = run_svgd(centered, prior0, 48, 5, config);
  const SvgdResult b = run_svgd(shifted, prior_c, 48, 5, config);
  const RowMatrix moved = b.ensemble.particles().rowwise() - c.transpose();
  EXPECT_LT((moved - a.ensemble.particles()).cwiseAbs().maxCoeff(), 0.05);
}

TEST(RunSvgd, RecordAndStoppingRule) {
  const GaussianLikelihood like(Vector::Zero(3), 1.0);
  const auto prior = GaussianPrior::isotropic(3);
  SvgdConfig config;
  config.max_iterations = 500;
  config.tolerance = 1e-2;
  const SvgdResult r = run_svgd(like, prior, 32, 2, config);
  ASSERT_GT(r.record.iteration_count(), 0);
  for (Index i = 0; i < r.record.iteration_count(); ++i) {
    const IterationRecord& it = r.record.iterations[static_cast<std::size_t>(i)];
    EXPECT_EQ(it.iteration, i);
    EXPECT_GE(it.mean_step_norm, 0.0);
    EXPECT_GT(it.bandwidth, 0.0);
    // Only the final record may fall below the tolerance.
    if (i + 1 < r.record.iteration_count()) EXPECT_GT(it.mean_step_norm, config.tolerance);
  }
  EXPECT_EQ(r.record.converged, r.record.iterations.back().mean_step_norm <= config.tolerance);
  EXPECT_TRUE(r.record.converged);
  const PhaseTimings& t = r.record.timings;
  EXPECT_LE(t.gradient + t.kernel + t.update, 1.05 * t.total);
}

TEST(RunSvgd, WorkerCountIndependence) {
  const GaussianLikelihood like(Vector::Ones(4), 0.3);
  const auto prior = GaussianPrior::from_precision(Vector::Zero(4), laplacian_precision(4));
  SvgdConfig config;
  config.max_iterations = 20;
  WorkerPool pool(4);
  const SvgdResult serial = run_svgd(like, prior, 16, 9, config);
  const SvgdResult parallel = run_svgd(like, prior, 16, 9, config, &pool);
  EXPECT_EQ(serial.ensemble.particles(), parallel.ensemble.particles());
}

TEST(RunSvgd, DivergenceIsANumericalError) {
  const GaussianLikelihood like(Vector::Zero(2), 1e-3);
  SvgdConfig config;
  config.step.rule = StepRule::kFixed;
  config.step.fixed_step = 1e300;
  config.max_iterations = 5;
  EXPECT_THROW(run_svgd(like, GaussianPrior::isotropic(2), 8, 1, config), NumericalError);
}

}  // namespace
}  // namespace psvgd
