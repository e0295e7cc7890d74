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
#include <memory>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psvgd/ensemble.hpp"
#include "psvgd/models/linear_gaussian.hpp"
#include "psvgd/parallel.hpp"
#include "psvgd/projected.hpp"
#include "psvgd/svgd.hpp"

namespace psvgd {
namespace {

ProjectionBasis basis_from(const Matrix& psi) {
  ProjectionBasis b;
  b.psi = psi;
  b.eigenvalues = Vector::Ones(psi.cols());
  b.spectrum = Vector::Ones(psi.cols());
  return b;
}

struct RandomLinear {
  std::unique_ptr<LinearGaussianModel> model;
  Matrix precision;
  Vector mean;
};

RandomLinear random_linear(Engine& engine, Index d, Index obs) {
  RandomLinear out;
  const Matrix cov = testing::random_spd(engine, d);
  out.precision = cov.inverse();
  out.mean = standard_normal_vector(engine, d);
  auto prior = std::make_shared<const GaussianPrior>(GaussianPrior::from_covariance(out.mean, cov));
  out.model = std::make_unique<LinearGaussianModel>(testing::random_gaussian(engine, obs, d), 0.3,
                                                    standard_normal_vector(engine, obs), prior);
  return out;
}

TEST(CoefficientGrad, FullRankIdentityIsFullGradient) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const Index d = model.dim();
  Engine engine(1);
  const Vector x = standard_normal_vector(engine, d);
  const Vector g = coefficient_grad_log_posterior(model, *model.prior(),
                                                  basis_from(Matrix::Identity(d, d)), x,
                                                  Vector::Zero(d));
  const Vector full = model.grad_log_likelihood(x) + model.prior()->grad_log_density(x);
  EXPECT_LT(testing::rel_diff(g, full), 1e-14);
}

TEST(CoefficientGrad, FlatModelStandardPriorIsMinusW) {
  Engine engine(2);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, 8, 3));
  const Vector w = standard_normal_vector(engine, 3);
  const Vector g = coefficient_grad_log_posterior(FlatModel(8), GaussianPrior::isotropic(8), basis,
                                                  w, Vector::Zero(8));
  EXPECT_LT((g + w).norm(), 1e-13);
}

TEST(CoefficientGrad, MatchesFiniteDifferencesInCoefficientSpace) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const Index d = model.dim();
  Engine engine(3);
  for (int t = 0; t < 10; ++t) {
    const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, d, 4));
    const Vector x = model.prior()->sample(engine);
    const Projection p = project(basis, x);
    auto log_post = [&](const Vector& w) {
      const Vector z = basis.psi * w + p.complement;
      return model.log_likelihood(z) + model.prior()->log_density(z);
    };
    const Vector fd = testing::fd_gradient(log_post, p.coeffs);
    const Vector g =
        coefficient_grad_log_posterior(model, *model.prior(), basis, p.coeffs, p.complement);
    EXPECT_LT(testing::rel_diff(g, fd), 1e-5);
  }
}

TEST(CoefficientGrad, ReducedPosteriorScoreOracle) {
  // With x⊥ = 0 the coefficient posterior of a linear-Gaussian problem has
  // score (AΨ)ᵀ(y − AΨw)/σ² − ΨᵀQ(Ψw − m); evaluated here in reduced form.
  Engine engine(4);
  for (int t = 0; t < 50; ++t) {
    const Index d = 2 + t % 49;
    const Index r = 1 + t % std::min<Index>(10, d);
    const RandomLinear lin = random_linear(engine, d, 1 + t % 7);
    const LinearGaussianModel& m = *lin.model;
    const Matrix psi = testing::random_orthonormal(engine, d, r);
    const Vector w = standard_normal_vector(engine, r);
    const Matrix a_psi = m.forward() * psi;
    const Vector oracle = a_psi.transpose() * (m.data() - a_psi * w) / (m.noise_std() * m.noise_std()) -
                          psi.transpose() * (lin.precision * (psi * w - lin.mean));
    const Vector g =
        coefficient_grad_log_posterior(m, *m.prior(), basis_from(psi), w, Vector::Zero(d));
    EXPECT_LT((g - oracle).norm(), 1e-10 * oracle.norm()) << "instance " << t;
  }
}

TEST(CoefficientKernel, MatchesFullSpaceKernel) {
  Engine engine(5);
  for (int t = 0; t < 20; ++t) {
    const Matrix psi = testing::random_orthonormal(engine, 15, 4);
    const Vector w = standard_normal_vector(engine, 4), v = standard_normal_vector(engine, 4);
    const double h = 0.5 + t;
    EXPECT_NEAR(kernel_eval(w, v, h), kernel_eval(psi * w, psi * v, h), 1e-12);
  }
}

TEST(PsvgdDirection, SmallCasesByHand) {
  RowMatrix w(1, 2), g(1, 2);
  w << 0.5, 1.0;
  g << -1.0, 2.0;
  EXPECT_EQ(psvgd_direction(w, g, KernelConfig{}).direction, g);

  // r = 1, N = 2, median bandwidth h = (Δw)²/ln 2.
  RowMatrix w2(2, 1), g2(2, 1);
  w2 << 0.2, 1.1;
  g2 << 0.4, -0.3;
  const double h = 0.81 / std::log(2.0);
  const double k = std::exp(-0.81 / h);
  const double phi0 = 0.5 * (0.4 + k * -0.3 + (2.0 / h) * k * (0.2 - 1.1));
  const double phi1 = 0.5 * (k * 0.4 - 0.3 + (2.0 / h) * k * (1.1 - 0.2));
  const SteinDirection d = psvgd_direction(w2, g2, KernelConfig{});
  EXPECT_NEAR(d.bandwidth, h, 1e-14);
  EXPECT_NEAR(d.direction(0, 0), phi0, 1e-14);
  EXPECT_NEAR(d.direction(1, 0), phi1, 1e-14);
}

TEST(PsvgdDirection, ZeroWeightsReduceToEuclidean) {
  Engine engine(6);
  const RowMatrix w = testing::random_gaussian(engine, 10, 3);
  const RowMatrix g = testing::random_gaussian(engine, 10, 3);
  KernelConfig weighted;
  weighted.metric = KernelMetric::eigen_weighted(Vector::Zero(3));
  EXPECT_EQ(psvgd_direction(w, g, weighted).direction, psvgd_direction(w, g, {}).direction);
}

TEST(CoefficientEnsemble, RoundTripAndLinearity) {
  Engine engine(7);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, 9, 3));
  const ParticleEnsemble particles(testing::random_gaussian(engine, 6, 9));
  const CoefficientEnsemble ce(basis, particles);
  EXPECT_LT((reconstruct_ensemble(ce).particles() - particles.particles()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_EQ(ce.reconstruct(RowMatrix::Zero(6, 3)), ce.complements());

  const RowMatrix delta = testing::random_gaussian(engine, 6, 3);
  const RowMatrix moved = ce.reconstruct(ce.coeffs() + delta);
  const RowMatrix expected = reconstruct_ensemble(ce).particles() + delta * basis.psi.transpose();
  EXPECT_LT((moved - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ce.complements() * basis.psi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CoefficientEnsemble, RejectsComplementInsideSubspace) {
  Engine engine(8);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, 5, 2));
  RowMatrix complements(1, 5);
  complements.row(0) = basis.psi.col(0).transpose();
  EXPECT_THROW(CoefficientEnsemble(basis, RowMatrix::Zero(1, 2), complements), NumericalError);
}

TEST(PsvgdInner, ZeroIterationsIsANoOp) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  Engine engine(9);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, model.dim(), 3));
  const CoefficientEnsemble ce(basis, sample_prior(*model.prior(), 8, 1));
  PsvgdInnerConfig config;
  config.max_iterations = 0;
  const PsvgdInnerResult r = run_psvgd_inner(ce, model, *model.prior(), config);
  EXPECT_EQ(r.ensemble.coeffs(), ce.coeffs());
  EXPECT_EQ(r.record.iteration_count(), 0);
}

TEST(PsvgdInner, ComplementsAreBitwiseConserved) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const ParticleEnsemble start = sample_prior(*model.prior(), 32, 3);
  const ProjectionBasis basis =
      build_basis(assemble_gradient_stack(model, start), *model.prior(), 1e-2, model.dim());
  const CoefficientEnsemble ce(basis, start);
  PsvgdInnerConfig config;
  config.max_iterations = 15;
  const PsvgdInnerResult r = run_psvgd_inner(ce, model, *model.prior(), config);
  EXPECT_EQ(r.ensemble.complements(), ce.complements());
  EXPECT_NE(r.ensemble.coeffs(), ce.coeffs());
}

// Orthonormal basis, isotropic prior: the coefficient target is N(0, 1).
TEST(PsvgdInner, FlatModelCoefficientsStayOnPrior) {
  const auto prior = GaussianPrior::isotropic(6);
  Engine engine(10);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, 6, 1));
  const CoefficientEnsemble ce(basis, sample_prior(prior, 128, 4));
  PsvgdInnerConfig config;
  config.max_iterations = 100;
  config.tolerance = 0.0;
  const PsvgdInnerResult r = run_psvgd_inner(ce, FlatModel(6), prior, config);
  const ParticleEnsemble after(r.ensemble.coeffs());
  EXPECT_NEAR(after.sample_mean()[0], 0.0, 0.05);
  EXPECT_GT(after.sample_variance()[0], 0.9);
  EXPECT_LT(after.sample_variance()[0], 1.05);
}

TEST(PsvgdInner, LeadingCoefficientVarianceMatchesPosterior) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const ParticleEnsemble start = sample_prior(*model.prior(), 128, 5);
  const ProjectionBasis basis =
      build_basis(assemble_gradient_stack(model, start), *model.prior(), 1e-2, model.dim());
  // Euclidean kernel mixes faster along ψ₁; the weighted one needs thousands of
  // iterations to reach the same place. Converged SVGD runs a little narrow.
  PsvgdInnerConfig config;
  config.max_iterations = 1000;
  config.tolerance = 0.0;
  config.eigen_weighted_metric = false;
  const PsvgdInnerResult r =
      run_psvgd_inner(CoefficientEnsemble(basis, start), model, *model.prior(), config);
  const Vector psi1 = basis.psi.col(0);
  const double analytic = psi1.dot(model.posterior_covariance() * psi1);
  const double ratio = ParticleEnsemble(r.ensemble.coeffs()).sample_variance()[0] / analytic;
  EXPECT_GT(ratio, 0.75);
  EXPECT_LT(ratio, 1.1);
}

TEST(PsvgdInner, FullRankMatchesOneSvgdIteration) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const Index d = model.dim();
  const ParticleEnsemble start = sample_prior(*model.prior(), 24, 6);
  Engine engine(11);
  const ProjectionBasis basis = basis_from(testing::random_orthonormal(engine, d, d));

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
        run_psvgd_inner(CoefficientEnsemble(basis, start), model, *model.prior(), inner);
    const RowMatrix x = reconstruct_ensemble(projected.ensemble).particles();
    EXPECT_LT((x - reference.ensemble.particles()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(projected.record.iterations[0].bandwidth, reference.record.iterations[0].bandwidth,
                1e-10 * reference.record.iterations[0].bandwidth);
  }
}

TEST(AdaptivePsvgd, SingleOuterStepIsOneInnerRun) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  const ParticleEnsemble start = sample_prior(*model.prior(), 32, 7);
  AdaptivePsvgdConfig config;
  config.outer_iterations = 1;
  config.inner_iterations = 12;
  const AdaptivePsvgdResult adaptive = run_adaptive_psvgd(model, *model.prior(), start, config);

  const ProjectionBasis basis =
      build_basis(assemble_gradient_stack(model, start), *model.prior(), config.rank_threshold,
                  std::min<Index>(start.count(), model.dim()));
  PsvgdInnerConfig inner;
  inner.max_iterations = 12;
  const PsvgdInnerResult manual =
      run_psvgd_inner(CoefficientEnsemble(basis, start), model, *model.prior(), inner);
  EXPECT_EQ(adaptive.ensemble.particles(), reconstruct_ensemble(manual.ensemble).particles());
  ASSERT_EQ(adaptive.record.adaptations.size(), 1u);
  EXPECT_EQ(adaptive.record.adaptations[0].rank, basis.rank());
}

TEST(AdaptivePsvgd, LinearRankStabilizes) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  AdaptivePsvgdConfig config;
  config.outer_iterations = 8;
  config.x_tolerance = 0.0;
  config.eigen_weighted_metric = false;
  const AdaptivePsvgdResult r = run_adaptive_psvgd(model, *model.prior(), 64, 8, config);
  const auto& adapt = r.record.adaptations;
  ASSERT_GE(adapt.size(), 4u);
  Index lo = adapt[2].rank, hi = adapt[2].rank;
  for (std::size_t i = 2; i < adapt.size(); ++i) {
    lo = std::min(lo, adapt[i].rank);
    hi = std::max(hi, adapt[i].rank);
  }
  EXPECT_LE(hi - lo, 1);
}

TEST(AdaptivePsvgd, RecordInvariantsAndWorkerIndependence) {
  const LinearGaussianModel model = linear_build(LinearModelSpec{});
  AdaptivePsvgdConfig config;
  config.outer_iterations = 4;
  config.inner_iterations = 5;
  WorkerPool pool(4);
  const AdaptivePsvgdResult serial = run_adaptive_psvgd(model, *model.prior(), 32, 9, config);
  const AdaptivePsvgdResult parallel =
      run_adaptive_psvgd(model, *model.prior(), 32, 9, config, &pool);
  EXPECT_EQ(serial.ensemble.particles(), parallel.ensemble.particles());

  const RunRecord& rec = serial.record;
  Index expected = 0;
  for (const AdaptationRecord& a : rec.adaptations) {
    EXPECT_EQ(a.first_iteration, expected);
    for (Index i = 1; i < a.spectrum.size(); ++i) EXPECT_GE(a.spectrum[i - 1], a.spectrum[i]);
    EXPECT_GE(a.spectrum.size(), a.rank);
    for (const IterationRecord& it : rec.iterations) {
      if (it.outer == a.outer) ++expected;
    }
  }
  for (Index i = 1; i < rec.iteration_count(); ++i) {
    EXPECT_LT(rec.iterations[static_cast<std::size_t>(i - 1)].iteration,
              rec.iterations[static_cast<std::size_t>(i)].iteration);
  }
}

TEST(AdaptivePsvgd, ConfigValidation) {
  AdaptivePsvgdConfig config;
  config.outer_iterations = 0;
  EXPECT_THROW(config.validate(), ConfigError);
  config.outer_iterations = 1;
  config.rank_threshold = 0.0;
  EXPECT_THROW(config.validate(), ConfigError);
}

}  // namespace
}  // namespace psvgd
