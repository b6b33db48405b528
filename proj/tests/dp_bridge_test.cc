// Copyright 2026 The imitation_workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "imitation/dp/dp_bridge.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "imitation/core/rng.h"
#include "imitation/learners/ols.h"
#include "imitation/privacy/samplers.h"
#include "test_util.h"

namespace imitation {
namespace {

using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

DataMatrix UniformRows(int n, int p, double bound, std::uint64_t seed) {
  Rng rng(seed, "rows", 0);
  return (*FeatureDistribution::Uniform(p, bound)).Sample(rng, n);
}

LabelVector LinearLabels(const DataMatrix& x, const Eigen::VectorXd& beta,
                         double noise_sd, std::uint64_t seed) {
  Rng rng(seed, "noise", 0);
  Eigen::VectorXd y = x.values() * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_sd * rng.Normal();
  return LabelVector::Regression(std::move(y));
}

Eigen::VectorXd CleanOls(const DataMatrix& x, const LabelVector& y) {
  return (*FitOls(x, y)).coefficients();
}

double NaiveError(const PrivatizedData& release, const LabelVector& y,
                  const Eigen::VectorXd& reference) {
  return ((*FitOls(*release.x_tilde, y)).coefficients() - reference).norm();
}

TEST(LaplaceParamsTest, VarianceMatchesClosedFormExactly) {
  for (double b : {0.25, 1.0, 3.0}) {
    for (double alpha : {0.1, 1.0, 2.0, 7.5}) {
      ASSERT_OK_AND_ASSIGN(LaplaceParams params,
                           LaplaceParams::Create(b, alpha));
      EXPECT_EQ(params.variance, 8 * b * b / (alpha * alpha));
      EXPECT_EQ(params.scale, 2 * b / alpha);
    }
  }
}

TEST(LaplaceParamsTest, UnitBoundAtAlphaTwo) {
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 2.0));
  EXPECT_EQ(params.scale, 1.0);
  EXPECT_EQ(params.variance, 2.0);
}

TEST(LaplaceParamsTest, RejectsNonPositiveInputs) {
  EXPECT_FALSE(LaplaceParams::Create(0.0, 1.0).ok());
  EXPECT_FALSE(LaplaceParams::Create(1.0, 0.0).ok());
  EXPECT_FALSE(LaplaceParams::Create(-1.0, 1.0).ok());
}

TEST(LaplaceMechanismTest, InfiniteAlphaReleasesExactData) {
  const DataMatrix x = UniformRows(100, 3, 1.0, 1);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, kInf));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release, LaplaceMechanism(x, params, 5));
  EXPECT_EQ(release.x_tilde->values(), x.values());
}

TEST(LaplaceMechanismTest, EmpiricalVarianceOfMillionNoises) {
  ASSERT_OK_AND_ASSIGN(DataMatrix zeros,
                       DataMatrix::Create(RowMatrix::Zero(1000, 1000)));
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 1.0));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release,
                       LaplaceMechanism(zeros, params, 17));
  const RowMatrix& noise = release.x_tilde->values();
  const double mean = noise.mean();
  const double var = (noise.array() - mean).square().sum() / (noise.size() - 1);
  EXPECT_GE(var, 7.6);
  EXPECT_LE(var, 8.4);
}

TEST(LaplaceMechanismTest, ReproducibleUnderSeed) {
  const DataMatrix x = UniformRows(50, 2, 1.0, 2);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 1.0));
  ASSERT_OK_AND_ASSIGN(PrivatizedData a, LaplaceMechanism(x, params, 9));
  ASSERT_OK_AND_ASSIGN(PrivatizedData b, LaplaceMechanism(x, params, 9));
  ASSERT_OK_AND_ASSIGN(PrivatizedData c, LaplaceMechanism(x, params, 10));
  EXPECT_EQ(a.x_tilde->values(), b.x_tilde->values());
  EXPECT_NE(a.x_tilde->values(), c.x_tilde->values());
}

TEST(LaplaceMechanismTest, BoundViolationListsEntries) {
  RowMatrix values = RowMatrix::Zero(3, 2);
  values(0, 1) = 2.0;
  values(2, 0) = -1.5;
  ASSERT_OK_AND_ASSIGN(DataMatrix x, DataMatrix::Create(values));
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 1.0));
  auto release = LaplaceMechanism(x, params, 1);
  ASSERT_FALSE(release.ok());
  EXPECT_THAT(release.status().message(), HasSubstr("2 entries"));
  EXPECT_THAT(release.status().message(), HasSubstr("(0,1)"));
  EXPECT_THAT(release.status().message(), HasSubstr("(2,0)"));
}

TEST(BiasCorrectedFitTest, ZeroNoiseEqualsOrdinaryLeastSquares) {
  const DataMatrix x = UniformRows(300, 3, 1.0, 3);
  const LabelVector y = LinearLabels(x, Eigen::Vector3d(1, -2, 0.5), 0.1, 3);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, kInf));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release, LaplaceMechanism(x, params, 3));
  for (bool intercept : {false, true}) {
    ASSERT_OK_AND_ASSIGN(OlsModel corrected,
                         BiasCorrectedFit(release, y, intercept));
    ASSERT_OK_AND_ASSIGN(OlsModel ols, FitOls(x, y, {.intercept = intercept}));
    EXPECT_LT((corrected.coefficients() - ols.coefficients()).norm(), 1e-10);
    EXPECT_NEAR(corrected.intercept(), ols.intercept(), 1e-10);
  }
}

TEST(BiasCorrectedFitTest, CloseToCleanOlsAtLargeN) {
  const DataMatrix x = UniformRows(100000, 2, 1.0, 4);
  const LabelVector y = LinearLabels(x, Eigen::Vector2d(0.1, -0.1), 0.1, 4);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 1.0));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release, LaplaceMechanism(x, params, 4));
  ASSERT_OK_AND_ASSIGN(OlsModel corrected, BiasCorrectedFit(release, y));
  EXPECT_LT((corrected.coefficients() - CleanOls(x, y)).norm(), 0.05);
}

TEST(BiasCorrectedFitTest, BeatsNaiveFitInPairedTrials) {
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 4.0));
  int wins = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const DataMatrix x = UniformRows(10000, 2, 1.0, 100 + trial);
    const LabelVector y = LinearLabels(x, Eigen::Vector2d(1, -1), 0.1, trial);
    ASSERT_OK_AND_ASSIGN(PrivatizedData release,
                         LaplaceMechanism(x, params, 200 + trial));
    ASSERT_OK_AND_ASSIGN(OlsModel corrected, BiasCorrectedFit(release, y));
    const Eigen::VectorXd clean = CleanOls(x, y);
    if ((corrected.coefficients() - clean).norm() <
        NaiveError(release, y, clean)) {
      ++wins;
    }
  }
  EXPECT_GE(wins, 9);
}

TEST(BiasCorrectedFitTest, ErrorShrinksAtRootNRate) {
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 4.0));
  const std::vector<int> grid = {1000, 10000, 100000};
  std::vector<double> log_n, log_err;
  for (int n : grid) {
    double err = 0.0;
    constexpr int kReps = 10;
    for (int rep = 0; rep < kReps; ++rep) {
      const DataMatrix x = UniformRows(n, 2, 1.0, 1000 * rep + 7);
      const LabelVector y = LinearLabels(x, Eigen::Vector2d(1, -1), 0.1, rep);
      ASSERT_OK_AND_ASSIGN(PrivatizedData release,
                           LaplaceMechanism(x, params, 31 * rep + n));
      ASSERT_OK_AND_ASSIGN(OlsModel corrected, BiasCorrectedFit(release, y));
      err += (corrected.coefficients() - CleanOls(x, y)).norm() / kReps;
    }
    log_n.push_back(std::log(n));
    log_err.push_back(std::log(err));
  }
  const double mx = (log_n[0] + log_n[1] + log_n[2]) / 3;
  const double my = (log_err[0] + log_err[1] + log_err[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_n[i] - mx) * (log_err[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, -0.7);
  EXPECT_LE(slope, -0.3);
}

TEST(BiasCorrectedFitTest, NotIdentifiableAtTinyN) {
  const DataMatrix x = UniformRows(5, 3, 1.0, 5);
  const LabelVector y = LinearLabels(x, Eigen::Vector3d(1, 1, 1), 0.1, 5);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 0.1));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release, LaplaceMechanism(x, params, 5));
  auto fit = BiasCorrectedFit(release, y);
  ASSERT_FALSE(fit.ok());
  EXPECT_EQ(fit.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(fit.status().message(), HasSubstr("more rows"));
}

TEST(BiasCorrectedFitTest, RejectsLabelLengthMismatch) {
  const DataMatrix x = UniformRows(10, 2, 1.0, 6);
  ASSERT_OK_AND_ASSIGN(LaplaceParams params, LaplaceParams::Create(1.0, 1.0));
  ASSERT_OK_AND_ASSIGN(PrivatizedData release, LaplaceMechanism(x, params, 6));
  EXPECT_FALSE(
      BiasCorrectedFit(release, LabelVector::Regression(Eigen::VectorXd(9)))
          .ok());
}

// Affine tasks on unit-uniform features, bounded by sqrt(3).
RhoConfig AffineUniformConfig(int p) {
  return RhoConfig{
      .tasks = {.marginal = FeatureDistribution::UnitUniform(p),
                .family = {.coefficients = TaskFamily::Coefficients::kUniform,
                           .scale = 1.0 / 3,
                           .intercept_min = 2,
                           .intercept_max = 3,
                           .noise_sd = 0.1}},
      .test = FeatureDistribution::UnitUniform(p),
      .loss = {LossKind::kScaledL2},
      .n_tasks = 20,
      .n_test = 500};
}

DpBreachConfig BreachConfig(double alpha, std::vector<int> grid) {
  return DpBreachConfig{.params = *LaplaceParams::Create(std::sqrt(3.0), alpha),
                        .n_grid = std::move(grid),
                        .rho = AffineUniformConfig(3),
                        .intercept = true};
}

TEST(DpBreachExperimentTest, RhoDecreasesWithN) {
  ASSERT_OK_AND_ASSIGN(
      std::vector<DpBreachPoint> curve,
      DpBreachExperiment(BreachConfig(4.0, {1000, 10000, 100000}), 11));
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_GT(curve[0].estimate.rho_hat, curve[1].estimate.rho_hat);
  EXPECT_GT(curve[1].estimate.rho_hat, curve[2].estimate.rho_hat);
  EXPECT_EQ(curve[2].n, 100000);
}

TEST(DpBreachExperimentTest, MoreNoiseMeansLargerRho) {
  ASSERT_OK_AND_ASSIGN(std::vector<DpBreachPoint> noisy,
                       DpBreachExperiment(BreachConfig(2.0, {10000}), 12));
  ASSERT_OK_AND_ASSIGN(std::vector<DpBreachPoint> quiet,
                       DpBreachExperiment(BreachConfig(8.0, {10000}), 12));
  EXPECT_GT(noisy[0].estimate.rho_hat, quiet[0].estimate.rho_hat);
}

TEST(DpBreachExperimentTest, ExactReleaseControlIsZero) {
  ASSERT_OK_AND_ASSIGN(std::vector<DpBreachPoint> curve,
                       DpBreachExperiment(BreachConfig(kInf, {10000}), 13));
  EXPECT_LE(curve[0].estimate.rho_hat, 1e-6);
}

TEST(DpBreachExperimentTest, RejectsUnboundedMarginal) {
  DpBreachConfig config = BreachConfig(4.0, {100});
  config.params = *LaplaceParams::Create(1.0, 4.0);
  auto curve = DpBreachExperiment(config, 14);
  ASSERT_FALSE(curve.ok());
  EXPECT_THAT(curve.status().message(), HasSubstr("outside"));
}

TEST(DpBreachExperimentTest, RejectsEmptyGrid) {
  EXPECT_FALSE(DpBreachExperiment(BreachConfig(4.0, {}), 1).ok());
}

// Equal-weight linear tasks on [-1, 1]^4 without intercept.
RhoConfig EqualWeightConfig() {
  return RhoConfig{
      .tasks = {.marginal = *FeatureDistribution::Uniform(4, 1.0),
                .family = {.coefficients = TaskFamily::Coefficients::kEqual,
                           .scale = 1.0,
                           .noise_sd = 0.1}},
      .test = *FeatureDistribution::Uniform(4, 1.0),
      .loss = {LossKind::kScaledL2},
      .n_tasks = 20,
      .n_test = 2000};
}

// Population capped scaled-L2 loss of x -> x_1 against x -> sum_j x_j on
// [-1, 1]^4, by midpoint quadrature. The fitted single-column slope converges
// to the common weight since the columns are independent and centered.
double PartialReleaseOracle() {
  constexpr int kGrid = 48;
  const double h = 2.0 / kGrid;
  double total = 0.0;
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      for (int c = 0; c < kGrid; ++c) {
        for (int d = 0; d < kGrid; ++d) {
          const double x1 = -1 + (a + 0.5) * h;
          const double rest = (-1 + (b + 0.5) * h) + (-1 + (c + 0.5) * h) +
                              (-1 + (d + 0.5) * h);
          const double full = x1 + rest;
          total += std::min(rest * rest / (full * full), 1.0);
        }
      }
    }
  }
  return total / std::pow(kGrid, 4);
}

TEST(PartialReleaseTest, OneOfFourColumnsKeepsRhoHigh) {
  const double oracle = PartialReleaseOracle();
  ASSERT_GE(oracle, 0.3);
  ASSERT_OK_AND_ASSIGN(Module bob,
                       Module::Create("bob", LearnerSpec::Ols(),
                                      UniformRows(10000, 4, 1.0, 21)));
  ASSERT_OK_AND_ASSIGN(
      PartialReleaseResult result,
      PartialReleaseExperiment(bob, {0}, EqualWeightConfig(), 21));
  EXPECT_NEAR(result.partial.capped_rho_hat, oracle, 0.03);
  EXPECT_GE(result.partial.capped_rho_hat, 0.3);
  EXPECT_GE(result.partial.rho_hat, 0.3);
  EXPECT_EQ(result.none.rho_hat, 1.0);
  EXPECT_EQ(result.none.std_error, 0.0);
}

TEST(PartialReleaseTest, FullReleaseReproducesModule) {
  ASSERT_OK_AND_ASSIGN(
      Module bob,
      Module::Create("bob", LearnerSpec::Ols(), UniformRows(2000, 4, 1.0, 22)));
  ASSERT_OK_AND_ASSIGN(std::shared_ptr<const Imitation> full,
                       ReleasedColumnsImitation(bob, {3, 1, 0, 2}));
  ASSERT_OK_AND_ASSIGN(PrivacyEstimate est,
                       EstimateRho(bob, *full, EqualWeightConfig(), 22));
  EXPECT_LE(est.rho_hat, 1e-12);
}

TEST(PartialReleaseTest, EmptyReleaseIsTrivialImitation) {
  ASSERT_OK_AND_ASSIGN(
      Module bob,
      Module::Create("bob", LearnerSpec::Ols(), UniformRows(2000, 4, 1.0, 23)));
  ASSERT_OK_AND_ASSIGN(std::shared_ptr<const Imitation> none,
                       ReleasedColumnsImitation(bob, {}));
  ASSERT_OK_AND_ASSIGN(PrivacyEstimate est,
                       EstimateRho(bob, *none, EqualWeightConfig(), 23));
  EXPECT_EQ(est.rho_hat, 1.0);
}

TEST(PartialReleaseTest, ExperimentRejectsEmptyOrFullSets) {
  ASSERT_OK_AND_ASSIGN(
      Module bob,
      Module::Create("bob", LearnerSpec::Ols(), UniformRows(100, 4, 1.0, 24)));
  EXPECT_FALSE(PartialReleaseExperiment(bob, {}, EqualWeightConfig(), 1).ok());
  EXPECT_FALSE(
      PartialReleaseExperiment(bob, {0, 1, 2, 3}, EqualWeightConfig(), 1).ok());
  EXPECT_FALSE(ReleasedColumnsImitation(bob, {4}).ok());
  EXPECT_FALSE(ReleasedColumnsImitation(bob, {1, 1}).ok());
}

}  // namespace
}  // namespace imitation
