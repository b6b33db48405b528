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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "imitation/attacks/api.h"
#include "imitation/attacks/assisted_attacks.h"
#include "imitation/attacks/mlaas.h"
#include "imitation/learners/regression_tree.h"
#include "imitation/privacy/privacy_metric.h"
#include "imitation/privacy/samplers.h"
#include "test_util.h"

namespace imitation {
namespace {

using testing::GaussianData;
using testing::GaussianMatrix;
using testing::GaussianVector;
using testing::GramSchmidtBasis;
using ::testing::HasSubstr;
using testing::MaxPrincipalAngleSine;

std::span<const double> AsSpan(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

std::shared_ptr<Target> LogisticTarget(Eigen::VectorXd w, double b) {
  return MakePretrainedTarget(
      "logistic", PredictionFn(std::make_shared<LogisticModel>(std::move(w), b),
                               Provenance{.learner = "logistic"}));
}

std::shared_ptr<Target> ClassifierTarget(Eigen::VectorXd w, double c) {
  return MakePretrainedTarget(
      "classifier",
      PredictionFn(std::make_shared<LinearClassifier>(
                       *LinearClassifier::Create(std::move(w), c)),
                   Provenance{.learner = "linear_classifier"}));
}

std::shared_ptr<Target> TreeTarget(RegressionTree tree) {
  return MakePretrainedTarget(
      "tree", PredictionFn(std::make_shared<RegressionTree>(std::move(tree)),
                           Provenance{.learner = "tree"}));
}

std::shared_ptr<Target> OlsTarget(DataMatrix x, bool intercept,
                                  double oracle_sd = 0.0,
                                  LearnerSpec spec = LearnerSpec::Ols()) {
  if (intercept) spec = LearnerSpec::Ols(true);
  return MakeTarget("bob", *Module::Create("bob", spec, std::move(x)),
                    oracle_sd);
}

RegressionTree Stump(double threshold) {
  std::vector<TreeNode> nodes(3);
  nodes[0] = {.is_leaf = false,
              .feature = 0,
              .threshold = threshold,
              .left = 1,
              .right = 2};
  nodes[1] = {.value = -1.0, .leaf_id = "TL"};
  nodes[2] = {.value = 1.0, .leaf_id = "TR"};
  return RegressionTree(std::move(nodes), 1, TreeOptions{});
}

RegressionTree FittedTree(std::uint64_t seed, int depth) {
  Rng rng(seed, "tree-data", 0);
  RowMatrix x(200, 2);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = rng.Uniform(-5, 5);
    x(i, 1) = rng.Uniform(-5, 5);
    y[i] = std::sin(x(i, 0)) + 0.3 * x(i, 1) + 0.1 * rng.Normal();
  }
  return *FitTree(*DataMatrix::Create(x), LabelVector::Regression(y),
                  {.max_depth = depth});
}

double AngleBetween(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  const double s = (a / a.norm() - c * b / b.norm()).norm();
  return std::atan2(s, c);
}

Eigen::VectorXd Concat(const LinearClassifier& c) {
  Eigen::VectorXd v(c.weights().size() + 1);
  v << c.weights(), c.offset();
  return v;
}

// ---------------------------------------------------------------- channel

TEST(ApiViewTest, CountsQueriesAndEnforcesBudget) {
  ApiView api(LogisticTarget(Eigen::Vector2d(1, 2), 0.0),
              ResponseMode::kProbability, 2);
  EXPECT_OK(api.Predict(Eigen::Vector2d(0, 0)));
  EXPECT_OK(api.Predict(Eigen::Vector2d(1, 0)));
  auto third = api.Predict(Eigen::Vector2d(0, 1));
  EXPECT_TRUE(absl::IsResourceExhausted(third.status()));
  EXPECT_EQ(api.queries_used(), 2);
  EXPECT_EQ(api.log().size(), 2);
}

TEST(ApiViewTest, RejectsModeMismatch) {
  ApiView leaf(LogisticTarget(Eigen::Vector2d(1, 2), 0.0),
               ResponseMode::kLeafId);
  EXPECT_FALSE(leaf.Predict(Eigen::Vector2d(0, 0)).ok());
  ApiView residual(
      OlsTarget(*DataMatrix::FromColumn(Eigen::Vector3d(1, 2, 3)), false),
      ResponseMode::kResidual);
  EXPECT_FALSE(residual.Predict(Eigen::VectorXd::Ones(1)).ok());
  ApiView prob(LogisticTarget(Eigen::Vector2d(1, 2), 0.0),
               ResponseMode::kProbability);
  EXPECT_FALSE(prob.Label(Eigen::Vector3d(1, 2, 3)).ok());
  EXPECT_EQ(leaf.queries_used() + residual.queries_used() + prob.queries_used(),
            0);
}

TEST(ApiViewTest, StageOneResidualIsLabelMinusFit) {
  Rng rng(3);
  DataMatrix x = GaussianData(rng, 20, 2);
  ApiView api(OlsTarget(x, false), ResponseMode::kResidual);
  Eigen::VectorXd y = GaussianVector(rng, 20);
  ASSERT_OK_AND_ASSIGN(LabelResponse r, api.Label(y));
  Eigen::MatrixXd q = GramSchmidtBasis(x.values());
  EXPECT_LT((r.values - (y - q * (q.transpose() * y))).norm(), 1e-10);
  Eigen::Vector2d probe(0.5, -1.0);
  ASSERT_OK_AND_ASSIGN(double stage2, r.endpoint->Evaluate(AsSpan(probe)));
  EXPECT_TRUE(std::isfinite(stage2));
}

TEST(ReplayChannelTest, DivergentQueryIsReported) {
  ApiView api(LogisticTarget(Eigen::Vector2d(1, 2), 0.0),
              ResponseMode::kProbability);
  ASSERT_OK(api.Predict(Eigen::Vector2d(0.25, 0)));
  ReplayChannel replay(api.log());
  auto r = replay.Predict(Eigen::Vector2d(0.25, 1e-300));
  EXPECT_TRUE(absl::IsDataLoss(r.status())) << r.status();
  ReplayChannel again(api.log());
  ASSERT_OK(again.Predict(Eigen::Vector2d(0.25, 0)));
  EXPECT_TRUE(
      absl::IsOutOfRange(again.Predict(Eigen::Vector2d(0, 0)).status()));
}

// ---------------------------------------------------- equation solving

TEST(EquationSolvingTest, ZeroTargetGivesZeros) {
  ApiView api(LogisticTarget(Eigen::VectorXd::Zero(3), 0.0),
              ResponseMode::kProbability);
  ASSERT_OK_AND_ASSIGN(LogisticModel m, EquationSolvingExtract(api, 3, 1));
  EXPECT_EQ(m.weights(), Eigen::VectorXd::Zero(3));
  EXPECT_EQ(m.bias(), 0.0);
}

TEST(EquationSolvingTest, RecoversTwoFeatureTargetWithThreeQueries) {
  ApiView api(LogisticTarget(Eigen::Vector2d(2, -1), 0.5),
              ResponseMode::kProbability);
  ASSERT_OK_AND_ASSIGN(LogisticModel m, EquationSolvingExtract(api, 2, 7));
  EXPECT_NEAR(m.weights()[0], 2.0, 1e-8 * 2);
  EXPECT_NEAR(m.weights()[1], -1.0, 1e-8);
  EXPECT_NEAR(m.bias(), 0.5, 1e-8 * 0.5);
  EXPECT_EQ(api.queries_used(), 3);
}

TEST(EquationSolvingTest, ExactOnRandomTargets) {
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 5;
    Rng rng(trial, "target", 0);
    Eigen::VectorXd w = GaussianVector(rng, p);
    const double b = rng.Normal();
    ApiView api(LogisticTarget(w, b), ResponseMode::kProbability);
    ASSERT_OK_AND_ASSIGN(LogisticModel m,
                         EquationSolvingExtract(api, p, trial));
    Eigen::VectorXd truth(p + 1), got(p + 1);
    truth << w, b;
    got << m.weights(), m.bias();
    EXPECT_LE((got - truth).norm() / truth.norm(), 1e-8) << "trial " << trial;
    EXPECT_EQ(api.queries_used(), p + 1);
  }
}

TEST(EquationSolvingTest, BudgetBelowPPlusOneFails) {
  ApiView api(LogisticTarget(Eigen::Vector3d(1, 2, 3), 0.0),
              ResponseMode::kProbability, 3);
  auto m = EquationSolvingExtract(api, 3);
  EXPECT_TRUE(absl::IsResourceExhausted(m.status()));
  EXPECT_EQ(api.queries_used(), 3);
}

// --------------------------------------------------------- path finding

TEST(PathFindingTest, SingleLeafNeedsOneQuery) {
  std::vector<TreeNode> nodes(1);
  nodes[0] = {.value = 4.0, .leaf_id = kRootLeafId};
  ApiView api(TreeTarget(RegressionTree(nodes, 2, {})), ResponseMode::kLeafId);
  ASSERT_OK_AND_ASSIGN(PathFindingResult r,
                       PathFindingExtract(api, FeatureBox::Cube(2, -1, 1)));
  EXPECT_EQ(api.queries_used(), 1);
  ASSERT_EQ(r.partition->cells().size(), 1u);
  EXPECT_TRUE(r.complete);
  EXPECT_DOUBLE_EQ(r.coverage, 1.0);
}

TEST(PathFindingTest, StumpThresholdWithinResolution) {
  ApiView api(TreeTarget(Stump(8.0)), ResponseMode::kLeafId);
  ASSERT_OK_AND_ASSIGN(PathFindingResult r,
                       PathFindingExtract(api, FeatureBox::Cube(1, 0, 20)));
  EXPECT_TRUE(r.complete);
  ASSERT_EQ(r.partition->leaf_ids().size(), 2u);
  for (const PartitionCell& c : r.partition->cells()) {
    if (c.leaf_id == "TL") EXPECT_NEAR(c.box.upper[0], 8.0, 1e-6);
    if (c.leaf_id == "TR") EXPECT_NEAR(c.box.lower[0], 8.0, 1e-6);
  }
  // One bisection over the half-box [8, 20] or [0, 8] plus endpoint checks,
  // once per side of the threshold.
  const int bisection = static_cast<int>(std::ceil(std::log2(12.0 / 1e-6)));
  EXPECT_LE(api.queries_used(), 2 * (bisection + 3));
}

TEST(PathFindingTest, DepthThreeTreeAgreesOnGridProbes) {
  const RegressionTree tree = FittedTree(11, 3);
  ApiView api(TreeTarget(tree), ResponseMode::kLeafId);
  ASSERT_OK_AND_ASSIGN(PathFindingResult r,
                       PathFindingExtract(api, FeatureBox::Cube(2, -5, 5)));
  EXPECT_TRUE(r.complete);
  EXPECT_NEAR(r.coverage, 1.0, 1e-4);
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double x[2] = {-5 + 10 * (i + 0.5) / 100,
                           -5 + 10 * (j + 0.5) / 100};
      agree += tree.LeafId(x) == r.partition->LeafOf(x) ? 1 : 0;
    }
  }
  EXPECT_EQ(agree, 10000);
}

TEST(PathFindingTest, BudgetExhaustionGivesPartialPartition) {
  ApiView api(TreeTarget(FittedTree(11, 3)), ResponseMode::kLeafId, 40);
  ASSERT_OK_AND_ASSIGN(PathFindingResult r,
                       PathFindingExtract(api, FeatureBox::Cube(2, -5, 5)));
  EXPECT_FALSE(r.complete);
  EXPECT_LT(r.coverage, 1.0);
  EXPECT_EQ(api.queries_used(), 40);
}

// ----------------------------------------------------- boundary extraction

TEST(BoundaryTest, AxisTargetGivesBoundaryPointsOnTheAxis) {
  ApiView api(ClassifierTarget(Eigen::Vector2d(1, 0), 0.0),
              ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(BoundaryResult r,
                       BoundaryExtract(api, 2, {.n_boundary = 6, .seed = 2}));
  for (const Eigen::VectorXd& x : r.boundary_points) {
    EXPECT_LE(std::abs(x[0]), 1e-9);
  }
  EXPECT_LE(AngleBetween(Concat(r.classifier), Eigen::Vector3d(1, 0, 0)), 1e-3);
  EXPECT_GT(r.classifier.weights()[0], 0);
}

TEST(BoundaryTest, ScaledTargetGivesSameDirection) {
  ApiView a(ClassifierTarget(Eigen::Vector2d(1, -2), 0.5),
            ResponseMode::kLabel);
  ApiView b(ClassifierTarget(Eigen::Vector2d(2, -4), 1.0),
            ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(BoundaryResult ra, BoundaryExtract(a, 2, {.seed = 4}));
  ASSERT_OK_AND_ASSIGN(BoundaryResult rb, BoundaryExtract(b, 2, {.seed = 4}));
  EXPECT_EQ(Concat(ra.classifier), Concat(rb.classifier));
}

TEST(BoundaryTest, QueriesPerPointMatchBisectionCount) {
  ApiView api(ClassifierTarget(Eigen::Vector3d(0.3, -1, 2), 0.7),
              ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(BoundaryResult r,
                       BoundaryExtract(api, 3, {.n_boundary = 8, .seed = 5}));
  int total = r.probe_queries;
  for (std::size_t i = 0; i < r.queries_per_point.size(); ++i) {
    const int halvings =
        static_cast<int>(std::ceil(std::log2(r.chord_lengths[i] / 1e-9)));
    EXPECT_EQ(r.queries_per_point[i], 1 + halvings);
    total += r.queries_per_point[i];
  }
  EXPECT_EQ(total, api.queries_used());
}

TEST(BoundaryTest, DisagreementOnUniformProbes) {
  Rng rng(17);
  Eigen::VectorXd w = GaussianVector(rng, 3);
  const double c = rng.Uniform(-2, 2);
  ApiView api(ClassifierTarget(w, c), ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(BoundaryResult r, BoundaryExtract(api, 3, {.seed = 8}));
  const LinearClassifier truth = *LinearClassifier::Create(w, c);
  int disagree = 0;
  Rng probe(18);
  for (int k = 0; k < 100000; ++k) {
    Eigen::Vector3d x(probe.Uniform(-10, 10), probe.Uniform(-10, 10),
                      probe.Uniform(-10, 10));
    disagree += truth.Classify(AsSpan(x)) != r.classifier.Classify(AsSpan(x));
  }
  EXPECT_LE(disagree / 1e5, 1e-3);
}

TEST(BoundaryTest, OneClassTargetFails) {
  ApiView api(ClassifierTarget(Eigen::VectorXd::Ones(1), 100.0),
              ResponseMode::kLabel);
  auto r = BoundaryExtract(api, 1, {.max_probes = 50});
  EXPECT_TRUE(absl::IsNotFound(r.status()));
  EXPECT_THAT(r.status().message(), HasSubstr("one class"));
}

// --------------------------------------------------- adaptive retraining

double ZeroOneRho(const PredictionFn& target, const PredictionFn& model,
                  std::uint64_t seed) {
  auto test = *FeatureDistribution::Uniform(2, 1.0);
  return FunctionRho(target, model, test, LossFn{LossKind::kZeroOne}, 20000,
                     seed)
      ->rho_hat;
}

TEST(AdaptiveRetrainTest, SingleRoundEqualsRandomBaseline) {
  auto target = ClassifierTarget(Eigen::Vector2d(1, 1), 0.2);
  ApiView a(target, ResponseMode::kLabel), b(target, ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(
      AdaptiveResult ra,
      AdaptiveRetrain(a, 2, {.budget = 10, .batch = 10, .seed = 3}));
  ASSERT_OK_AND_ASSIGN(
      AdaptiveResult rb,
      AdaptiveRetrain(
          b, 2, {.budget = 10, .batch = 10, .adaptive = false, .seed = 3}));
  ASSERT_EQ(ra.rounds.size(), 1u);
  EXPECT_EQ(ra.rounds[0].model.impl().ToJson().dump(),
            rb.rounds[0].model.impl().ToJson().dump());
}

TEST(AdaptiveRetrainTest, RejectsBudgetArithmetic) {
  ApiView api(ClassifierTarget(Eigen::Vector2d(1, 1), 0.0),
              ResponseMode::kLabel);
  EXPECT_FALSE(AdaptiveRetrain(api, 2, {.budget = 25, .batch = 10}).ok());
  EXPECT_FALSE(AdaptiveRetrain(api, 2, {.budget = 5, .batch = 10}).ok());
  EXPECT_FALSE(AdaptiveRetrain(api, 2, {.budget = 10, .batch = 0}).ok());
}

TEST(AdaptiveRetrainTest, ErrorFallsAsBudgetGrows) {
  std::vector<double> mean_rho(3, 0.0);
  const int budgets[3] = {20, 80, 320};
  for (int rep = 0; rep < 5; ++rep) {
    Rng rng(rep, "adaptive-target", 0);
    Eigen::VectorXd w = GaussianVector(rng, 2);
    auto target = ClassifierTarget(w, rng.Uniform(-0.3, 0.3));
    for (int k = 0; k < 3; ++k) {
      ApiView api(target, ResponseMode::kLabel);
      ASSERT_OK_AND_ASSIGN(
          AdaptiveResult r,
          AdaptiveRetrain(
              api, 2, {.budget = budgets[k], .batch = 10, .seed = 40u + rep}));
      EXPECT_EQ(r.rounds.back().queries, budgets[k]);
      mean_rho[k] +=
          ZeroOneRho(*target->pretrained, r.rounds.back().model, rep) / 5;
    }
  }
  EXPECT_GT(mean_rho[0], mean_rho[1]);
  EXPECT_GT(mean_rho[1], mean_rho[2]);
  EXPECT_LT(mean_rho[2], 0.01);
}

TEST(AdaptiveRetrainTest, AdaptiveBeatsRandomAtEqualBudget) {
  int wins = 0;
  for (int rep = 0; rep < 10; ++rep) {
    Rng rng(rep, "paired-target", 0);
    Eigen::VectorXd w = GaussianVector(rng, 2);
    auto target = ClassifierTarget(w, rng.Uniform(-0.3, 0.3));
    ApiView a(target, ResponseMode::kLabel), b(target, ResponseMode::kLabel);
    ASSERT_OK_AND_ASSIGN(
        AdaptiveResult ra,
        AdaptiveRetrain(a, 2, {.budget = 100, .batch = 10, .seed = 70u + rep}));
    ASSERT_OK_AND_ASSIGN(AdaptiveResult rb,
                         AdaptiveRetrain(b, 2,
                                         {.budget = 100,
                                          .batch = 10,
                                          .adaptive = false,
                                          .seed = 70u + rep}));
    const double rho_a =
        ZeroOneRho(*target->pretrained, ra.rounds.back().model, rep);
    const double rho_b =
        ZeroOneRho(*target->pretrained, rb.rounds.back().model, rep);
    wins += rho_a <= rho_b ? 1 : 0;
  }
  EXPECT_GE(wins, 8);
}

// ---------------------------------------------------------- column space

TEST(ColumnSpaceTest, RecoversSpanWithPQueries) {
  Rng rng(21);
  DataMatrix x = GaussianData(rng, 50, 3);
  ApiView api(OlsTarget(x, false), ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(SpanBasis span, RecoverColumnSpace(api, 3, 50, 3, 4));
  EXPECT_EQ(span.rank, 3);
  EXPECT_FALSE(span.rank_deficient);
  EXPECT_LE(MaxPrincipalAngleSine(GramSchmidtBasis(x.values()), span.basis),
            1e-8);
  EXPECT_LE(
      (span.basis.transpose() * span.basis - Eigen::MatrixXd::Identity(3, 3))
          .cwiseAbs()
          .maxCoeff(),
      1e-10);
  EXPECT_EQ(api.queries_used(), 3);
}

TEST(ColumnSpaceTest, ComplementRouteWhenFewRows) {
  Rng rng(22);
  DataMatrix x = GaussianData(rng, 5, 3);  // n - p = 2 < p
  ApiView api(OlsTarget(x, false), ResponseMode::kFitted);
  ASSERT_OK_AND_ASSIGN(SpanBasis span, RecoverColumnSpace(api, 2, 5, 3, 4));
  EXPECT_EQ(span.rank, 3);
  EXPECT_LE(MaxPrincipalAngleSine(GramSchmidtBasis(x.values()), span.basis),
            1e-8);
  EXPECT_LE(
      (span.basis.transpose() * span.basis - Eigen::MatrixXd::Identity(3, 3))
          .cwiseAbs()
          .maxCoeff(),
      1e-10);
}

TEST(ColumnSpaceTest, TooFewQueriesIsAnError) {
  Rng rng(23);
  ApiView api(OlsTarget(GaussianData(rng, 50, 3), false),
              ResponseMode::kResidual);
  auto span = RecoverColumnSpace(api, 2, 50, 3);
  EXPECT_FALSE(span.ok());
  EXPECT_THAT(span.status().message(), HasSubstr("min{p, n - p} = 3"));
  EXPECT_EQ(api.queries_used(), 0);
}

TEST(ColumnSpaceTest, LabelsInsideSpanAreFlaggedRankDeficient) {
  Rng rng(24);
  RowMatrix x = GaussianMatrix(rng, 30, 3);
  Eigen::MatrixXd fitted(30, 2);
  fitted.col(0) = x * Eigen::Vector3d(1, 0, 2);
  fitted.col(1) = x * Eigen::Vector3d(0, 1, -1);
  SpanBasis span = SpanFromResponses(fitted, 3);
  EXPECT_EQ(span.rank, 2);
  EXPECT_TRUE(span.rank_deficient);
}

// -------------------------------------------------------------- rotation

TEST(RotationTest, IdentityCoefficientsGiveKExactly) {
  Rng rng(31);
  DataMatrix x_tilde = GaussianData(rng, 10, 2);
  Eigen::Matrix2d q;
  q << 0.6, -0.8, 0.8, 0.6;
  std::vector<RotationQuery> queries = {{Eigen::Vector2d(1, 0), q.col(0)},
                                        {Eigen::Vector2d(0, 1), q.col(1)}};
  ASSERT_OK_AND_ASSIGN(RotationSolution s, SolveRotation(x_tilde, queries));
  EXPECT_EQ(s.q_hat, q);
}

TEST(RotationTest, SingularCoefficientsAndShapeErrors) {
  Rng rng(32);
  DataMatrix x_tilde = GaussianData(rng, 10, 2);
  std::vector<RotationQuery> singular = {
      {Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)},
      {Eigen::Vector2d(2, 2), Eigen::Vector2d(0, 1)}};
  EXPECT_THAT(SolveRotation(x_tilde, singular).status().message(),
              HasSubstr("singular"));
  std::vector<RotationQuery> short_list = {singular[0]};
  EXPECT_FALSE(SolveRotation(x_tilde, short_list).ok());
}

TEST(RotationTest, ReconstructsGaussianFeatures) {
  Rng rng(33);
  const int n = 20000, p = 3;
  DataMatrix x = GaussianData(rng, n, p);
  ApiView api(OlsTarget(x, false, 0.1), ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(RotationAttackResult r,
                       CovarianceRotationAttack(
                           api, n, {.p = p, .intercept = false, .seed = 5}));
  const double error =
      (r.rotation.x_hat.values() - x.values()).norm() / x.values().norm();
  EXPECT_LT(error, 0.05);
  EXPECT_EQ(api.log().Count(QueryKind::kOracle), p);
  EXPECT_EQ(api.queries_used(), 2 * p);
  EXPECT_EQ(
      r.system->information().side_info.count(SideInfoTag::kFeatureCovariance),
      1u);
}

TEST(RotationTest, ImitationErrorShrinksWithRows) {
  const FeatureDistribution features = FeatureDistribution::UnitUniform(3);
  RhoConfig config{
      .tasks = {.marginal = features,
                .family = {.coefficients = TaskFamily::Coefficients::kUniform,
                           .scale = 1.0 / 3,
                           .intercept_min = 2,
                           .intercept_max = 3,
                           .noise_sd = 0.1}},
      .test = features,
      .loss = LossFn{LossKind::kScaledL2},
      .n_tasks = 40,
      .n_test = 1000};
  std::vector<double> rho;
  for (int n : {2000, 20000, 200000}) {
    Rng rng(34, "rows", 0);
    auto target = OlsTarget(features.Sample(rng, n), true, 0.1);
    ApiView api(target, ResponseMode::kResidual);
    ASSERT_OK_AND_ASSIGN(RotationAttackResult r,
                         CovarianceRotationAttack(
                             api, n, {.p = 3, .intercept = true, .seed = 6}));
    ASSERT_OK_AND_ASSIGN(PrivacyEstimate e,
                         EstimateRho(target->module, *r.system, config, 9));
    rho.push_back(e.rho_hat);
  }
  EXPECT_GT(rho[0], rho[1]);
  EXPECT_GT(rho[1], rho[2]);
}

// -------------------------------------------------------- tree structure

std::vector<Eigen::VectorXd> Rows(
    const std::vector<std::vector<double>>& table) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& row : table) {
    out.push_back(Eigen::Map<const Eigen::VectorXd>(
        row.data(), static_cast<Eigen::Index>(row.size())));
  }
  return out;
}

bool SameUpToReflection(std::vector<int> a, const std::vector<int>& b) {
  if (a == b) return true;
  std::reverse(a.begin(), a.end());
  return a == b;
}

const double kThird = 1.0 / 3;

std::vector<Eigen::VectorXd> SixRowTable() {
  return Rows({{kThird, kThird, 0, kThird, 0, 0},
               {0, 0, 0, 0, 0, 0},
               {0, 0, 0.5, 0, 0.5, 0},
               {0, 0.5, 0, 0.5, 0, 0},
               {0, 0, 0, 0, 0, 0},
               {0, 0, kThird, 0, kThird, kThird}});
}

TEST(TreeStructureTest, WorkedSixRowTable) {
  ASSERT_OK_AND_ASSIGN(TreeStructure s, TreeStructureRecover(SixRowTable()));
  EXPECT_TRUE(s.consistent);
  EXPECT_TRUE(s.reflection_ambiguous);
  EXPECT_EQ(s.order, (std::vector<int>{1, 3, 0, 5, 2, 4}));
  EXPECT_EQ(s.anchors, (std::vector<int>{1, 4}));
}

TEST(TreeStructureTest, TwoZeroRowsAreBothAnchors) {
  ASSERT_OK_AND_ASSIGN(TreeStructure s,
                       TreeStructureRecover(Rows({{0, 0}, {0, 0}})));
  EXPECT_TRUE(s.consistent);
  EXPECT_TRUE(s.reflection_ambiguous);
  EXPECT_EQ(s.anchors, (std::vector<int>{0, 1}));
  EXPECT_TRUE(SameUpToReflection(s.order, {0, 1}));
}

TEST(TreeStructureTest, RelabelingRowsPermutesOrder) {
  const std::vector<Eigen::VectorXd> table = SixRowTable();
  ASSERT_OK_AND_ASSIGN(TreeStructure base, TreeStructureRecover(table));
  std::vector<int> perm = {4, 0, 5, 2, 1, 3};  // new index of old row
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::VectorXd> permuted(6, Eigen::VectorXd::Zero(6));
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) permuted[perm[i]][perm[j]] = table[i][j];
    }
    ASSERT_OK_AND_ASSIGN(TreeStructure s, TreeStructureRecover(permuted));
    std::vector<int> expected;
    for (int r : base.order) expected.push_back(perm[r]);
    EXPECT_TRUE(SameUpToReflection(s.order, expected));
    std::next_permutation(perm.begin(), perm.end());
  }
}

TEST(TreeStructureTest, StumpResponsesGiveSortedOrder) {
  Rng rng(41);
  Eigen::VectorXd x(8);
  for (int i = 0; i < 8; ++i) x[i] = rng.Uniform(0, 1);
  auto target = MakeTarget("bob", *Module::Create("bob", LearnerSpec::Tree(1),
                                                  *DataMatrix::FromColumn(x)));
  ApiView api(target, ResponseMode::kFitted);
  std::vector<Eigen::VectorXd> responses;
  for (int i = 0; i < 8; ++i) {
    ASSERT_OK_AND_ASSIGN(LabelResponse r,
                         api.Label(Eigen::VectorXd::Unit(8, i)));
    responses.push_back(r.values);
  }
  ASSERT_OK_AND_ASSIGN(TreeStructure s, TreeStructureRecover(responses));
  std::vector<int> sorted(8);
  std::iota(sorted.begin(), sorted.end(), 0);
  std::sort(sorted.begin(), sorted.end(),
            [&](int a, int b) { return x[a] < x[b]; });
  EXPECT_TRUE(s.consistent);
  EXPECT_TRUE(SameUpToReflection(s.order, sorted));
}

TEST(TreeStructureTest, InconsistentSupportsAreReported) {
  ASSERT_OK_AND_ASSIGN(TreeStructure s,
                       TreeStructureRecover(Rows({{0.5, 0.5, 0, 0},
                                                  {0, 0.5, 0.5, 0},
                                                  {0.5, 0, 0.5, 0},
                                                  {0, 0, 0, 0}})));
  EXPECT_FALSE(s.consistent);
  ASSERT_FALSE(s.violations.empty());
  for (const auto& [query, member, intruder] : s.violations) {
    const auto& support = s.supports[query];
    EXPECT_TRUE(std::count(support.begin(), support.end(), member));
    EXPECT_FALSE(std::count(support.begin(), support.end(), intruder));
  }
}

TEST(TreeStructureTest, RejectsRaggedInput) {
  EXPECT_FALSE(TreeStructureRecover(Rows({{0, 0}, {0}})).ok());
  EXPECT_FALSE(TreeStructureRecover({}).ok());
}

// ------------------------------------------------------------ cover attack

TEST(CoverTest, GridRadiusVerifiedBySampling) {
  ASSERT_OK_AND_ASSIGN(CoverSpec cover, MakeLinearCover(-1, 1, 0.1, 21, 0.2));
  EXPECT_EQ(cover.grid.size(), 21u);
  EXPECT_NEAR(cover.Radius(), 0.05, 1e-12);
  EXPECT_NEAR(cover.Entropy(), std::log(21.0), 1e-12);
  EXPECT_LE(SampledCoverRadius(cover, FeatureDistribution::StandardGaussian(1),
                               2000, 5000, 3),
            cover.eps);
  ASSERT_OK_AND_ASSIGN(CoverSpec minimal, MakeLinearCover(-1, 1, 0.1, 0, 0.2));
  EXPECT_EQ(minimal.grid.size(), 11u);
  EXPECT_FALSE(MakeLinearCover(-1, 1, 0.1, 5, 0.2).ok());
}

TEST(CoverTest, MatchingStatisticConcentrates) {
  const int n = 5000;
  const double sigma = 0.2;
  int inside = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    Rng rng(rep, "matching", 0);
    Eigen::VectorXd x = GaussianVector(rng, n);
    const double a_star = rng.Uniform(-1, 1);
    const double a_j = -1 + 0.1 * static_cast<double>(rng.UniformInt(21));
    Eigen::VectorXd y_star = a_star * x + sigma * GaussianVector(rng, n);
    Eigen::VectorXd y_j = a_j * x + sigma * GaussianVector(rng, n);
    const double c2 = (a_j - a_star) * (a_j - a_star);
    const double mean = 2 * sigma * sigma + c2;
    const double sd = std::sqrt(2.0 / n) * (c2 + 2 * sigma * sigma);
    inside += std::abs((y_j - y_star).squaredNorm() / n - mean) <= 3 * sd;
    ++total;
  }
  EXPECT_GE(inside, 0.98 * total);
}

TEST(CoverTest, ExactGridTaskIsMatched) {
  Rng rng(51);
  const int n = 500;
  DataMatrix x = GaussianData(rng, n, 1);
  auto target = OlsTarget(x, false, 0.0);
  ApiView api(target, ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(CoverSpec cover, MakeLinearCover(-1, 1, 0.1, 21, 0.0));
  ASSERT_OK_AND_ASSIGN(auto system, EpsilonCoverImitate(cover, api, n));
  EXPECT_EQ(api.queries_used(), 21);
  std::vector<LabelVector> tasks = {
      LabelVector::Regression(x.values().col(0) * cover.grid[13])};
  ASSERT_OK_AND_ASSIGN(
      PrivacyEstimate e,
      EmpiricalRho(target->module, *system, tasks, LossFn{LossKind::kSquared}));
  EXPECT_LT(e.rho_hat, 1e-20);
  EXPECT_FALSE(
      system->Imitate(LabelVector::Regression(Eigen::VectorXd::Ones(3)), 0)
          .ok());
}

TEST(CoverTest, EmptyDictionaryIsAnError) {
  Rng rng(52);
  ApiView api(OlsTarget(GaussianData(rng, 10, 1), false),
              ResponseMode::kResidual);
  CoverSpec empty;
  EXPECT_THAT(EpsilonCoverImitate(empty, api, 10).status().message(),
              HasSubstr("empty"));
}

TEST(CoverTest, RhoWithinRadiusPlusSlack) {
  const int n = 5000;
  ASSERT_OK_AND_ASSIGN(CoverSpec cover, MakeLinearCover(-1, 1, 0.1, 21, 0.2));
  RhoConfig config{
      .tasks = {.marginal = FeatureDistribution::StandardGaussian(1),
                .family = {.coefficients = TaskFamily::Coefficients::kUniform,
                           .scale = 1.0,
                           .noise_sd = 0.2}},
      .test = FeatureDistribution::StandardGaussian(1),
      .loss = LossFn{LossKind::kSquared},
      .n_tasks = 20,
      .n_test = 200};
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(trial, "cover-x", 0);
    auto target = OlsTarget(GaussianData(rng, n, 1), false, 0.2);
    ApiView api(target, ResponseMode::kResidual, std::nullopt, trial);
    ASSERT_OK_AND_ASSIGN(auto system, EpsilonCoverImitate(cover, api, n));
    ASSERT_OK_AND_ASSIGN(PrivacyEstimate e,
                         EstimateRho(target->module, *system, config, trial));
    good += e.rho_hat <= 0.1 + 0.05 ? 1 : 0;
  }
  EXPECT_GE(good, 95);
}

// ------------------------------------------------- black-box discipline

TEST(BlackBoxTest, EquationSolvingReplaysAfterTamper) {
  auto target = LogisticTarget(Eigen::Vector3d(1, -2, 0.5), 0.3);
  ApiView live(target, ResponseMode::kProbability);
  ASSERT_OK_AND_ASSIGN(LogisticModel before,
                       EquationSolvingExtract(live, 3, 9));
  target->pretrained = LogisticTarget(Eigen::Vector3d(-1, 0, 4), 2)->pretrained;
  ReplayChannel replay(live.log());
  ASSERT_OK_AND_ASSIGN(LogisticModel after,
                       EquationSolvingExtract(replay, 3, 9));
  EXPECT_EQ(before.ToJson().dump(), after.ToJson().dump());
  ApiView tampered(target, ResponseMode::kProbability);
  ASSERT_OK_AND_ASSIGN(LogisticModel fresh,
                       EquationSolvingExtract(tampered, 3, 9));
  EXPECT_NE(before.ToJson().dump(), fresh.ToJson().dump());
}

TEST(BlackBoxTest, PathFindingReplaysAfterTamper) {
  auto target = TreeTarget(FittedTree(61, 2));
  ApiView live(target, ResponseMode::kLeafId);
  const FeatureBox box = FeatureBox::Cube(2, -5, 5);
  ASSERT_OK_AND_ASSIGN(PathFindingResult before, PathFindingExtract(live, box));
  target->pretrained = TreeTarget(FittedTree(62, 2))->pretrained;
  ReplayChannel replay(live.log());
  ASSERT_OK_AND_ASSIGN(PathFindingResult after,
                       PathFindingExtract(replay, box));
  EXPECT_EQ(before.partition->ToJson().dump(),
            after.partition->ToJson().dump());
  EXPECT_EQ(replay.queries_used(), live.queries_used());
  ApiView tampered(target, ResponseMode::kLeafId);
  ASSERT_OK_AND_ASSIGN(PathFindingResult fresh,
                       PathFindingExtract(tampered, box));
  EXPECT_NE(before.partition->ToJson().dump(),
            fresh.partition->ToJson().dump());
}

TEST(BlackBoxTest, RotationReplaysAfterPrivateDataChanges) {
  Rng rng(63);
  const int n = 2000;
  auto target = OlsTarget(GaussianData(rng, n, 2), false, 0.1);
  ApiView live(target, ResponseMode::kResidual);
  RotationAttackOptions options{.p = 2, .intercept = false, .seed = 1};
  ASSERT_OK_AND_ASSIGN(RotationAttackResult before,
                       CovarianceRotationAttack(live, n, options));
  target->module =
      *Module::Create("bob", LearnerSpec::Ols(), GaussianData(rng, n, 2));
  ReplayChannel replay(live.log());
  ASSERT_OK_AND_ASSIGN(RotationAttackResult after,
                       CovarianceRotationAttack(replay, n, options));
  EXPECT_EQ(before.rotation.x_hat.values(), after.rotation.x_hat.values());
  ApiView tampered(target, ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(RotationAttackResult fresh,
                       CovarianceRotationAttack(tampered, n, options));
  EXPECT_NE(before.rotation.x_hat.values(), fresh.rotation.x_hat.values());
}

TEST(BlackBoxTest, CoverImitationReplaysAfterTamper) {
  Rng rng(64);
  const int n = 300;
  auto target = OlsTarget(GaussianData(rng, n, 1), false, 0.2);
  ApiView live(target, ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(CoverSpec cover, MakeLinearCover(-1, 1, 0.1, 21, 0.2));
  ASSERT_OK_AND_ASSIGN(auto before, EpsilonCoverImitate(cover, live, n));
  target->module =
      *Module::Create("bob", LearnerSpec::Ols(), GaussianData(rng, n, 1));
  ReplayChannel replay(live.log());
  ASSERT_OK_AND_ASSIGN(auto after, EpsilonCoverImitate(cover, replay, n));
  LabelVector y = LabelVector::Regression(GaussianVector(rng, n));
  ASSERT_OK_AND_ASSIGN(PredictionFn f_before, before->Imitate(y, 0));
  ASSERT_OK_AND_ASSIGN(PredictionFn f_after, after->Imitate(y, 0));
  EXPECT_EQ(f_before.impl().ToJson().dump(), f_after.impl().ToJson().dump());
  ApiView tampered(target, ResponseMode::kResidual);
  ASSERT_OK_AND_ASSIGN(auto fresh, EpsilonCoverImitate(cover, tampered, n));
  ASSERT_OK_AND_ASSIGN(PredictionFn f_fresh, fresh->Imitate(y, 0));
  EXPECT_NE(f_before.impl().ToJson().dump(), f_fresh.impl().ToJson().dump());
}

TEST(BlackBoxTest, ReportedQueriesEqualCounter) {
  ApiView api(ClassifierTarget(Eigen::Vector2d(1, 1), 0.1),
              ResponseMode::kLabel);
  ASSERT_OK_AND_ASSIGN(AdaptiveResult r,
                       AdaptiveRetrain(api, 2, {.budget = 30, .batch = 10}));
  AttackRecord record = MakeRecord("adaptive-retrain", api, "classifier");
  EXPECT_EQ(record.queries, api.queries_used());
  EXPECT_EQ(record.queries, 30);
  EXPECT_EQ(record.queries, api.log().Count(QueryKind::kPrediction) +
                                api.log().Count(QueryKind::kLabel));
  EXPECT_EQ(r.system->Describe()["queries"], 30);
  nlohmann::json j = record.ToJson(false);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_EQ(j["side_info"], nlohmann::json({"response-mode"}));
}

}  // namespace
}  // namespace imitation
