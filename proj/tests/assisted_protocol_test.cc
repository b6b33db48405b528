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
#include <cstring>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "imitation/assisted/protocol.h"
#include "imitation/core/format.h"
#include "imitation/learners/ols.h"
#include "imitation/privacy/samplers.h"
#include "test_util.h"

namespace imitation {
namespace {

using testing::GaussianData;
using testing::GaussianVector;
using testing::GramSchmidtBasis;
using ::testing::HasSubstr;

struct Split {
  Module alice;
  Module bob;
};

Split MakeParties(const RowMatrix& joint, int p_alice, bool intercept = false) {
  const int p_bob = static_cast<int>(joint.cols()) - p_alice;
  RowMatrix a = joint.leftCols(p_alice), b = joint.rightCols(p_bob);
  return {*Module::Create("alice", LearnerSpec::Ols(intercept),
                          *DataMatrix::Create(a)),
          *Module::Create("bob", LearnerSpec::Ols(false),
                          p_bob == 0 ? DataMatrix::Empty(joint.rows())
                                     : *DataMatrix::Create(b))};
}

// Block covariance: identity within each party, corr(x_Aj, x_Bj) = r.
RowMatrix CorrelatedDesign(Rng& rng, int n, int p, double r) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2 * p, 2 * p);
  for (int j = 0; j < p; ++j) cov(j, p + j) = cov(p + j, j) = r;
  return FeatureDistribution::Gaussian(cov)->SampleMatrix(rng, n);
}

Eigen::VectorXd SoloResidual(const DataMatrix& x, const Eigen::VectorXd& y) {
  const OlsModel m = *FitOls(x, LabelVector::Regression(y));
  return y - x.values() * m.coefficients();
}

TEST(RunStage1Test, EmptyBobGivesAliceSoloErrorInOneRound) {
  Rng rng(1);
  const RowMatrix xa = testing::GaussianMatrix(rng, 60, 3);
  Split parties = MakeParties(xa, 3);
  const Eigen::VectorXd y = GaussianVector(rng, 60);
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob, LabelVector::Regression(y), {}, 0));
  ASSERT_EQ(run.transcript.rounds.size(), 1u);
  const Eigen::VectorXd solo = SoloResidual(*parties.alice.data, y);
  EXPECT_LT((run.transcript.rounds[0].bob_residual - solo).norm(), 1e-12);
}

TEST(RunStage1Test, OrthogonalPartiesReachOracleAfterOneRound) {
  Rng rng(2);
  const Eigen::MatrixXd q = GramSchmidtBasis(GaussianData(rng, 40, 5).values());
  RowMatrix joint = q;
  joint.col(0) *= 3.0;
  joint.col(3) *= 0.5;
  Split parties = MakeParties(joint, 2);
  const Eigen::VectorXd y = GaussianVector(rng, 40);
  ASSERT_OK_AND_ASSIGN(
      OracleResult oracle,
      OracleFit(*parties.alice.data, *parties.bob.data,
                LabelVector::Regression(y), LearnerSpec::Ols()));
  ProtocolConfig fixed{.max_rounds = 1,
                       .stop_rule = ProtocolConfig::StopRule::kFixedRounds};
  ASSERT_OK_AND_ASSIGN(Stage1Result run,
                       RunStage1(parties.alice, parties.bob,
                                 LabelVector::Regression(y), fixed, 0));
  ASSERT_OK_AND_ASSIGN(LabelVector oracle_fit,
                       Evaluate(oracle.fn, *DataMatrix::Create(joint)));
  const Eigen::VectorXd oracle_residual = y - oracle_fit.values();
  EXPECT_LT((run.transcript.rounds[0].bob_residual - oracle_residual)
                .lpNorm<Eigen::Infinity>(),
            1e-8);
}

TEST(RunStage1Test, CorrelatedPartiesApproachOracle) {
  Rng rng(3);
  const RowMatrix joint = CorrelatedDesign(rng, 500, 3, 0.5);
  Split parties = MakeParties(joint, 3);
  Eigen::VectorXd beta(6);
  beta << 1, -1, 0.5, 2, 0.3, -0.7;
  const Eigen::VectorXd y = joint * beta + 0.5 * GaussianVector(rng, 500);
  ASSERT_OK_AND_ASSIGN(
      OracleResult oracle,
      OracleFit(*parties.alice.data, *parties.bob.data,
                LabelVector::Regression(y), LearnerSpec::Ols()));
  ASSERT_OK_AND_ASSIGN(Stage1Result run, RunStage1(parties.alice, parties.bob,
                                                   LabelVector::Regression(y),
                                                   {.max_rounds = 30}, 0));
  const std::vector<double> trace = run.transcript.MseTrace();
  ASSERT_LE(trace.size(), 30u);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_LE(trace[i], trace[i - 1]) << "round " << i + 1;
  }
  EXPECT_LT(std::abs(trace.back() - oracle.oracle_error) / oracle.oracle_error,
            0.01);
}

TEST(RunStage1Test, ResidualChainMatchesRecordedComponents) {
  Rng rng(4);
  const RowMatrix joint = CorrelatedDesign(rng, 120, 2, 0.6);
  Split parties = MakeParties(joint, 2, /*intercept=*/true);
  const Eigen::VectorXd y = GaussianVector(rng, 120).array() + 1.0;
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob, LabelVector::Regression(y),
                {.max_rounds = 5,
                 .stop_rule = ProtocolConfig::StopRule::kFixedRounds},
                0));
  ASSERT_EQ(run.transcript.rounds.size(), 5u);
  Eigen::VectorXd target = y;
  for (const ProtocolRound& r : run.transcript.rounds) {
    const Eigen::VectorXd fa =
        Evaluate(r.alice_component, *parties.alice.data)->values();
    const Eigen::VectorXd fb =
        Evaluate(r.bob_component, *parties.bob.data)->values();
    EXPECT_EQ(r.alice_residual, target - fa);
    EXPECT_EQ(r.bob_residual, r.alice_residual - fb);
    target = r.bob_residual;
  }
}

TEST(RunStage1Test, StageTwoOnTrainingRowsRecoversFittedValues) {
  Rng rng(5);
  const RowMatrix joint = CorrelatedDesign(rng, 80, 2, 0.3);
  Split parties = MakeParties(joint, 2);
  const Eigen::VectorXd y = GaussianVector(rng, 80);
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob, LabelVector::Regression(y), {}, 0));
  const Eigen::VectorXd& final_residual =
      run.transcript.rounds.back().bob_residual;
  for (int i = 0; i < 80; ++i) {
    ASSERT_OK_AND_ASSIGN(
        double pred, Stage2Predict(run.predictor, parties.alice.data->row(i),
                                   parties.bob.data->row(i)));
    EXPECT_NEAR(pred, y[i] - final_residual[i], 1e-10);
  }
}

TEST(RunStage1Test, ReplayIsBitIdentical) {
  Rng rng(6);
  const RowMatrix joint = CorrelatedDesign(rng, 100, 3, 0.5);
  Split parties = MakeParties(joint, 3);
  const Eigen::VectorXd y = GaussianVector(rng, 100);
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob, LabelVector::Regression(y), {}, 0));
  const AssistedPredictor replay = ReplayTranscript(run.transcript, 3, 3);
  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd xa = GaussianVector(rng, 3),
                          xb = GaussianVector(rng, 3);
    const double a =
        *Stage2Predict(run.predictor, {xa.data(), 3}, {xb.data(), 3});
    const double b = *Stage2Predict(replay, {xa.data(), 3}, {xb.data(), 3});
    EXPECT_EQ(0, std::memcmp(&a, &b, sizeof(double)));
  }
}

TEST(RunStage1Test, TranscriptHoldsNoFeatureData) {
  Rng rng(7);
  const RowMatrix joint = CorrelatedDesign(rng, 30, 2, 0.5);
  Split parties = MakeParties(joint, 2);
  const long alice_refs = parties.alice.data.use_count();
  const long bob_refs = parties.bob.data.use_count();
  const Eigen::VectorXd y = GaussianVector(rng, 30);
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob, LabelVector::Regression(y), {}, 0));
  // Nothing in the result keeps a handle on either feature matrix.
  EXPECT_EQ(parties.alice.data.use_count(), alice_refs);
  EXPECT_EQ(parties.bob.data.use_count(), bob_refs);
  // And no feature value shows up in the serialized transcript.
  const std::string dumped = run.transcript.ToJson().dump();
  for (Eigen::Index i = 0; i < joint.size(); ++i) {
    EXPECT_EQ(dumped.find(FormatDouble(joint.data()[i])), std::string::npos);
  }
}

TEST(RunStage1Test, FitFailureCarriesRoundAndParty) {
  RowMatrix joint(4, 3);
  joint << 1, 2, 2, 2, 1, 1, 3, 5, 5, 4, 0, 0;  // Bob's two columns coincide
  Split parties = MakeParties(joint, 1);
  auto run =
      RunStage1(parties.alice, parties.bob,
                LabelVector::Regression(Eigen::Vector4d(1, 2, 3, 4)), {}, 0);
  ASSERT_FALSE(run.ok());
  EXPECT_THAT(run.status().message(), HasSubstr("Bob fit failed in round 1"));
}

TEST(RunStage1Test, RejectsMisalignedRowsAndBadConfig) {
  Rng rng(8);
  ASSERT_OK_AND_ASSIGN(Module a, Module::Create("a", LearnerSpec::Ols(),
                                                GaussianData(rng, 10, 1)));
  ASSERT_OK_AND_ASSIGN(Module b, Module::Create("b", LearnerSpec::Ols(),
                                                GaussianData(rng, 11, 1)));
  const LabelVector y = LabelVector::Regression(GaussianVector(rng, 10));
  EXPECT_FALSE(RunStage1(a, b, y, {}, 0).ok());
  EXPECT_FALSE(RunStage1(a, a, y, {.max_rounds = 0}, 0).ok());
  EXPECT_FALSE(RunStage1(a, a, y, {.theta = 0}, 0).ok());
}

TEST(Stage2PredictTest, ZeroAliceAndZeroInputs) {
  AssistedPredictor p{MakeZeroFn(2), MakeLinearFn(Eigen::Vector2d(1, -1))};
  const double xa[] = {5, 5}, xb[] = {3, 1}, zero[] = {0, 0};
  EXPECT_EQ(*Stage2Predict(p, xa, xb), 2.0);
  AssistedPredictor linear{MakeLinearFn(Eigen::Vector2d(4, 1)),
                           MakeLinearFn(Eigen::Vector2d(1, -1))};
  EXPECT_EQ(*Stage2Predict(linear, zero, zero), 0.0);
  const double three[] = {1, 2, 3};
  EXPECT_FALSE(Stage2Predict(p, three, xb).ok());
}

TEST(OracleFitTest, EmptyBobIsAliceSolo) {
  Rng rng(9);
  const DataMatrix xa = GaussianData(rng, 25, 2);
  const Eigen::VectorXd y = GaussianVector(rng, 25);
  ASSERT_OK_AND_ASSIGN(
      OracleResult oracle,
      OracleFit(xa, DataMatrix::Empty(25), LabelVector::Regression(y),
                LearnerSpec::Ols()));
  EXPECT_NEAR(oracle.oracle_error, SoloResidual(xa, y).squaredNorm() / 25,
              1e-14);
}

TEST(OracleFitTest, NoiselessLabelsInterpolate) {
  Rng rng(10);
  const DataMatrix xa = GaussianData(rng, 30, 2), xb = GaussianData(rng, 30, 2);
  const Eigen::VectorXd y = xa.values() * Eigen::Vector2d(1, 2) +
                            xb.values() * Eigen::Vector2d(-3, 0.5);
  ASSERT_OK_AND_ASSIGN(
      OracleResult oracle,
      OracleFit(xa, xb, LabelVector::Regression(y), LearnerSpec::Ols()));
  EXPECT_LT(oracle.oracle_error, 1e-12);
}

TEST(OracleFitTest, NeverWorseThanEitherSoloFit) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DataMatrix xa = GaussianData(rng, 40, 2),
                     xb = GaussianData(rng, 40, 3);
    const Eigen::VectorXd y = GaussianVector(rng, 40);
    ASSERT_OK_AND_ASSIGN(
        OracleResult oracle,
        OracleFit(xa, xb, LabelVector::Regression(y), LearnerSpec::Ols()));
    const double solo_a = SoloResidual(xa, y).squaredNorm() / 40;
    const double solo_b = SoloResidual(xb, y).squaredNorm() / 40;
    EXPECT_LE(oracle.oracle_error, std::min(solo_a, solo_b) + 1e-12);
  }
}

TEST(TranscriptTest, CsvAndJsonShape) {
  Rng rng(12);
  const RowMatrix joint = CorrelatedDesign(rng, 50, 1, 0.5);
  Split parties = MakeParties(joint, 1);
  ASSERT_OK_AND_ASSIGN(
      Stage1Result run,
      RunStage1(parties.alice, parties.bob,
                LabelVector::Regression(GaussianVector(rng, 50)),
                {.max_rounds = 3,
                 .stop_rule = ProtocolConfig::StopRule::kFixedRounds},
                0));
  const std::string csv = run.transcript.MseCsv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("round,mse\n", 0), 0u);
  const nlohmann::json j = run.transcript.ToJson();
  EXPECT_EQ(j["rounds"].size(), 3u);
  EXPECT_EQ(j["rounds"][2]["round"], 3);
  EXPECT_EQ(j["stop_reason"], "max rounds");
}

}  // namespace
}  // namespace imitation
