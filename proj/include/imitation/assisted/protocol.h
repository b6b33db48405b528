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

#ifndef IMITATION_ASSISTED_PROTOCOL_H_
#define IMITATION_ASSISTED_PROTOCOL_H_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "imitation/core/module.h"
#include "imitation/core/prediction.h"
#include "json.hpp"

namespace imitation {

struct ProtocolConfig {
  enum class StopRule { kFixedRounds, kRelativeImprovement };

  int max_rounds = 30;
  StopRule stop_rule = StopRule::kRelativeImprovement;
  // Stop once the round-over-round relative drop in residual norm is below
  // theta.
  double theta = 1e-6;

  absl::Status Validate() const;
};

// Sum of per-round component functions of one party, evaluated in round
// order.
class AdditiveFunction final : public Predictor {
 public:
  AdditiveFunction(int input_dim, std::vector<PredictionFn> components)
      : input_dim_(input_dim), components_(std::move(components)) {}

  int input_dim() const override { return input_dim_; }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "additive"; }
  nlohmann::json ToJson() const override;
  const std::vector<PredictionFn>& components() const { return components_; }

 private:
  int input_dim_;
  std::vector<PredictionFn> components_;
};

// Stage II: each side evaluates its own sum on its own features and only
// the scalar is combined.
struct AssistedPredictor {
  PredictionFn alice;
  PredictionFn bob;
};

struct ProtocolRound {
  int round = 0;
  // e_{A,i}: Alice's residual, sent to Bob.
  Eigen::VectorXd alice_residual;
  // e_{B,i}: Bob's residual, sent back to Alice.
  Eigen::VectorXd bob_residual;
  PredictionFn alice_component;
  PredictionFn bob_component;
  // ||e_{B,i}||^2 / n.
  double mse = 0.0;
};

// Everything exchanged in Stage I. Holds vectors and fitted functions, never
// either party's feature matrix.
struct ProtocolTranscript {
  Eigen::VectorXd label;
  std::vector<ProtocolRound> rounds;
  std::string stop_reason;

  std::vector<double> MseTrace() const;
  nlohmann::json ToJson() const;
  // "round,mse" lines.
  std::string MseCsv() const;
};

struct Stage1Result {
  AssistedPredictor predictor;
  ProtocolTranscript transcript;
};

// Alternating residual fitting, Alice first. The two modules' rows must be
// collated (same order, same count).
absl::StatusOr<Stage1Result> RunStage1(const Module& alice, const Module& bob,
                                       const LabelVector& y,
                                       const ProtocolConfig& config,
                                       std::uint64_t seed);

absl::StatusOr<double> Stage2Predict(const AssistedPredictor& predictor,
                                     std::span<const double> x_alice,
                                     std::span<const double> x_bob);

// Rebuilds the predictor from the recorded component functions.
AssistedPredictor ReplayTranscript(const ProtocolTranscript& transcript,
                                   int alice_dim, int bob_dim);

struct OracleResult {
  double oracle_error = 0.0;
  PredictionFn fn;
};

// Fits the learner on [X_A, X_B] and reports the training MSE.
absl::StatusOr<OracleResult> OracleFit(const DataMatrix& x_alice,
                                       const DataMatrix& x_bob,
                                       const LabelVector& y,
                                       const LearnerSpec& learner,
                                       std::uint64_t seed = 0);

}  // namespace imitation

#endif  // IMITATION_ASSISTED_PROTOCOL_H_
