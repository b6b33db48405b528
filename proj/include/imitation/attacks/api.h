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

#ifndef IMITATION_ATTACKS_API_H_
#define IMITATION_ATTACKS_API_H_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/imitation.h"
#include "imitation/core/information_set.h"
#include "imitation/core/module.h"
#include "imitation/core/prediction.h"
#include "json.hpp"

namespace imitation {

enum class ResponseMode {
  kValue,        // raw f(x)
  kProbability,  // logistic probability
  kLabel,        // class label (+1/-1 for linear classifiers and logistic)
  kLeafId,       // leaf identifier of a regression tree
  kResidual,     // Stage I: y - f(X)
  kFitted,       // Stage I: f(X)
};

std::string ResponseModeName(ResponseMode mode);

// What sits behind the API: a module trained on private data, or an already
// trained model. Held through a shared pointer so tests can tamper with it
// after an attack has run.
struct Target {
  std::string id;
  // Learner + private features; the intrinsic label is the training label
  // for prediction-mode APIs.
  Module module;
  // Served as-is when set.
  std::optional<PredictionFn> pretrained;
  // Noise of the task-generation oracle, y = X beta + sigma * eta.
  double oracle_noise_sd = 0.0;
};

std::shared_ptr<Target> MakeTarget(std::string id, Module module,
                                   double oracle_noise_sd = 0.0);
std::shared_ptr<Target> MakePretrainedTarget(std::string id, PredictionFn fn);

// The adversary's only handle on a target.
class Channel {
 public:
  virtual ~Channel() = default;
  // One feature row; response per mode (double or leaf-id string).
  virtual absl::StatusOr<Response> Predict(const Eigen::VectorXd& x) = 0;
  // One Stage I label vector; fitted values or residuals plus the Stage II
  // endpoint for that label.
  virtual absl::StatusOr<LabelResponse> Label(const Eigen::VectorXd& y) = 0;
  // Side-information grant: labels X beta + noise on the target's rows.
  virtual absl::StatusOr<Eigen::VectorXd> OracleLabel(
      const Eigen::VectorXd& beta) = 0;
  // Prediction + label queries sent so far (oracle calls are not queries).
  virtual int queries_used() const = 0;
  virtual const InformationSet& log() const = 0;
};

// Live API. Every response is computed by fitting/evaluating the target at
// query time and logged.
class ApiView final : public Channel {
 public:
  ApiView(std::shared_ptr<Target> target, ResponseMode mode,
          std::optional<int> budget = std::nullopt, std::uint64_t seed = 0);

  absl::StatusOr<Response> Predict(const Eigen::VectorXd& x) override;
  absl::StatusOr<LabelResponse> Label(const Eigen::VectorXd& y) override;
  absl::StatusOr<Eigen::VectorXd> OracleLabel(
      const Eigen::VectorXd& beta) override;
  int queries_used() const override { return used_; }
  const InformationSet& log() const override { return log_; }

  ResponseMode mode() const { return mode_; }
  std::optional<int> budget() const { return budget_; }
  const std::string& target_id() const { return target_->id; }
  void AddSideInfo(SideInfoTag tag, nlohmann::json value) {
    log_.AddSideInfo(tag, std::move(value));
  }

 private:
  absl::Status Charge();
  absl::StatusOr<PredictionFn> Served();

  std::shared_ptr<Target> target_;
  ResponseMode mode_;
  std::optional<int> budget_;
  std::uint64_t seed_;
  int used_ = 0;
  int oracle_calls_ = 0;
  InformationSet log_;
  // Fitted target for prediction modes, keyed by the data it was fit on.
  std::shared_ptr<const DataMatrix> cached_data_;
  std::optional<PredictionFn> cached_fn_;
};

// Answers from a frozen log. The i-th query must equal the i-th logged query
// bit for bit; anything else is a replay divergence.
class ReplayChannel final : public Channel {
 public:
  explicit ReplayChannel(InformationSet log) : log_(std::move(log)) {}

  absl::StatusOr<Response> Predict(const Eigen::VectorXd& x) override;
  absl::StatusOr<LabelResponse> Label(const Eigen::VectorXd& y) override;
  absl::StatusOr<Eigen::VectorXd> OracleLabel(
      const Eigen::VectorXd& beta) override;
  int queries_used() const override { return used_; }
  const InformationSet& log() const override { return log_; }

 private:
  absl::StatusOr<const Response*> Next(QueryKind kind,
                                       const Eigen::VectorXd& query);

  InformationSet log_;
  int cursor_ = 0;
  int used_ = 0;
};

// Information set plus hacking algorithm: an imitation whose factory was
// built from the logged responses and declared side information only.
class ImitationSystem final : public Imitation {
 public:
  ImitationSystem(std::string hacker, nlohmann::json parameters,
                  InformationSet information,
                  std::shared_ptr<const Imitation> factory)
      : hacker_(std::move(hacker)),
        parameters_(std::move(parameters)),
        information_(std::move(information)),
        factory_(std::move(factory)) {}

  absl::StatusOr<PredictionFn> Imitate(const LabelVector& y,
                                       std::uint64_t seed) const override {
    return factory_->Imitate(y, seed);
  }
  std::string name() const override { return hacker_; }
  nlohmann::json Describe() const override;
  const InformationSet& information() const { return information_; }
  const nlohmann::json& parameters() const { return parameters_; }

 private:
  std::string hacker_;
  nlohmann::json parameters_;
  InformationSet information_;
  std::shared_ptr<const Imitation> factory_;
};

// Machine-readable outcome of one attack run.
struct AttackRecord {
  std::string attack;
  std::string target;
  int queries = 0;
  std::vector<std::string> side_info;
  std::optional<double> rho_hat;
  double wall_seconds = 0.0;

  nlohmann::json ToJson(bool include_timing = true) const;
};

AttackRecord MakeRecord(const std::string& attack, const Channel& channel,
                        const std::string& target_id);

}  // namespace imitation

#endif  // IMITATION_ATTACKS_API_H_
