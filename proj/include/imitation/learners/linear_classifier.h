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

#ifndef IMITATION_LEARNERS_LINEAR_CLASSIFIER_H_
#define IMITATION_LEARNERS_LINEAR_CLASSIFIER_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"

namespace imitation {

// sign(w.x + c) with sign(0) = +1.
class LinearClassifier final : public Predictor {
 public:
  static absl::StatusOr<LinearClassifier> Create(Eigen::VectorXd weights,
                                                 double offset);

  int input_dim() const override { return static_cast<int>(weights_.size()); }
  double Predict(std::span<const double> x) const override {
    return Classify(x);
  }
  std::string algorithm() const override { return "linear_classifier"; }
  nlohmann::json ToJson() const override;

  int Classify(std::span<const double> x) const;
  double Margin(std::span<const double> x) const;
  const Eigen::VectorXd& weights() const { return weights_; }
  double offset() const { return offset_; }

 private:
  LinearClassifier(Eigen::VectorXd weights, double offset)
      : weights_(std::move(weights)), offset_(offset) {}
  Eigen::VectorXd weights_;
  double offset_;
};

}  // namespace imitation

#endif  // IMITATION_LEARNERS_LINEAR_CLASSIFIER_H_
