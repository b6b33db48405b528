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

#ifndef IMITATION_LEARNERS_LOGISTIC_H_
#define IMITATION_LEARNERS_LOGISTIC_H_

#include <Eigen/Dense>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"
#include "imitation/core/types.h"

namespace imitation {

enum class LogisticOutput { kProbability, kLabel };

struct LogisticOptions {
  int max_iter = 100;
  // Bound on the infinity norm of the gradient of the mean log-likelihood.
  double tol = 1e-10;
  // Ridge penalty on the weights (not the bias), on the mean scale.
  double l2 = 0.0;
  // Parameters beyond this magnitude mean the classes are separable.
  double weight_bound = 1e3;
};

// Binary logistic regression, p(x) = sigmoid(w.x + b).
class LogisticModel final : public Predictor {
 public:
  LogisticModel(Eigen::VectorXd weights, double bias,
                LogisticOutput output = LogisticOutput::kProbability)
      : weights_(std::move(weights)), bias_(bias), output_(output) {}

  int input_dim() const override { return static_cast<int>(weights_.size()); }
  // Probability in (0, 1) or a {0, 1} label, per output mode.
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "logistic"; }
  nlohmann::json ToJson() const override;

  double Probability(std::span<const double> x) const;
  double Margin(std::span<const double> x) const;
  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  LogisticOutput output() const { return output_; }
  LogisticModel WithOutput(LogisticOutput output) const {
    return LogisticModel(weights_, bias_, output);
  }

 private:
  Eigen::VectorXd weights_;
  double bias_;
  LogisticOutput output_;
};

struct LogisticFit {
  LogisticModel model;
  int iterations = 0;
  bool converged = false;
  // Max iterations reached before the gradient tolerance.
  bool hit_max_iter = false;
  // Classes are separable (or parameters grew past weight_bound and were
  // clipped); no finite maximizer exists.
  bool diverged = false;
  double gradient_norm = 0.0;
  // Mean log-likelihood after each accepted iterate, starting at w = 0.
  std::vector<double> log_likelihood_trace;
};

// Damped Newton with step halving. Labels must be 0 or 1.
absl::StatusOr<LogisticFit> FitLogistic(const DataMatrix& x,
                                        const LabelVector& y,
                                        const LogisticOptions& options = {});

double Sigmoid(double z);
// log(p / (1 - p)) computed without forming 1 - p twice.
double Logit(double p);

}  // namespace imitation

#endif  // IMITATION_LEARNERS_LOGISTIC_H_
