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

// Local Laplace release of a feature matrix, errors-in-variables regression
// on the release, and the two experiments contrasting differential privacy
// with imitation privacy.

#ifndef IMITATION_DP_DP_BRIDGE_H_
#define IMITATION_DP_DP_BRIDGE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/imitation.h"
#include "imitation/core/module.h"
#include "imitation/learners/ols.h"
#include "imitation/privacy/privacy_metric.h"
#include "json.hpp"

namespace imitation {

struct LaplaceParams {
  // Entries of the released matrix are supported on [-bound, bound].
  double bound = 1.0;
  double alpha = 1.0;
  // 2b / alpha per entry.
  double scale = 2.0;
  // 8 b^2 / alpha^2.
  double variance = 8.0;

  // alpha = +inf is allowed and means exact release.
  static absl::StatusOr<LaplaceParams> Create(double bound, double alpha);
  nlohmann::json ToJson() const;
};

struct PrivatizedData {
  std::shared_ptr<const DataMatrix> x_tilde;
  LaplaceParams params;
  std::uint64_t seed = 0;
};

// X_tilde = X + L with L i.i.d. Laplace(scale). Entries of X must lie in
// [-b, b].
absl::StatusOr<PrivatizedData> LaplaceMechanism(const DataMatrix& x,
                                                const LaplaceParams& params,
                                                std::uint64_t seed);

// beta_a = (X~^T X~ / n - tau^2 I)^{-1} (X~^T y / n). With an intercept only
// the noisy feature block is corrected.
absl::StatusOr<OlsModel> BiasCorrectedFit(const PrivatizedData& release,
                                          const LabelVector& y,
                                          bool intercept = false);

// Imitation that refits the bias-corrected estimator on the release for each
// task label.
std::shared_ptr<const Imitation> BiasCorrectedImitation(PrivatizedData release,
                                                        bool intercept);

struct DpBreachConfig {
  LaplaceParams params;
  std::vector<int> n_grid;
  // Bob's features are drawn from rho.tasks.marginal, which must be bounded
  // by params.bound.
  RhoConfig rho;
  bool intercept = true;
};

struct DpBreachPoint {
  int n = 0;
  PrivacyEstimate estimate;
};

// For each n: draw Bob's rows, privatize, measure rho of the bias-corrected
// imitation against Bob's OLS module.
absl::StatusOr<std::vector<DpBreachPoint>> DpBreachExperiment(
    const DpBreachConfig& config, std::uint64_t seed);

// Evaluates an inner function on a fixed subset of the input columns.
class ColumnSubsetFunction final : public Predictor {
 public:
  ColumnSubsetFunction(int input_dim, std::vector<int> columns,
                       PredictionFn inner)
      : input_dim_(input_dim),
        columns_(std::move(columns)),
        inner_(std::move(inner)) {}

  int input_dim() const override { return input_dim_; }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "column_subset"; }
  nlohmann::json ToJson() const override;

 private:
  int input_dim_;
  std::vector<int> columns_;
  PredictionFn inner_;
};

// Same learner as the module, fit on the released columns only. An empty set
// gives the zero imitation, the full set the module itself.
absl::StatusOr<std::shared_ptr<const Imitation>> ReleasedColumnsImitation(
    const Module& module, const std::vector<int>& released);

struct PartialReleaseResult {
  PrivacyEstimate partial;
  PrivacyEstimate none;
};

// Released set must be a nonempty proper subset of Bob's columns.
absl::StatusOr<PartialReleaseResult> PartialReleaseExperiment(
    const Module& module, const std::vector<int>& released,
    const RhoConfig& config, std::uint64_t seed);

}  // namespace imitation

#endif  // IMITATION_DP_DP_BRIDGE_H_
