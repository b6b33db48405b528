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

#ifndef IMITATION_LEARNERS_OLS_H_
#define IMITATION_LEARNERS_OLS_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"
#include "imitation/core/types.h"

namespace imitation {

struct OlsOptions {
  bool intercept = false;
  // Relative pivot threshold used to decide numerical rank.
  double rank_tolerance = 1e-10;
};

// Least-squares fit x -> x.beta (+ intercept).
class OlsModel final : public Predictor {
 public:
  OlsModel(Eigen::VectorXd coefficients, double intercept, bool has_intercept,
           int rank, bool rank_deficient)
      : coefficients_(std::move(coefficients)),
        intercept_(intercept),
        has_intercept_(has_intercept),
        rank_(rank),
        rank_deficient_(rank_deficient) {}

  int input_dim() const override {
    return static_cast<int>(coefficients_.size());
  }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "ols"; }
  nlohmann::json ToJson() const override;

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  double intercept() const { return intercept_; }
  bool has_intercept() const { return has_intercept_; }
  int rank() const { return rank_; }
  // Set when the design had dependent columns (or n < p). The coefficients
  // are then the minimum-norm least-squares solution.
  bool rank_deficient() const { return rank_deficient_; }

 private:
  Eigen::VectorXd coefficients_;
  double intercept_;
  bool has_intercept_;
  int rank_;
  bool rank_deficient_;
};

absl::StatusOr<OlsModel> FitOls(const DataMatrix& x, const LabelVector& y,
                                const OlsOptions& options = {});

// Column-major design matrix, with a leading ones column when requested.
Eigen::MatrixXd DesignMatrix(const DataMatrix& x, bool intercept);

}  // namespace imitation

#endif  // IMITATION_LEARNERS_OLS_H_
