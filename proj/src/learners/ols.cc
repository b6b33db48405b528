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

#include "imitation/learners/ols.h"

#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {

double OlsModel::Predict(std::span<const double> x) const {
  double s = intercept_;
  for (std::size_t j = 0; j < x.size(); ++j) s += coefficients_[j] * x[j];
  return s;
}

nlohmann::json OlsModel::ToJson() const {
  return {{"algorithm", "ols"},
          {"hyperparameters", {{"intercept", has_intercept_}}},
          {"coefficients",
           std::vector<double>(coefficients_.begin(), coefficients_.end())},
          {"intercept", intercept_},
          {"rank", rank_},
          {"rank_deficient", rank_deficient_}};
}

Eigen::MatrixXd DesignMatrix(const DataMatrix& x, bool intercept) {
  const int offset = intercept ? 1 : 0;
  Eigen::MatrixXd d(x.rows(), x.cols() + offset);
  if (intercept) d.col(0).setOnes();
  d.rightCols(x.cols()) = x.values();
  return d;
}

absl::StatusOr<OlsModel> FitOls(const DataMatrix& x, const LabelVector& y,
                                const OlsOptions& options) {
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("fit_ols: ", y.size(), " labels for ", x.rows(), " rows"));
  }
  const Eigen::MatrixXd design = DesignMatrix(x, options.intercept);
  const int cols = static_cast<int>(design.cols());
  if (cols == 0) {
    return OlsModel(Eigen::VectorXd(0), 0.0, false, 0, false);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(options.rank_tolerance);
  cod.compute(design);
  const Eigen::VectorXd beta = cod.solve(y.values());
  const int rank = static_cast<int>(cod.rank());
  return OlsModel(beta.tail(x.cols()), options.intercept ? beta[0] : 0.0,
                  options.intercept, rank, rank < cols);
}

}  // namespace imitation
