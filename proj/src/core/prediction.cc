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

#include "imitation/core/prediction.h"

#include <cstring>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/rng.h"

namespace imitation {

nlohmann::json ZeroFunction::ToJson() const {
  return {{"algorithm", "zero"}, {"input_dim", dim_}};
}

double LinearFunction::Predict(std::span<const double> x) const {
  double s = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) s += weights_[j] * x[j];
  return s;
}

nlohmann::json LinearFunction::ToJson() const {
  return {{"algorithm", "linear"},
          {"weights", std::vector<double>(weights_.begin(), weights_.end())},
          {"bias", bias_}};
}

PredictionFn MakeZeroFn(int dim) {
  return PredictionFn(std::make_shared<ZeroFunction>(dim),
                      Provenance{.learner = "zero", .data_id = ""});
}

PredictionFn MakeLinearFn(Eigen::VectorXd weights, double bias,
                          std::string data_id) {
  return PredictionFn(
      std::make_shared<LinearFunction>(std::move(weights), bias),
      Provenance{.learner = "linear", .data_id = std::move(data_id)});
}

absl::StatusOr<LabelVector> Evaluate(const PredictionFn& fn,
                                     const DataMatrix& x) {
  if (x.cols() != fn.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("evaluate: function expects ", fn.input_dim(),
                     " features, data has ", x.cols()));
  }
  Eigen::VectorXd out(x.rows());
  for (int i = 0; i < x.rows(); ++i) out[i] = fn(x.row(i));
  return LabelVector::Regression(std::move(out));
}

std::uint64_t FingerprintLabels(const Eigen::VectorXd& y) {
  return StableHash(std::string_view(reinterpret_cast<const char*>(y.data()),
                                     y.size() * sizeof(double)));
}

}  // namespace imitation
