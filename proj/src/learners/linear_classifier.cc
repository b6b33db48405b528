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

#include "imitation/learners/linear_classifier.h"

#include <cmath>
#include <vector>

#include "absl/status/status.h"

namespace imitation {

absl::StatusOr<LinearClassifier> LinearClassifier::Create(
    Eigen::VectorXd weights, double offset) {
  if (!(weights.norm() > 0) || !weights.allFinite() || !std::isfinite(offset)) {
    return absl::InvalidArgumentError(
        "linear classifier needs finite weights with positive norm");
  }
  return LinearClassifier(std::move(weights), offset);
}

double LinearClassifier::Margin(std::span<const double> x) const {
  double m = offset_;
  for (std::size_t j = 0; j < x.size(); ++j) m += weights_[j] * x[j];
  return m;
}

int LinearClassifier::Classify(std::span<const double> x) const {
  return Margin(x) >= 0 ? 1 : -1;
}

nlohmann::json LinearClassifier::ToJson() const {
  return {{"algorithm", "linear_classifier"},
          {"weights", std::vector<double>(weights_.begin(), weights_.end())},
          {"offset", offset_}};
}

}  // namespace imitation
