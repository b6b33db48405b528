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

#include "imitation/core/loss.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {

bool LossFn::IsDegenerate(double b) const {
  return kind == LossKind::kScaledL2 && std::abs(b) <= kDenominatorEpsilon;
}

absl::StatusOr<double> Loss(LossFn loss, double a, double b) {
  switch (loss.kind) {
    case LossKind::kScaledL2: {
      if (loss.IsDegenerate(b)) {
        return absl::InvalidArgumentError(
            absl::StrCat("scaled-L2 degenerate denominator: a=", a, " b=", b));
      }
      const double d = a - b;
      return (d * d) / (b * b);
    }
    case LossKind::kZeroOne:
      return a != b ? 1.0 : 0.0;
    case LossKind::kSquared: {
      const double d = a - b;
      return d * d;
    }
  }
  return absl::InternalError("unknown loss");
}

std::string LossName(LossKind kind) {
  switch (kind) {
    case LossKind::kScaledL2:
      return "scaled-l2";
    case LossKind::kZeroOne:
      return "zero-one";
    case LossKind::kSquared:
      return "squared";
  }
  return "unknown";
}

absl::StatusOr<LossKind> ParseLossKind(std::string_view name) {
  if (name == "scaled-l2") return LossKind::kScaledL2;
  if (name == "zero-one") return LossKind::kZeroOne;
  if (name == "squared") return LossKind::kSquared;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown loss '", std::string(name), "'"));
}

}  // namespace imitation
