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

#ifndef IMITATION_CORE_LOSS_H_
#define IMITATION_CORE_LOSS_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace imitation {

// Module outputs with |b| at or below this are degenerate for scaled-L2.
inline constexpr double kDenominatorEpsilon = 1e-12;

enum class LossKind { kScaledL2, kZeroOne, kSquared };

// L(a, b) where a is the imitation's output and b is the module's output.
//   scaled-L2: (a - b)^2 / b^2, normalized by the module output
//   zero-one:  1{a != b}
//   squared:   (a - b)^2
struct LossFn {
  LossKind kind = LossKind::kScaledL2;

  // True when (a, b) has to be skipped instead of scored.
  bool IsDegenerate(double b) const;
};

absl::StatusOr<double> Loss(LossFn loss, double a, double b);

std::string LossName(LossKind kind);
absl::StatusOr<LossKind> ParseLossKind(std::string_view name);

}  // namespace imitation

#endif  // IMITATION_CORE_LOSS_H_
