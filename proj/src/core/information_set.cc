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

#include "imitation/core/information_set.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {

std::string SideInfoName(SideInfoTag tag) {
  switch (tag) {
    case SideInfoTag::kModelClass:
      return "model-class";
    case SideInfoTag::kFeatureCovariance:
      return "covariance";
    case SideInfoTag::kNoiseLevel:
      return "noise-level";
    case SideInfoTag::kResponseMode:
      return "response-mode";
    case SideInfoTag::kFeatureBox:
      return "feature-box";
    case SideInfoTag::kTaskOracle:
      return "task-oracle";
    case SideInfoTag::kFunctionFamily:
      return "function-family";
    case SideInfoTag::kPrivatizedRelease:
      return "privatized-release";
    case SideInfoTag::kReleasedColumns:
      return "released-columns";
  }
  return "unknown";
}

absl::StatusOr<double> StageTwoEndpoint::Evaluate(
    std::span<const double> x) const {
  if (static_cast<int>(x.size()) != fn_.input_dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "stage II: expected ", fn_.input_dim(), " features, got ", x.size()));
  }
  return fn_(x);
}

int InformationSet::Count(QueryKind kind) const {
  int count = 0;
  for (QueryKind k : kinds) count += k == kind ? 1 : 0;
  return count;
}

std::vector<std::string> InformationSet::SideInfoTags() const {
  std::vector<std::string> out;
  for (const auto& [tag, value] : side_info) out.push_back(SideInfoName(tag));
  return out;
}

}  // namespace imitation
