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

#include "imitation/core/imitation.h"

namespace imitation {

std::shared_ptr<const Imitation> LearnerImitation::SelfOf(
    const Module& module) {
  return std::make_shared<LearnerImitation>("self:" + module.id, module.learner,
                                            module.data);
}

absl::StatusOr<PredictionFn> LearnerImitation::Imitate(
    const LabelVector& y, std::uint64_t seed) const {
  return FitLearner(learner_, *data_, y, seed, name_);
}

nlohmann::json LearnerImitation::Describe() const {
  return {{"name", name_},
          {"learner", learner_.ToJson()},
          {"rows", data_->rows()},
          {"cols", data_->cols()}};
}

nlohmann::json CallableImitation::Describe() const {
  nlohmann::json out = description_;
  out["name"] = name_;
  return out;
}

}  // namespace imitation
