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

#ifndef IMITATION_CORE_INFORMATION_SET_H_
#define IMITATION_CORE_INFORMATION_SET_H_

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"
#include "json.hpp"

namespace imitation {

// Facts the adversary holds that were not obtained through the query channel.
enum class SideInfoTag {
  kModelClass,
  kFeatureCovariance,
  kNoiseLevel,
  kResponseMode,
  kFeatureBox,
  kTaskOracle,
  kFunctionFamily,
  kPrivatizedRelease,
  kReleasedColumns,
};

std::string SideInfoName(SideInfoTag tag);

// The service side of Stage II: evaluates a fitted function on the owner's
// features and hands back only the scalar.
class StageTwoEndpoint {
 public:
  explicit StageTwoEndpoint(PredictionFn fn) : fn_(std::move(fn)) {}
  absl::StatusOr<double> Evaluate(std::span<const double> x) const;
  int input_dim() const { return fn_.input_dim(); }
  // Exposes the endpoint as a prediction function over the owner's features
  // for replay in an imitation system (k2 = unbounded).
  PredictionFn AsPredictionFn() const { return fn_; }

 private:
  PredictionFn fn_;
};

// Response to a Stage I label query: a length-n vector (fitted values or
// residuals) plus the endpoint that serves Stage II for that label.
struct LabelResponse {
  Eigen::VectorXd values;
  std::shared_ptr<const StageTwoEndpoint> endpoint;
};

using Response = std::variant<double, std::string, LabelResponse>;

// Feature-row prediction query, Stage I label query, or a call to the
// task-generation oracle granted as side information.
enum class QueryKind { kPrediction, kLabel, kOracle };

// (queries sent, responses returned, side information).
struct InformationSet {
  std::vector<QueryKind> kinds;
  std::vector<Eigen::VectorXd> queries;
  std::vector<Response> responses;
  std::map<SideInfoTag, nlohmann::json> side_info;

  int size() const { return static_cast<int>(queries.size()); }
  int Count(QueryKind kind) const;
  void Record(QueryKind kind, Eigen::VectorXd query, Response response) {
    kinds.push_back(kind);
    queries.push_back(std::move(query));
    responses.push_back(std::move(response));
  }
  void AddSideInfo(SideInfoTag tag, nlohmann::json value) {
    side_info[tag] = std::move(value);
  }
  std::vector<std::string> SideInfoTags() const;
};

}  // namespace imitation

#endif  // IMITATION_CORE_INFORMATION_SET_H_
