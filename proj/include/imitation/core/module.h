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

#ifndef IMITATION_CORE_MODULE_H_
#define IMITATION_CORE_MODULE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"
#include "imitation/core/types.h"
#include "json.hpp"

namespace imitation {

enum class Algorithm { kOls, kLogistic, kTree };

// A learning algorithm: maps (X, y) to a prediction function.
//
// Hyperparameters by algorithm (missing keys take the defaults):
//   ols:      intercept (0), allow_rank_deficient (0)
//   logistic: max_iter (100), tol (1e-10), l2 (0), weight_bound (1e3),
//             allow_divergence (0)
//   tree:     max_depth (1), min_leaf (1)
struct LearnerSpec {
  Algorithm algorithm = Algorithm::kOls;
  std::map<std::string, double> hyperparameters;

  static LearnerSpec Ols(bool intercept = false);
  static LearnerSpec Logistic();
  static LearnerSpec Tree(int max_depth, int min_leaf = 1);

  double Get(const std::string& key, double fallback) const;
  std::string Name() const;
  nlohmann::json ToJson() const;
};

// A learner paired with private feature data (and optionally its own label).
// The data pointer is shared read-only with every holder of the module.
struct Module {
  std::string id;
  LearnerSpec learner;
  std::shared_ptr<const DataMatrix> data;
  std::optional<LabelVector> intrinsic_label;

  static absl::StatusOr<Module> Create(
      std::string id, LearnerSpec learner, DataMatrix data,
      std::optional<LabelVector> intrinsic_label = std::nullopt);
  static absl::StatusOr<Module> Create(
      std::string id, LearnerSpec learner,
      std::shared_ptr<const DataMatrix> data,
      std::optional<LabelVector> intrinsic_label = std::nullopt);

  int rows() const { return data->rows(); }
  int cols() const { return data->cols(); }
};

// Fits learner on (x, y). Degenerate fits (rank-deficient OLS, separable
// logistic) fail unless the spec allows them. A design without columns
// always yields the zero function (or the label mean with an intercept).
absl::StatusOr<PredictionFn> FitLearner(const LearnerSpec& learner,
                                        const DataMatrix& x,
                                        const LabelVector& y,
                                        std::uint64_t seed,
                                        const std::string& data_id = "");

// f_{M,y}.
absl::StatusOr<PredictionFn> FitModule(const Module& module,
                                       const LabelVector& y,
                                       std::uint64_t seed = 0);

}  // namespace imitation

#endif  // IMITATION_CORE_MODULE_H_
