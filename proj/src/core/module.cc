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

#include "imitation/core/module.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/learners/logistic.h"
#include "imitation/learners/ols.h"
#include "imitation/learners/regression_tree.h"

namespace imitation {

LearnerSpec LearnerSpec::Ols(bool intercept) {
  return {Algorithm::kOls, {{"intercept", intercept ? 1.0 : 0.0}}};
}

LearnerSpec LearnerSpec::Logistic() { return {Algorithm::kLogistic, {}}; }

LearnerSpec LearnerSpec::Tree(int max_depth, int min_leaf) {
  return {Algorithm::kTree,
          {{"max_depth", static_cast<double>(max_depth)},
           {"min_leaf", static_cast<double>(min_leaf)}}};
}

double LearnerSpec::Get(const std::string& key, double fallback) const {
  auto it = hyperparameters.find(key);
  return it == hyperparameters.end() ? fallback : it->second;
}

std::string LearnerSpec::Name() const {
  switch (algorithm) {
    case Algorithm::kOls:
      return "ols";
    case Algorithm::kLogistic:
      return "logistic";
    case Algorithm::kTree:
      return "tree";
  }
  return "unknown";
}

nlohmann::json LearnerSpec::ToJson() const {
  return {{"algorithm", Name()}, {"hyperparameters", hyperparameters}};
}

absl::StatusOr<Module> Module::Create(
    std::string id, LearnerSpec learner, DataMatrix data,
    std::optional<LabelVector> intrinsic_label) {
  return Create(std::move(id), std::move(learner),
                std::make_shared<const DataMatrix>(std::move(data)),
                std::move(intrinsic_label));
}

absl::StatusOr<Module> Module::Create(
    std::string id, LearnerSpec learner, std::shared_ptr<const DataMatrix> data,
    std::optional<LabelVector> intrinsic_label) {
  if (data == nullptr) return absl::InvalidArgumentError("module without data");
  if (intrinsic_label.has_value() && intrinsic_label->size() != data->rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("intrinsic label has length ", intrinsic_label->size(),
                     ", data has ", data->rows(), " rows"));
  }
  return Module{std::move(id), std::move(learner), std::move(data),
                std::move(intrinsic_label)};
}

absl::StatusOr<PredictionFn> FitLearner(const LearnerSpec& learner,
                                        const DataMatrix& x,
                                        const LabelVector& y,
                                        std::uint64_t seed,
                                        const std::string& data_id) {
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fit: label length ", y.size(), " does not match ", x.rows(), " rows"));
  }
  Provenance provenance{.learner = learner.Name(),
                        .data_id = data_id,
                        .label_fingerprint = FingerprintLabels(y.values()),
                        .seed = seed};
  switch (learner.algorithm) {
    case Algorithm::kOls: {
      OlsOptions options{.intercept = learner.Get("intercept", 0) != 0};
      auto model = FitOls(x, y, options);
      if (!model.ok()) return model.status();
      if (model->rank_deficient() &&
          learner.Get("allow_rank_deficient", 0) == 0) {
        return absl::FailedPreconditionError(absl::StrCat(
            "fit failure (ols): rank-deficient design, rank ", model->rank(),
            " < ", x.cols() + (options.intercept ? 1 : 0)));
      }
      return PredictionFn(std::make_shared<OlsModel>(*std::move(model)),
                          std::move(provenance));
    }
    case Algorithm::kLogistic: {
      if (x.cols() == 0) {
        return absl::InvalidArgumentError(
            "fit failure (logistic): no features");
      }
      LogisticOptions options{
          .max_iter = static_cast<int>(learner.Get("max_iter", 100)),
          .tol = learner.Get("tol", 1e-10),
          .l2 = learner.Get("l2", 0.0),
          .weight_bound = learner.Get("weight_bound", 1e3)};
      auto fit = FitLogistic(x, y, options);
      if (!fit.ok()) return fit.status();
      if (fit->diverged && learner.Get("allow_divergence", 0) == 0) {
        return absl::FailedPreconditionError(
            "fit failure (logistic): separable data, weights diverged");
      }
      return PredictionFn(std::make_shared<LogisticModel>(fit->model),
                          std::move(provenance));
    }
    case Algorithm::kTree: {
      TreeOptions options{
          .max_depth = static_cast<int>(learner.Get("max_depth", 1)),
          .min_leaf = static_cast<int>(learner.Get("min_leaf", 1))};
      auto tree = FitTree(x, y, options);
      if (!tree.ok()) return tree.status();
      return PredictionFn(std::make_shared<RegressionTree>(*std::move(tree)),
                          std::move(provenance));
    }
  }
  return absl::InternalError("unknown algorithm");
}

absl::StatusOr<PredictionFn> FitModule(const Module& module,
                                       const LabelVector& y,
                                       std::uint64_t seed) {
  return FitLearner(module.learner, *module.data, y, seed, module.id);
}

}  // namespace imitation
