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

#include "imitation/attacks/api.h"

#include <span>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/rng.h"
#include "imitation/learners/linear_classifier.h"
#include "imitation/learners/logistic.h"
#include "imitation/learners/regression_tree.h"

namespace imitation {
namespace {

std::span<const double> AsSpan(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

bool BitEqual(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::string KindName(QueryKind kind) {
  switch (kind) {
    case QueryKind::kPrediction:
      return "prediction";
    case QueryKind::kLabel:
      return "label";
    case QueryKind::kOracle:
      return "oracle";
  }
  return "unknown";
}

bool IsStageOneMode(ResponseMode mode) {
  return mode == ResponseMode::kResidual || mode == ResponseMode::kFitted;
}

}  // namespace

std::string ResponseModeName(ResponseMode mode) {
  switch (mode) {
    case ResponseMode::kValue:
      return "value";
    case ResponseMode::kProbability:
      return "probability";
    case ResponseMode::kLabel:
      return "label";
    case ResponseMode::kLeafId:
      return "leaf-id";
    case ResponseMode::kResidual:
      return "residual";
    case ResponseMode::kFitted:
      return "fitted";
  }
  return "unknown";
}

std::shared_ptr<Target> MakeTarget(std::string id, Module module,
                                   double oracle_noise_sd) {
  return std::make_shared<Target>(Target{.id = std::move(id),
                                         .module = std::move(module),
                                         .pretrained = std::nullopt,
                                         .oracle_noise_sd = oracle_noise_sd});
}

std::shared_ptr<Target> MakePretrainedTarget(std::string id, PredictionFn fn) {
  return std::make_shared<Target>(Target{.id = std::move(id),
                                         .module = Module{},
                                         .pretrained = std::move(fn),
                                         .oracle_noise_sd = 0.0});
}

ApiView::ApiView(std::shared_ptr<Target> target, ResponseMode mode,
                 std::optional<int> budget, std::uint64_t seed)
    : target_(std::move(target)), mode_(mode), budget_(budget), seed_(seed) {
  log_.AddSideInfo(SideInfoTag::kResponseMode, ResponseModeName(mode));
}

absl::Status ApiView::Charge() {
  if (budget_.has_value() && used_ >= *budget_) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "api ", target_->id, ": query budget of ", *budget_, " exhausted"));
  }
  ++used_;
  return absl::OkStatus();
}

absl::StatusOr<PredictionFn> ApiView::Served() {
  if (target_->pretrained.has_value()) return *target_->pretrained;
  const Module& module = target_->module;
  if (module.data == nullptr || !module.intrinsic_label.has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "api ", target_->id, ": prediction mode needs a trained model"));
  }
  if (cached_fn_.has_value() && cached_data_ == module.data &&
      cached_fn_->provenance().label_fingerprint ==
          FingerprintLabels(module.intrinsic_label->values())) {
    return *cached_fn_;
  }
  auto fn = FitModule(module, *module.intrinsic_label, seed_);
  if (!fn.ok()) return fn.status();
  cached_data_ = module.data;
  cached_fn_ = *fn;
  return *std::move(fn);
}

absl::StatusOr<Response> ApiView::Predict(const Eigen::VectorXd& x) {
  if (IsStageOneMode(mode_)) {
    return absl::FailedPreconditionError(
        absl::StrCat("api ", target_->id, ": ", ResponseModeName(mode_),
                     " mode answers label vectors, not feature rows"));
  }
  auto fn = Served();
  if (!fn.ok()) return fn.status();
  if (x.size() != fn->input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("api ", target_->id, ": expected ", fn->input_dim(),
                     " features, got ", x.size()));
  }
  if (!x.allFinite()) {
    return absl::InvalidArgumentError("api: query row has non-finite entries");
  }
  const Predictor& impl = fn->impl();
  const auto* logistic = dynamic_cast<const LogisticModel*>(&impl);
  const auto* classifier = dynamic_cast<const LinearClassifier*>(&impl);
  const auto* tree = dynamic_cast<const RegressionTree*>(&impl);
  if (mode_ == ResponseMode::kProbability && logistic == nullptr) {
    return absl::FailedPreconditionError(
        "api: probability mode needs a logistic target");
  }
  if (mode_ == ResponseMode::kLeafId && tree == nullptr) {
    return absl::FailedPreconditionError(
        "api: leaf-id mode needs a tree target");
  }
  if (absl::Status s = Charge(); !s.ok()) return s;

  Response response;
  switch (mode_) {
    case ResponseMode::kValue:
      response = (*fn)(AsSpan(x));
      break;
    case ResponseMode::kProbability:
      response = logistic->Probability(AsSpan(x));
      break;
    case ResponseMode::kLabel:
      if (logistic != nullptr) {
        response = logistic->Margin(AsSpan(x)) >= 0 ? 1.0 : -1.0;
      } else if (classifier != nullptr) {
        response = static_cast<double>(classifier->Classify(AsSpan(x)));
      } else {
        response = (*fn)(AsSpan(x)) >= 0 ? 1.0 : -1.0;
      }
      break;
    case ResponseMode::kLeafId:
      response = tree->LeafId(AsSpan(x));
      break;
    case ResponseMode::kResidual:
    case ResponseMode::kFitted:
      break;
  }
  log_.Record(QueryKind::kPrediction, x, response);
  return response;
}

absl::StatusOr<LabelResponse> ApiView::Label(const Eigen::VectorXd& y) {
  if (!IsStageOneMode(mode_)) {
    return absl::FailedPreconditionError(
        absl::StrCat("api ", target_->id, ": ", ResponseModeName(mode_),
                     " mode answers feature rows, not label vectors"));
  }
  const Module& module = target_->module;
  if (module.data == nullptr) {
    return absl::FailedPreconditionError(
        absl::StrCat("api ", target_->id, ": no private data to fit"));
  }
  if (y.size() != module.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("api ", target_->id, ": label length ", y.size(), " vs ",
                     module.rows(), " rows"));
  }
  if (absl::Status s = Charge(); !s.ok()) return s;
  auto fn = FitModule(module, LabelVector::Regression(y),
                      Rng(seed_, "label", used_).NextBits());
  if (!fn.ok()) return fn.status();
  auto fitted = Evaluate(*fn, *module.data);
  if (!fitted.ok()) return fitted.status();
  LabelResponse response{
      .values = mode_ == ResponseMode::kFitted
                    ? fitted->values()
                    : Eigen::VectorXd(y - fitted->values()),
      .endpoint = std::make_shared<const StageTwoEndpoint>(*fn)};
  log_.Record(QueryKind::kLabel, y, response);
  return response;
}

absl::StatusOr<Eigen::VectorXd> ApiView::OracleLabel(
    const Eigen::VectorXd& beta) {
  const Module& module = target_->module;
  if (module.data == nullptr) {
    return absl::FailedPreconditionError(
        absl::StrCat("api ", target_->id, ": no private data for the oracle"));
  }
  if (beta.size() != module.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("api ", target_->id, ": oracle coefficient length ",
                     beta.size(), " vs ", module.cols(), " features"));
  }
  Rng rng(seed_, "oracle", oracle_calls_++);
  Eigen::VectorXd y = module.data->values() * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y[i] += target_->oracle_noise_sd * rng.Normal();
  }
  log_.Record(QueryKind::kOracle, beta, LabelResponse{y, nullptr});
  log_.AddSideInfo(
      SideInfoTag::kTaskOracle,
      {{"noise_sd", target_->oracle_noise_sd}, {"calls", oracle_calls_}});
  return y;
}

absl::StatusOr<const Response*> ReplayChannel::Next(
    QueryKind kind, const Eigen::VectorXd& query) {
  if (cursor_ >= log_.size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "replay: log has ", log_.size(), " entries; attack asked for more"));
  }
  const int i = cursor_;
  if (log_.kinds[i] != kind || !BitEqual(log_.queries[i], query)) {
    return absl::DataLossError(
        absl::StrCat("replay: divergence at entry ", i, " (logged ",
                     KindName(log_.kinds[i]), ", asked ", KindName(kind), ")"));
  }
  ++cursor_;
  return &log_.responses[i];
}

absl::StatusOr<Response> ReplayChannel::Predict(const Eigen::VectorXd& x) {
  auto r = Next(QueryKind::kPrediction, x);
  if (!r.ok()) return r.status();
  ++used_;
  return **r;
}

absl::StatusOr<LabelResponse> ReplayChannel::Label(const Eigen::VectorXd& y) {
  auto r = Next(QueryKind::kLabel, y);
  if (!r.ok()) return r.status();
  ++used_;
  return std::get<LabelResponse>(**r);
}

absl::StatusOr<Eigen::VectorXd> ReplayChannel::OracleLabel(
    const Eigen::VectorXd& beta) {
  auto r = Next(QueryKind::kOracle, beta);
  if (!r.ok()) return r.status();
  return std::get<LabelResponse>(**r).values;
}

nlohmann::json ImitationSystem::Describe() const {
  return {{"name", hacker_},
          {"parameters", parameters_},
          {"queries", information_.Count(QueryKind::kPrediction) +
                          information_.Count(QueryKind::kLabel)},
          {"side_info", information_.SideInfoTags()}};
}

nlohmann::json AttackRecord::ToJson(bool include_timing) const {
  nlohmann::json out = {{"attack", attack},
                        {"target", target},
                        {"queries", queries},
                        {"side_info", side_info},
                        {"rho_hat", nullptr}};
  if (rho_hat.has_value()) out["rho_hat"] = *rho_hat;
  if (include_timing) out["wall_seconds"] = wall_seconds;
  return out;
}

AttackRecord MakeRecord(const std::string& attack, const Channel& channel,
                        const std::string& target_id) {
  return {.attack = attack,
          .target = target_id,
          .queries = channel.queries_used(),
          .side_info = channel.log().SideInfoTags(),
          .rho_hat = std::nullopt,
          .wall_seconds = 0.0};
}

}  // namespace imitation
