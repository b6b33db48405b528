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

#include "imitation/dp/dp_bridge.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/rng.h"

namespace imitation {

absl::StatusOr<LaplaceParams> LaplaceParams::Create(double bound,
                                                    double alpha) {
  if (!(bound > 0) || !std::isfinite(bound) || !(alpha > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("laplace: need bound > 0 and alpha > 0, got b = ", bound,
                     ", alpha = ", alpha));
  }
  LaplaceParams params;
  params.bound = bound;
  params.alpha = alpha;
  params.scale = 2 * bound / alpha;
  params.variance = 8 * bound * bound / (alpha * alpha);
  return params;
}

nlohmann::json LaplaceParams::ToJson() const {
  nlohmann::json out = {{"bound", bound},
                        {"alpha", nullptr},
                        {"scale", scale},
                        {"variance", variance}};
  if (std::isfinite(alpha)) out["alpha"] = alpha;
  return out;
}

absl::StatusOr<PrivatizedData> LaplaceMechanism(const DataMatrix& x,
                                                const LaplaceParams& params,
                                                std::uint64_t seed) {
  std::string offending;
  int violations = 0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      const double v = x.values()(i, j);
      if (std::abs(v) > params.bound) {
        if (++violations <= 5) {
          absl::StrAppend(&offending, violations > 1 ? ", " : "", "(", i, ",",
                          j, ")=", v);
        }
      }
    }
  }
  if (violations > 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "laplace: ", violations, " entries outside [-", params.bound, ", ",
        params.bound, "]: ", offending, violations > 5 ? ", ..." : ""));
  }
  Rng rng(seed, "laplace", 0);
  RowMatrix noisy = x.values();
  for (Eigen::Index i = 0; params.scale > 0 && i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += rng.Laplace(params.scale);
    }
  }
  auto data = DataMatrix::Create(std::move(noisy));
  if (!data.ok()) return data.status();
  return PrivatizedData{std::make_shared<const DataMatrix>(*std::move(data)),
                        params, seed};
}

absl::StatusOr<OlsModel> BiasCorrectedFit(const PrivatizedData& release,
                                          const LabelVector& y,
                                          bool intercept) {
  const DataMatrix& x = *release.x_tilde;
  const int n = x.rows();
  const int p = x.cols();
  if (y.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bias-corrected fit: label length ", y.size(), " vs ", n, " rows"));
  }
  const Eigen::MatrixXd design = DesignMatrix(x, intercept);
  Eigen::MatrixXd gram = design.transpose() * design / n;
  gram.bottomRightCorner(p, p) -=
      release.params.variance * Eigen::MatrixXd::Identity(p, p);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    return absl::FailedPreconditionError(absl::StrCat(
        "bias-corrected fit: corrected Gram matrix is not positive definite "
        "at n = ",
        n, "; not yet identifiable, use more rows"));
  }
  const Eigen::VectorXd theta = llt.solve(design.transpose() * y.values() / n);
  return OlsModel(theta.tail(p), intercept ? theta[0] : 0.0, intercept,
                  p + (intercept ? 1 : 0), false);
}

std::shared_ptr<const Imitation> BiasCorrectedImitation(PrivatizedData release,
                                                        bool intercept) {
  nlohmann::json description = {{"params", release.params.ToJson()},
                                {"intercept", intercept},
                                {"rows", release.x_tilde->rows()}};
  return std::make_shared<CallableImitation>(
      "dp-bias-corrected",
      [release = std::move(release), intercept](
          const LabelVector& y, std::uint64_t) -> absl::StatusOr<PredictionFn> {
        auto model = BiasCorrectedFit(release, y, intercept);
        if (!model.ok()) return model.status();
        return PredictionFn(
            std::make_shared<OlsModel>(*std::move(model)),
            Provenance{.learner = "dp-bias-corrected",
                       .data_id = "x_tilde",
                       .label_fingerprint = FingerprintLabels(y.values())});
      },
      std::move(description));
}

absl::StatusOr<std::vector<DpBreachPoint>> DpBreachExperiment(
    const DpBreachConfig& config, std::uint64_t seed) {
  if (config.n_grid.empty()) {
    return absl::InvalidArgumentError("dp breach: empty n grid");
  }
  std::vector<DpBreachPoint> out;
  for (int n : config.n_grid) {
    if (n < 1) return absl::InvalidArgumentError("dp breach: n must be >= 1");
    Rng rng(seed, "bob-rows", static_cast<std::uint64_t>(n));
    DataMatrix x = config.rho.tasks.marginal.Sample(rng, n);
    auto release = LaplaceMechanism(
        x, config.params,
        Rng(seed, "release", static_cast<std::uint64_t>(n)).NextBits());
    if (!release.ok()) return release.status();
    auto module =
        Module::Create("bob", LearnerSpec::Ols(config.intercept), std::move(x));
    if (!module.ok()) return module.status();
    auto imitation =
        BiasCorrectedImitation(*std::move(release), config.intercept);
    auto estimate = EstimateRho(*module, *imitation, config.rho, seed);
    if (!estimate.ok()) {
      return absl::Status(estimate.status().code(),
                          absl::StrCat("dp breach at n = ", n, ": ",
                                       estimate.status().message()));
    }
    out.push_back({n, *std::move(estimate)});
  }
  return out;
}

double ColumnSubsetFunction::Predict(std::span<const double> x) const {
  std::vector<double> sub(columns_.size());
  for (std::size_t k = 0; k < columns_.size(); ++k) sub[k] = x[columns_[k]];
  return inner_(sub);
}

nlohmann::json ColumnSubsetFunction::ToJson() const {
  return {{"algorithm", "column_subset"},
          {"columns", columns_},
          {"inner", inner_.impl().ToJson()}};
}

absl::StatusOr<std::shared_ptr<const Imitation>> ReleasedColumnsImitation(
    const Module& module, const std::vector<int>& released) {
  const int p = module.cols();
  std::vector<int> columns = released;
  std::sort(columns.begin(), columns.end());
  if (std::adjacent_find(columns.begin(), columns.end()) != columns.end()) {
    return absl::InvalidArgumentError("released columns: duplicate index");
  }
  for (int c : columns) {
    if (c < 0 || c >= p) {
      return absl::InvalidArgumentError(
          absl::StrCat("released columns: index ", c, " outside [0, ", p, ")"));
    }
  }
  if (columns.empty()) return std::make_shared<ZeroImitation>(p);
  auto subset = SelectColumns(*module.data, columns);
  if (!subset.ok()) return subset.status();
  auto data = std::make_shared<const DataMatrix>(*std::move(subset));
  LearnerSpec learner = module.learner;
  nlohmann::json description = {{"released", columns},
                                {"learner", learner.ToJson()}};
  return std::make_shared<CallableImitation>(
      "released-columns",
      [p, columns, data, learner](const LabelVector& y, std::uint64_t seed)
          -> absl::StatusOr<PredictionFn> {
        auto fn = FitLearner(learner, *data, y, seed, "released");
        if (!fn.ok()) return fn.status();
        return PredictionFn(
            std::make_shared<ColumnSubsetFunction>(p, columns, *std::move(fn)),
            Provenance{.learner = "released-columns", .data_id = "released"});
      },
      std::move(description));
}

absl::StatusOr<PartialReleaseResult> PartialReleaseExperiment(
    const Module& module, const std::vector<int>& released,
    const RhoConfig& config, std::uint64_t seed) {
  if (released.empty() || static_cast<int>(released.size()) >= module.cols()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "partial release: released set must be a nonempty proper subset of ",
        module.cols(), " columns, got ", released.size()));
  }
  auto imitation = ReleasedColumnsImitation(module, released);
  if (!imitation.ok()) return imitation.status();
  auto partial = EstimateRho(module, **imitation, config, seed);
  if (!partial.ok()) return partial.status();
  auto none = EstimateRho(module, ZeroImitation(module.cols()), config, seed);
  if (!none.ok()) return none.status();
  return PartialReleaseResult{*std::move(partial), *std::move(none)};
}

}  // namespace imitation
