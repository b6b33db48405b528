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

#include "imitation/privacy/samplers.h"

#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {
namespace {

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

FeatureDistribution FeatureDistribution::StandardGaussian(int dim) {
  return FeatureDistribution(Kind::kGaussian, dim, Eigen::MatrixXd(), 0.0);
}

absl::StatusOr<FeatureDistribution> FeatureDistribution::Gaussian(
    const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    return absl::InvalidArgumentError("covariance must be square and nonempty");
  }
  if (!covariance.allFinite() ||
      (covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    return absl::InvalidArgumentError(
        "covariance must be finite and symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    return absl::InvalidArgumentError("covariance is not positive definite");
  }
  return FeatureDistribution(
      Kind::kGaussian, static_cast<int>(covariance.rows()), llt.matrixL(), 0.0);
}

absl::StatusOr<FeatureDistribution> FeatureDistribution::Autoregressive(
    int dim, double r) {
  if (dim < 1 || !(std::abs(r) < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("AR covariance needs dim >= 1 and |r| < 1, got r=", r));
  }
  Eigen::MatrixXd cov(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) cov(i, j) = std::pow(r, std::abs(i - j));
  }
  return Gaussian(cov);
}

absl::StatusOr<FeatureDistribution> FeatureDistribution::Uniform(int dim,
                                                                 double bound) {
  if (dim < 1 || !(bound > 0) || !std::isfinite(bound)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "uniform features need dim >= 1 and bound > 0, got ", bound));
  }
  return FeatureDistribution(Kind::kUniform, dim, Eigen::MatrixXd(), bound);
}

FeatureDistribution FeatureDistribution::UnitUniform(int dim) {
  return FeatureDistribution(Kind::kUniform, dim, Eigen::MatrixXd(),
                             std::sqrt(3.0));
}

Eigen::MatrixXd FeatureDistribution::Covariance() const {
  if (kind_ == Kind::kUniform) {
    return Eigen::MatrixXd::Identity(dim_, dim_) * (bound_ * bound_ / 3.0);
  }
  if (factor_.size() == 0) return Eigen::MatrixXd::Identity(dim_, dim_);
  return factor_ * factor_.transpose();
}

RowMatrix FeatureDistribution::SampleMatrix(Rng& rng, int n) const {
  RowMatrix out(n, dim_);
  if (kind_ == Kind::kUniform) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < dim_; ++j) out(i, j) = rng.Uniform(-bound_, bound_);
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim_; ++j) out(i, j) = rng.Normal();
  }
  if (factor_.size() != 0) out = out * factor_.transpose();
  return out;
}

DataMatrix FeatureDistribution::Sample(Rng& rng, int n) const {
  return *DataMatrix::Create(SampleMatrix(rng, n));
}

nlohmann::json FeatureDistribution::ToJson() const {
  nlohmann::json out = {{"dim", dim_}};
  if (kind_ == Kind::kUniform) {
    out["kind"] = "uniform";
    out["bound"] = bound_;
  } else {
    out["kind"] = "gaussian";
    const Eigen::MatrixXd cov = Covariance();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i) rows.push_back(ToStd(cov.row(i)));
    out["covariance"] = rows;
  }
  return out;
}

LinearTask TaskFamily::Draw(Rng& rng, int dim) const {
  LinearTask task;
  switch (coefficients) {
    case Coefficients::kGaussian:
      task.beta.resize(dim);
      for (int j = 0; j < dim; ++j) task.beta[j] = scale * rng.Normal();
      break;
    case Coefficients::kUniform:
      task.beta.resize(dim);
      for (int j = 0; j < dim; ++j) task.beta[j] = rng.Uniform(-scale, scale);
      break;
    case Coefficients::kEqual:
      task.beta = Eigen::VectorXd::Constant(dim, scale);
      break;
    case Coefficients::kFixed:
      task.beta = fixed_beta;
      break;
  }
  if (intercept_max > 0) {
    const double sign = random_intercept_sign ? rng.Sign() : 1.0;
    task.intercept = sign * rng.Uniform(intercept_min, intercept_max);
  }
  return task;
}

Eigen::VectorXd TaskFamily::Labels(const LinearTask& task, const DataMatrix& x,
                                   Rng& noise) const {
  Eigen::VectorXd y = x.values() * task.beta;
  y.array() += task.intercept;
  if (noise_sd > 0) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y[i] += noise_sd * noise.Normal();
  }
  return y;
}

nlohmann::json TaskFamily::ToJson() const {
  static constexpr const char* kNames[] = {"gaussian", "uniform", "equal",
                                           "fixed"};
  nlohmann::json out = {
      {"coefficients", kNames[static_cast<int>(coefficients)]},
      {"scale", scale},
      {"intercept_min", intercept_min},
      {"intercept_max", intercept_max},
      {"random_intercept_sign", random_intercept_sign},
      {"noise_sd", noise_sd}};
  if (coefficients == Coefficients::kFixed) out["beta"] = ToStd(fixed_beta);
  return out;
}

absl::StatusOr<LabelVector> TaskSampler::Draw(const DataMatrix& x,
                                              Rng& rng) const {
  if (x.cols() != marginal.dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("task sampler has dimension ", marginal.dim(),
                     ", data has ", x.cols()));
  }
  if (family.coefficients == TaskFamily::Coefficients::kFixed &&
      family.fixed_beta.size() != x.cols()) {
    return absl::InvalidArgumentError("fixed task beta has wrong length");
  }
  Rng coefficient_rng = rng.Split("coefficients");
  Rng noise_rng = rng.Split("noise");
  const LinearTask task = family.Draw(coefficient_rng, x.cols());
  return LabelVector::Regression(family.Labels(task, x, noise_rng));
}

nlohmann::json TaskSampler::ToJson() const {
  return {{"marginal", marginal.ToJson()}, {"family", family.ToJson()}};
}

}  // namespace imitation
