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

#include "imitation/learners/logistic.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/learners/ols.h"

namespace imitation {
namespace {

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double MeanLogLikelihood(const Eigen::MatrixXd& design,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& theta,
                         double l2) {
  const Eigen::VectorXd z = design * theta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    ll += y[i] * z[i] - Softplus(z[i]);
  }
  ll /= static_cast<double>(z.size());
  // The bias (column 0) is not penalized.
  ll -= 0.5 * l2 * theta.tail(theta.size() - 1).squaredNorm();
  return ll;
}

}  // namespace

double Sigmoid(double z) {
  double p;
  if (z >= 0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  // Keep the output inside the open interval (0, 1).
  return std::clamp(p, std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

double Logit(double p) { return std::log(p) - std::log1p(-p); }

double LogisticModel::Margin(std::span<const double> x) const {
  double z = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j] * x[j];
  return z;
}

double LogisticModel::Probability(std::span<const double> x) const {
  return Sigmoid(Margin(x));
}

double LogisticModel::Predict(std::span<const double> x) const {
  if (output_ == LogisticOutput::kLabel) return Margin(x) >= 0 ? 1.0 : 0.0;
  return Probability(x);
}

nlohmann::json LogisticModel::ToJson() const {
  return {{"algorithm", "logistic"},
          {"hyperparameters",
           {{"output",
             output_ == LogisticOutput::kLabel ? "label" : "probability"}}},
          {"weights", std::vector<double>(weights_.begin(), weights_.end())},
          {"bias", bias_}};
}

absl::StatusOr<LogisticFit> FitLogistic(const DataMatrix& x,
                                        const LabelVector& y,
                                        const LogisticOptions& options) {
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fit_logistic: ", y.size(), " labels for ", x.rows(), " rows"));
  }
  for (int i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("fit_logistic: label ", i, " is not 0/1: ", y[i]));
    }
  }
  const Eigen::MatrixXd design = DesignMatrix(x, /*intercept=*/true);
  const Eigen::Index k = design.cols();
  const double n = static_cast<double>(design.rows());
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(k, options.l2);
  penalty[0] = 0.0;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
  double ll = MeanLogLikelihood(design, y.values(), theta, options.l2);
  LogisticFit fit{.model = LogisticModel(Eigen::VectorXd::Zero(x.cols()), 0.0)};
  fit.log_likelihood_trace.push_back(ll);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd z = design * theta;
    Eigen::VectorXd prob(z.size());
    Eigen::VectorXd curvature(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      prob[i] = Sigmoid(z[i]);
      curvature[i] = prob[i] * (1.0 - prob[i]);
    }
    const Eigen::VectorXd grad = design.transpose() * (y.values() - prob) / n -
                                 penalty.cwiseProduct(theta);
    fit.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    if (fit.gradient_norm <= options.tol) {
      fit.converged = true;
      break;
    }
    Eigen::MatrixXd hessian =
        design.transpose() * curvature.asDiagonal() * design / n;
    hessian.diagonal() += penalty;
    // A small jitter keeps the solve defined when curvature vanishes.
    hessian.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = hessian.ldlt().solve(grad);
    // Predicted gain below the resolution of ll: the gradient is at its
    // rounding floor.
    if (0.5 * grad.dot(step) <=
            4 * std::numeric_limits<double>::epsilon() * std::max(1.0, -ll) &&
        fit.gradient_norm <= std::sqrt(options.tol)) {
      fit.converged = true;
      break;
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double candidate_ll = ll;
    while (t > 1e-12) {
      candidate = theta + t * step;
      candidate_ll =
          MeanLogLikelihood(design, y.values(), candidate, options.l2);
      if (std::isfinite(candidate_ll) && candidate_ll >= ll) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    fit.iterations = iter + 1;
    if (!accepted) {
      // No ascent direction left at machine precision.
      fit.converged = fit.gradient_norm <= std::sqrt(options.tol);
      break;
    }
    theta = candidate;
    ll = candidate_ll;
    fit.log_likelihood_trace.push_back(ll);
    if (theta.lpNorm<Eigen::Infinity>() > options.weight_bound) {
      theta *= options.weight_bound / theta.lpNorm<Eigen::Infinity>();
      fit.diverged = true;
      break;
    }
    if (iter + 1 == options.max_iter) fit.hit_max_iter = true;
  }
  // A maximizer that classifies every training row strictly correctly can
  // only exist when the classes are separable, in which case the unpenalized
  // likelihood has no finite maximum.
  if (options.l2 == 0.0 && !fit.diverged) {
    const Eigen::VectorXd z = design * theta;
    bool separated = true;
    for (Eigen::Index i = 0; i < z.size() && separated; ++i) {
      separated = (2.0 * y[i] - 1.0) * z[i] > 0.0;
    }
    fit.diverged = separated;
  }
  if (fit.diverged) fit.converged = false;
  fit.model = LogisticModel(theta.tail(k - 1), theta[0]);
  return fit;
}

}  // namespace imitation
