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

#ifndef IMITATION_PRIVACY_SAMPLERS_H_
#define IMITATION_PRIVACY_SAMPLERS_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "imitation/core/rng.h"
#include "imitation/core/types.h"
#include "json.hpp"

namespace imitation {

// Distribution of feature rows: zero-mean Gaussian with a given covariance,
// or i.i.d. uniform on [-bound, bound].
class FeatureDistribution {
 public:
  enum class Kind { kGaussian, kUniform };

  static FeatureDistribution StandardGaussian(int dim);
  // Fails unless covariance is symmetric positive definite.
  static absl::StatusOr<FeatureDistribution> Gaussian(
      const Eigen::MatrixXd& covariance);
  // Sigma_ij = r^|i-j|.
  static absl::StatusOr<FeatureDistribution> Autoregressive(int dim, double r);
  static absl::StatusOr<FeatureDistribution> Uniform(int dim, double bound);
  // Uniform on [-sqrt(3), sqrt(3)]: identity covariance, bounded support.
  static FeatureDistribution UnitUniform(int dim);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double bound() const { return bound_; }
  Eigen::MatrixXd Covariance() const;

  RowMatrix SampleMatrix(Rng& rng, int n) const;
  DataMatrix Sample(Rng& rng, int n) const;
  nlohmann::json ToJson() const;

 private:
  FeatureDistribution(Kind kind, int dim, Eigen::MatrixXd factor, double bound)
      : kind_(kind), dim_(dim), factor_(std::move(factor)), bound_(bound) {}

  Kind kind_;
  int dim_;
  // Lower Cholesky factor; empty means identity.
  Eigen::MatrixXd factor_;
  double bound_;
};

using TestSampler = FeatureDistribution;

// One draw from the task family: y = intercept + x.beta + noise.
struct LinearTask {
  Eigen::VectorXd beta;
  double intercept = 0.0;
};

// Random linear (affine) task functions plus Gaussian label noise.
struct TaskFamily {
  enum class Coefficients { kGaussian, kUniform, kEqual, kFixed };

  Coefficients coefficients = Coefficients::kGaussian;
  // Gaussian: sd; uniform: half-width; equal: common value.
  double scale = 1.0;
  Eigen::VectorXd fixed_beta;
  // |intercept| ~ Uniform[intercept_min, intercept_max], random sign unless
  // disabled.
  double intercept_min = 0.0;
  double intercept_max = 0.0;
  bool random_intercept_sign = true;
  double noise_sd = 0.0;

  LinearTask Draw(Rng& rng, int dim) const;
  Eigen::VectorXd Labels(const LinearTask& task, const DataMatrix& x,
                         Rng& noise) const;
  nlohmann::json ToJson() const;
};

// p_X . p_{Y|X}. Labels are drawn on the module's own rows; the marginal
// documents the feature law and fixes the dimension.
struct TaskSampler {
  FeatureDistribution marginal;
  TaskFamily family;

  absl::StatusOr<LabelVector> Draw(const DataMatrix& x, Rng& rng) const;
  nlohmann::json ToJson() const;
};

}  // namespace imitation

#endif  // IMITATION_PRIVACY_SAMPLERS_H_
