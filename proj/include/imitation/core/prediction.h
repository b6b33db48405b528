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

#ifndef IMITATION_CORE_PREDICTION_H_
#define IMITATION_CORE_PREDICTION_H_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "imitation/core/types.h"
#include "json.hpp"

namespace imitation {

// A fitted, immutable function R^p -> R. Implementations must be safe for
// concurrent Predict() calls.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual int input_dim() const = 0;
  // Caller guarantees x.size() == input_dim().
  virtual double Predict(std::span<const double> x) const = 0;
  virtual std::string algorithm() const = 0;
  virtual nlohmann::json ToJson() const = 0;
};

// Which learner and data produced a prediction function.
struct Provenance {
  std::string learner;
  std::string data_id;
  std::uint64_t label_fingerprint = 0;
  std::uint64_t seed = 0;
};

// f_{M,y}: a shared, immutable prediction function with its provenance.
class PredictionFn {
 public:
  PredictionFn(std::shared_ptr<const Predictor> impl, Provenance provenance)
      : impl_(std::move(impl)), provenance_(std::move(provenance)) {}

  int input_dim() const { return impl_->input_dim(); }
  double operator()(std::span<const double> x) const {
    return impl_->Predict(x);
  }
  const Predictor& impl() const { return *impl_; }
  std::shared_ptr<const Predictor> shared_impl() const { return impl_; }
  const Provenance& provenance() const { return provenance_; }

 private:
  std::shared_ptr<const Predictor> impl_;
  Provenance provenance_;
};

// x -> 0.
class ZeroFunction final : public Predictor {
 public:
  explicit ZeroFunction(int dim) : dim_(dim) {}
  int input_dim() const override { return dim_; }
  double Predict(std::span<const double>) const override { return 0.0; }
  std::string algorithm() const override { return "zero"; }
  nlohmann::json ToJson() const override;

 private:
  int dim_;
};

// x -> w.x + b.
class LinearFunction final : public Predictor {
 public:
  LinearFunction(Eigen::VectorXd weights, double bias = 0.0)
      : weights_(std::move(weights)), bias_(bias) {}
  int input_dim() const override { return static_cast<int>(weights_.size()); }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "linear"; }
  nlohmann::json ToJson() const override;

  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  Eigen::VectorXd weights_;
  double bias_;
};

PredictionFn MakeZeroFn(int dim);
PredictionFn MakeLinearFn(Eigen::VectorXd weights, double bias = 0.0,
                          std::string data_id = "");

// Row-wise application: result[i] = fn(x_i).
absl::StatusOr<LabelVector> Evaluate(const PredictionFn& fn,
                                     const DataMatrix& x);

// Fingerprint of a label vector's exact bits, for provenance records.
std::uint64_t FingerprintLabels(const Eigen::VectorXd& y);

}  // namespace imitation

#endif  // IMITATION_CORE_PREDICTION_H_
