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

// Experiment configuration: a strict JSON document validated against the
// scenario's default config, plus synthetic data generation.

#ifndef IMITATION_HARNESS_CONFIG_H_
#define IMITATION_HARNESS_CONFIG_H_

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "imitation/core/loss.h"
#include "imitation/core/types.h"
#include "imitation/privacy/samplers.h"
#include "json.hpp"

namespace imitation {

struct CovarianceSpec {
  enum class Kind { kIdentity, kAutoregressive, kCrossParty, kCustom };

  Kind kind = Kind::kIdentity;
  // AR: Sigma_ij = r^|i-j|. Cross-party: corr(x_Aj, x_Bj) = r.
  double r = 0.0;
  Eigen::MatrixXd matrix;
};

struct DatasetSpec {
  enum class Distribution { kGaussian, kUniform };

  int n = 100;
  int p_a = 0;
  int p_b = 1;
  Distribution distribution = Distribution::kGaussian;
  CovarianceSpec covariance;
  double noise_sd = 0.1;
  // Uniform features live on [-bound, bound].
  double bound = 1.0;

  int dim() const { return p_a + p_b; }
};

struct ExperimentConfig {
  std::string experiment_id;
  std::string scenario;
  std::uint64_t seed = 0;
  DatasetSpec dataset;
  LossKind loss = LossKind::kScaledL2;
  int n_tasks = 100;
  int n_test = 1000;
  // Scenario parameters, merged over the scenario defaults.
  nlohmann::json params;
  std::string output_dir;
  // Full validated document with every default filled in.
  nlohmann::json document;

  std::string CanonicalText() const;
  // FNV-1a of the compact canonical document, as 16 hex digits.
  std::string Hash() const;
};

// Checks `value` against `schema` (a default document) and returns the merge.
// Unknown keys and type mismatches fail with the field path. An empty array
// or null in the schema accepts any array or any number respectively.
absl::StatusOr<nlohmann::json> MergeStrict(const nlohmann::json& schema,
                                           const nlohmann::json& value,
                                           const std::string& path);

// Typed view of an already merged document. Checks counts, enum values and
// the covariance.
absl::StatusOr<ExperimentConfig> ConfigFromDocument(nlohmann::json document);

// Parses text, looks up the scenario's defaults and validates against them.
absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text);
absl::StatusOr<ExperimentConfig> ParseConfigJson(const nlohmann::json& value);

// Replaces the master seed in both the typed and document views.
void OverrideSeed(ExperimentConfig& config, std::uint64_t seed);

nlohmann::json DatasetToJson(const DatasetSpec& spec);

struct SynthDataset {
  DataMatrix x_a;
  DataMatrix x_b;
  // Joint law of (x_A, x_B) rows.
  FeatureDistribution joint;
  // Gaussian coefficients on the joint features with the spec's noise.
  TaskSampler tasks;
};

absl::StatusOr<FeatureDistribution> JointDistribution(const DatasetSpec& spec);
absl::StatusOr<SynthDataset> SynthesizeDataset(const DatasetSpec& spec,
                                               std::uint64_t seed);

}  // namespace imitation

#endif  // IMITATION_HARNESS_CONFIG_H_
