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

#ifndef IMITATION_PRIVACY_PRIVACY_METRIC_H_
#define IMITATION_PRIVACY_PRIVACY_METRIC_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/imitation.h"
#include "imitation/core/loss.h"
#include "imitation/core/module.h"
#include "imitation/privacy/samplers.h"
#include "json.hpp"

namespace imitation {

struct PrivacyEstimate {
  double rho_hat = 0.0;
  // Sample standard deviation of per-task losses over sqrt(n_tasks); NaN
  // for a single task.
  double std_error = 0.0;
  int n_tasks = 0;
  int n_test = 0;
  // Test points dropped for a near-zero module output, over all points.
  double skipped_fraction = 0.0;
  std::vector<double> per_task_losses;
  // Same estimate with every pointwise loss capped at 1.
  double capped_rho_hat = 0.0;

  nlohmann::json ToJson() const;
  static std::string CsvHeader();
  std::string CsvRow(const std::string& experiment_id) const;
};

struct RhoConfig {
  TaskSampler tasks;
  TestSampler test;
  LossFn loss;
  int n_tasks = 100;
  int n_test = 1000;
  // Worker threads over task indices. Results do not depend on it.
  int jobs = 1;
};

// Monte-Carlo estimate of rho for (module, imitation). Task t draws its
// label from Rng(seed, "task", t) and its test points from
// Rng(seed, "test", t).
absl::StatusOr<PrivacyEstimate> EstimateRho(const Module& module,
                                            const Imitation& imitation,
                                            const RhoConfig& config,
                                            std::uint64_t seed);

// Inner expectation replaced by the average over the module's own rows.
absl::StatusOr<PrivacyEstimate> EmpiricalRho(
    const Module& module, const Imitation& imitation,
    const std::vector<LabelVector>& tasks, const LossFn& loss,
    std::uint64_t seed = 0);

// rho for a single fixed task: both functions are already fitted.
absl::StatusOr<PrivacyEstimate> FunctionRho(const PredictionFn& target,
                                            const PredictionFn& imitation,
                                            const TestSampler& test,
                                            const LossFn& loss, int n_test,
                                            std::uint64_t seed);

// A member of an imitation class, rebuilt with fresh randomness per trial.
struct ImitationCandidate {
  std::string name;
  std::function<absl::StatusOr<std::shared_ptr<const Imitation>>(
      std::uint64_t trial_seed)>
      build;
};

struct EpsDeltaTrial {
  int trial = 0;
  std::string minimizer;
  double min_rho = 0.0;
  bool at_most_eps = false;
};

struct EpsDeltaVerdict {
  bool breached = false;
  // Estimated Pr[inf rho <= eps].
  double probability = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::vector<EpsDeltaTrial> evidence;

  nlohmann::json ToJson() const;
};

absl::StatusOr<EpsDeltaVerdict> CheckEpsDelta(
    const Module& module, const std::vector<ImitationCandidate>& family,
    const RhoConfig& config, double eps, double delta, int n_trials,
    std::uint64_t seed);

}  // namespace imitation

#endif  // IMITATION_PRIVACY_PRIVACY_METRIC_H_
