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

#ifndef IMITATION_HARNESS_REPORT_H_
#define IMITATION_HARNESS_REPORT_H_

#include <functional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "imitation/harness/config.h"
#include "imitation/harness/scenario.h"
#include "json.hpp"

namespace imitation {

inline constexpr char kLibraryVersion[] = "0.1.0";

struct RunOptions {
  // Worker threads for rho estimation. Results do not depend on it.
  int jobs = 1;
  // Progress lines; ignored when empty.
  std::function<void(const std::string&)> log;
};

struct ExperimentReport {
  ExperimentConfig config;
  ScenarioOutput output;
  double wall_seconds = 0.0;

  bool passed() const { return output.AllPassed(); }
  // Everything a rerun must reproduce byte for byte: the config echo, its
  // hash, results, estimates, assertions and trace digests. No timing.
  nlohmann::json Payload() const;
  // Payload plus wall time and versions.
  nlohmann::json ToJson() const;
};

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const RunOptions& options = {});

// Writes report.json, estimates.csv and one CSV per trace into `dir`,
// creating it if needed.
absl::Status WriteReport(const ExperimentReport& report,
                         const std::string& dir);

struct ReplayResult {
  bool identical = false;
  // First differing top-level payload key, empty when identical.
  std::string first_difference;
  ExperimentReport rerun;
};

// Re-parses the config echoed in a report.json, checks its hash, reruns it
// and compares the payloads.
absl::StatusOr<ReplayResult> ReplayReport(const std::string& report_path,
                                          const RunOptions& options = {});

// Numeric parts of a report JSON without timing and versions.
nlohmann::json StripTiming(nlohmann::json report);

}  // namespace imitation

#endif  // IMITATION_HARNESS_REPORT_H_
