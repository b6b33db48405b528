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

// Registry of runnable experiment scenarios.

#ifndef IMITATION_HARNESS_SCENARIO_H_
#define IMITATION_HARNESS_SCENARIO_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/harness/config.h"
#include "imitation/privacy/privacy_metric.h"
#include "json.hpp"

namespace imitation {

struct Assertion {
  std::string name;
  bool passed = false;
  nlohmann::json detail;

  nlohmann::json ToJson() const;
};

// Everything a scenario produces. Must be a deterministic function of the
// config; wall-clock time is kept out of it.
struct ScenarioOutput {
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::pair<std::string, PrivacyEstimate>> estimates;
  // File name -> CSV text.
  std::vector<std::pair<std::string, std::string>> traces;
  std::vector<Assertion> assertions;

  void Check(std::string name, bool passed, nlohmann::json detail = {});
  bool AllPassed() const;
};

struct ScenarioContext {
  const ExperimentConfig& config;
  int jobs = 1;
  std::function<void(const std::string&)> log = [](const std::string&) {};

  const nlohmann::json& param(const std::string& key) const {
    return config.params.at(key);
  }
  RhoConfig Rho(TaskSampler tasks, TestSampler test) const;
};

using ScenarioFn =
    std::function<absl::StatusOr<ScenarioOutput>(const ScenarioContext&)>;

struct Scenario {
  std::string name;
  std::string description;
  // Library operations the scenario exercises.
  std::vector<std::string> operations;
  // Complete default document; also the schema for user configs.
  nlohmann::json defaults;
  ScenarioFn run;
};

// Sorted by name.
const std::vector<Scenario>& ScenarioRegistry();
const Scenario* FindScenario(const std::string& name);

// Names, descriptions, operations and parameter keys, in registry order.
nlohmann::json ScenarioListing();

// Helper for scenario definitions: a full default document.
nlohmann::json DefaultDocument(const std::string& scenario,
                               const DatasetSpec& dataset, LossKind loss,
                               int n_tasks, int n_test, nlohmann::json params);

}  // namespace imitation

#endif  // IMITATION_HARNESS_SCENARIO_H_
