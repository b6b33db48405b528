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

#include "imitation/harness/scenario.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "imitation/core/format.h"
#include "scenarios_internal.h"

namespace imitation {

nlohmann::json Assertion::ToJson() const {
  return {{"name", name}, {"passed", passed}, {"detail", detail}};
}

void ScenarioOutput::Check(std::string name, bool passed,
                           nlohmann::json detail) {
  assertions.push_back({std::move(name), passed, std::move(detail)});
}

bool ScenarioOutput::AllPassed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

RhoConfig ScenarioContext::Rho(TaskSampler tasks, TestSampler test) const {
  return RhoConfig{.tasks = std::move(tasks),
                   .test = std::move(test),
                   .loss = {config.loss},
                   .n_tasks = config.n_tasks,
                   .n_test = config.n_test,
                   .jobs = jobs};
}

const std::vector<Scenario>& ScenarioRegistry() {
  static const std::vector<Scenario>* registry = [] {
    auto* out = new std::vector<Scenario>();
    harness_internal::AddCoreScenarios(*out);
    harness_internal::AddExtractionScenarios(*out);
    harness_internal::AddAssistedScenarios(*out);
    harness_internal::AddDpScenarios(*out);
    std::sort(
        out->begin(), out->end(),
        [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
    return out;
  }();
  return *registry;
}

const Scenario* FindScenario(const std::string& name) {
  for (const Scenario& s : ScenarioRegistry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

nlohmann::json ScenarioListing() {
  nlohmann::json out = nlohmann::json::array();
  for (const Scenario& s : ScenarioRegistry()) {
    std::vector<std::string> keys;
    for (const auto& [key, value] : s.defaults.at("params").items()) {
      keys.push_back(key);
    }
    out.push_back({{"name", s.name},
                   {"description", s.description},
                   {"operations", s.operations},
                   {"params", keys}});
  }
  return out;
}

nlohmann::json DefaultDocument(const std::string& scenario,
                               const DatasetSpec& dataset, LossKind loss,
                               int n_tasks, int n_test, nlohmann::json params) {
  return {{"experiment_id", scenario},
          {"scenario", scenario},
          {"seed", 1},
          {"dataset", DatasetToJson(dataset)},
          {"loss", LossName(loss)},
          {"monte_carlo", {{"n_tasks", n_tasks}, {"n_test", n_test}}},
          {"params", std::move(params)},
          {"output_dir", ""}};
}

namespace harness_internal {

Eigen::VectorXd NormalVector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.Normal();
  return v;
}

nlohmann::json ToJsonArray(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<int> IntList(const nlohmann::json& v) {
  return v.get<std::vector<int>>();
}

std::vector<double> DoubleList(const nlohmann::json& v) {
  return v.get<std::vector<double>>();
}

TaskFamily AffineFamily(double slope_scale, double c_min, double c_max,
                        double noise_sd) {
  return {.coefficients = TaskFamily::Coefficients::kUniform,
          .scale = slope_scale,
          .intercept_min = c_min,
          .intercept_max = c_max,
          .noise_sd = noise_sd};
}

std::string CsvTable(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out = absl::StrJoin(header, ",") + "\n";
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(FormatDouble(v));
    absl::StrAppend(&out, absl::StrJoin(cells, ","), "\n");
  }
  return out;
}

double MaxPrincipalAngleSine(const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa =
      Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
      Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb =
      Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
      Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd residual = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()[0];
}

}  // namespace harness_internal
}  // namespace imitation
