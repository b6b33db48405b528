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

#ifndef IMITATION_HARNESS_SCENARIOS_INTERNAL_H_
#define IMITATION_HARNESS_SCENARIOS_INTERNAL_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "imitation/core/rng.h"
#include "imitation/harness/scenario.h"
#include "json.hpp"

namespace imitation::harness_internal {

void AddCoreScenarios(std::vector<Scenario>& out);
void AddExtractionScenarios(std::vector<Scenario>& out);
void AddAssistedScenarios(std::vector<Scenario>& out);
void AddDpScenarios(std::vector<Scenario>& out);

// Shared helpers.
Eigen::VectorXd NormalVector(Rng& rng, int n);
nlohmann::json ToJsonArray(const Eigen::VectorXd& v);
std::vector<int> IntList(const nlohmann::json& v);
std::vector<double> DoubleList(const nlohmann::json& v);
// Affine tasks with |intercept| in [c_min, c_max] and uniform slopes.
TaskFamily AffineFamily(double slope_scale, double c_min, double c_max,
                        double noise_sd);
// "column,column,..." header plus rows with 17 significant digits.
std::string CsvTable(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
// Sine of the largest principal angle between the column spans of two
// matrices with full column rank.
double MaxPrincipalAngleSine(const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b);

}  // namespace imitation::harness_internal

#endif  // IMITATION_HARNESS_SCENARIOS_INTERNAL_H_
