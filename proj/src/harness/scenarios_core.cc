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

// Metric sanity scenarios: trivial imitations and synthetic data.

#include <cmath>

#include "imitation/core/imitation.h"
#include "imitation/core/module.h"
#include "imitation/privacy/privacy_metric.h"
#include "scenarios_internal.h"

namespace imitation::harness_internal {
namespace {

using nlohmann::json;

DatasetSpec UnitUniformSpec(int n, int p) {
  return {.n = n,
          .p_a = 0,
          .p_b = p,
          .distribution = DatasetSpec::Distribution::kUniform,
          .noise_sd = 0.1,
          .bound = std::sqrt(3.0)};
}

absl::StatusOr<ScenarioOutput> TrivialImitation(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  auto data = SynthesizeDataset(config.dataset, config.seed);
  if (!data.ok()) return data.status();
  auto bob = Module::Create("bob", LearnerSpec::Ols(true), data->x_b);
  if (!bob.ok()) return bob.status();
  const FeatureDistribution marginal =
      *FeatureDistribution::Uniform(config.dataset.p_b, config.dataset.bound);
  const RhoConfig rho =
      ctx.Rho({.marginal = marginal,
               .family = AffineFamily(ctx.param("slope_scale").get<double>(),
                                      ctx.param("intercept_min").get<double>(),
                                      ctx.param("intercept_max").get<double>(),
                                      config.dataset.noise_sd)},
              marginal);
  auto zero = EstimateRho(*bob, ZeroImitation(bob->cols()), rho, config.seed);
  if (!zero.ok()) return zero.status();
  auto self =
      EstimateRho(*bob, *LearnerImitation::SelfOf(*bob), rho, config.seed);
  if (!self.ok()) return self.status();

  ScenarioOutput out;
  out.results = {{"zero", zero->ToJson()}, {"self", self->ToJson()}};
  out.estimates = {{"zero", *zero}, {"self", *self}};
  out.Check("zero imitation has rho 1",
            zero->rho_hat == 1.0 && zero->std_error == 0.0,
            {{"rho_hat", zero->rho_hat}, {"std_error", zero->std_error}});
  out.Check("self imitation has rho 0", self->rho_hat == 0.0,
            {{"rho_hat", self->rho_hat}});
  return out;
}

absl::StatusOr<ScenarioOutput> SyntheticDataset(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  auto data = SynthesizeDataset(config.dataset, config.seed);
  if (!data.ok()) return data.status();
  const int n = config.dataset.n;
  const int dim = config.dataset.dim();
  Eigen::MatrixXd rows(n, dim);
  if (config.dataset.p_a > 0)
    rows.leftCols(config.dataset.p_a) = data->x_a.values();
  rows.rightCols(config.dataset.p_b) = data->x_b.values();

  ScenarioOutput out;
  const double max_abs = rows.cwiseAbs().maxCoeff();
  out.results["rows"] = n;
  out.results["max_abs_entry"] = max_abs;
  if (config.dataset.distribution == DatasetSpec::Distribution::kUniform) {
    out.Check("entries within bound", max_abs <= config.dataset.bound,
              {{"max_abs_entry", max_abs}, {"bound", config.dataset.bound}});
  }
  if (n >= 2) {
    const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
    const Eigen::MatrixXd empirical =
        centered.transpose() * centered / static_cast<double>(n - 1);
    const double deviation =
        (empirical - data->joint.Covariance()).cwiseAbs().maxCoeff();
    const double tolerance = ctx.param("covariance_tolerance").get<double>();
    out.results["max_covariance_deviation"] = deviation;
    out.Check("empirical covariance matches spec", deviation <= tolerance,
              {{"deviation", deviation}, {"tolerance", tolerance}});
  }
  return out;
}

}  // namespace

void AddCoreScenarios(std::vector<Scenario>& out) {
  out.push_back(
      {.name = "trivial-imitation",
       .description = "Zero imitation scores rho = 1 with no variance; the "
                      "module's own learner scores rho = 0.",
       .operations = {"estimate_rho"},
       .defaults = DefaultDocument("trivial-imitation", UnitUniformSpec(200, 3),
                                   LossKind::kScaledL2, 50, 500,
                                   {{"slope_scale", 1.0 / 3},
                                    {"intercept_min", 2.0},
                                    {"intercept_max", 3.0}}),
       .run = TrivialImitation});
  DatasetSpec gaussian{.n = 100000, .p_a = 0, .p_b = 3, .noise_sd = 0.1};
  out.push_back({.name = "synthetic-dataset",
                 .description =
                     "Draws the configured dataset and checks its empirical "
                     "covariance (and bound, for uniform features).",
                 .operations = {"synth_dataset"},
                 .defaults = DefaultDocument("synthetic-dataset", gaussian,
                                             LossKind::kScaledL2, 1, 1,
                                             {{"covariance_tolerance", 0.05}}),
                 .run = SyntheticDataset});
}

}  // namespace imitation::harness_internal
