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

// Assisted-learning protocol scenarios and the attacks on its Stage I API.

#include <algorithm>
#include <cmath>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "imitation/assisted/protocol.h"
#include "imitation/attacks/api.h"
#include "imitation/attacks/assisted_attacks.h"
#include "imitation/privacy/privacy_metric.h"
#include "scenarios_internal.h"

namespace imitation::harness_internal {
namespace {

using nlohmann::json;

absl::Status ParamError(const std::string& key, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("config.params.", key, ": ", what));
}

absl::StatusOr<ScenarioOutput> OracleConvergence(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  if (config.dataset.p_a < 1) {
    return absl::InvalidArgumentError("config.dataset.p_a: must be >= 1");
  }
  const std::vector<double> beta_list = DoubleList(ctx.param("beta"));
  if (static_cast<int>(beta_list.size()) != config.dataset.dim()) {
    return ParamError("beta", absl::StrCat("expected ", config.dataset.dim(),
                                           " numbers, got ", beta_list.size()));
  }
  auto data = SynthesizeDataset(config.dataset, config.seed);
  if (!data.ok()) return data.status();
  const Eigen::VectorXd beta =
      Eigen::Map<const Eigen::VectorXd>(beta_list.data(), beta_list.size());
  Rng rng(config.seed, "labels", 0);
  const Eigen::VectorXd y =
      data->x_a.values() * beta.head(config.dataset.p_a) +
      data->x_b.values() * beta.tail(config.dataset.p_b) +
      config.dataset.noise_sd * NormalVector(rng, config.dataset.n);
  const LabelVector label = LabelVector::Regression(y);
  auto alice = Module::Create("alice", LearnerSpec::Ols(), data->x_a);
  auto bob = Module::Create("bob", LearnerSpec::Ols(), data->x_b);
  if (!alice.ok()) return alice.status();
  if (!bob.ok()) return bob.status();
  auto oracle = OracleFit(data->x_a, data->x_b, label, LearnerSpec::Ols());
  if (!oracle.ok()) return oracle.status();
  const int max_rounds = ctx.param("max_rounds").get<int>();
  auto run = RunStage1(
      *alice, *bob, label,
      {.max_rounds = max_rounds, .theta = ctx.param("theta").get<double>()},
      config.seed);
  if (!run.ok()) return run.status();
  const std::vector<double> trace = run->transcript.MseTrace();
  bool monotone = true;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1]) monotone = false;
  }
  const double gap =
      std::abs(trace.back() - oracle->oracle_error) / oracle->oracle_error;
  ScenarioOutput out;
  out.results = {{"mse_trace", trace},
                 {"oracle_error", oracle->oracle_error},
                 {"relative_gap", gap},
                 {"rounds", trace.size()},
                 {"stop_reason", run->transcript.stop_reason}};
  out.traces.push_back({"mse.csv", run->transcript.MseCsv()});
  out.Check("final relative gap below 0.01", gap < 0.01, {{"gap", gap}});
  out.Check("mse trace non-increasing", monotone);
  out.Check("round cap respected", static_cast<int>(trace.size()) <= max_rounds,
            {{"rounds", trace.size()}});
  return out;
}

absl::StatusOr<ScenarioOutput> ColumnSpace(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  auto data = SynthesizeDataset(config.dataset, config.seed);
  if (!data.ok()) return data.status();
  const int n = config.dataset.n;
  const int p = config.dataset.p_b;
  auto bob = Module::Create("bob", LearnerSpec::Ols(), data->x_b);
  if (!bob.ok()) return bob.status();
  auto target = MakeTarget("bob", *bob);

  ApiView api(target, ResponseMode::kResidual);
  auto span =
      RecoverColumnSpace(api, ctx.param("k1").get<int>(), n, p, config.seed);
  if (!span.ok()) return span.status();
  const double sine = MaxPrincipalAngleSine(data->x_b.values(), span->basis);
  const double angle = std::asin(std::min(1.0, sine));

  ApiView short_api(target, ResponseMode::kResidual);
  auto short_span = RecoverColumnSpace(
      short_api, ctx.param("short_k1").get<int>(), n, p, config.seed);
  const std::string short_error =
      short_span.ok() ? "" : std::string(short_span.status().message());

  ScenarioOutput out;
  out.results = {{"rank", span->rank},
                 {"rank_deficient", span->rank_deficient},
                 {"max_principal_angle", angle},
                 {"queries", api.queries_used()},
                 {"short_k1_error", short_error},
                 {"short_k1_queries", short_api.queries_used()}};
  out.Check("principal angles at most 1e-8", angle <= 1e-8, {{"angle", angle}});
  out.Check("too few queries is rejected",
            absl::StrContains(short_error, "insufficient queries"),
            {{"message", short_error}});
  return out;
}

absl::StatusOr<ScenarioOutput> CovarianceRotation(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::vector<int> grid = IntList(ctx.param("n_grid"));
  auto joint = JointDistribution(config.dataset);
  if (!joint.ok()) return joint.status();
  const RhoConfig rho =
      ctx.Rho({.marginal = *joint,
               .family = AffineFamily(ctx.param("slope_scale").get<double>(),
                                      ctx.param("intercept_min").get<double>(),
                                      ctx.param("intercept_max").get<double>(),
                                      config.dataset.noise_sd)},
              *joint);
  ScenarioOutput out;
  std::vector<double> rhos;
  std::vector<std::vector<double>> rows;
  for (int n : grid) {
    DatasetSpec spec = config.dataset;
    spec.n = n;
    auto data = SynthesizeDataset(spec, config.seed);
    if (!data.ok()) return data.status();
    auto bob = Module::Create("bob", LearnerSpec::Ols(true), data->x_b);
    if (!bob.ok()) return bob.status();
    auto target = MakeTarget("bob", *bob, ctx.param("oracle_sd").get<double>());
    ApiView api(target, ResponseMode::kResidual);
    auto attack = CovarianceRotationAttack(
        api, n, {.p = spec.p_b, .intercept = true, .seed = config.seed});
    if (!attack.ok()) return attack.status();
    auto est = EstimateRho(*bob, *attack->system, rho, config.seed);
    if (!est.ok()) return est.status();
    ctx.log(absl::StrCat("covariance-rotation n=", n, " rho=", est->rho_hat));
    rhos.push_back(est->rho_hat);
    rows.push_back({static_cast<double>(n), est->rho_hat, est->std_error});
    out.estimates.push_back({absl::StrCat("n=", n), *est});
    out.results["points"].push_back(
        {{"n", n},
         {"estimate", est->ToJson()},
         {"record",
          MakeRecord("covariance-rotation", api, "bob").ToJson(false)}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rhos.size(); ++i) {
    if (!(rhos[i] < rhos[i - 1])) decreasing = false;
  }
  const double cap = ctx.param("max_final_rho").get<double>();
  out.results["rho_hat"] = rhos;
  out.traces.push_back(
      {"rho_vs_n.csv", CsvTable({"n", "rho_hat", "std_error"}, rows)});
  out.Check("rho strictly decreasing in n", decreasing, {{"rho_hat", rhos}});
  out.Check("rho at the largest n within cap", rhos.back() <= cap,
            {{"rho_hat", rhos.back()}, {"cap", cap}});
  return out;
}

bool SameUpToReflection(std::vector<int> a, const std::vector<int>& b) {
  if (a == b) return true;
  std::reverse(a.begin(), a.end());
  return a == b;
}

absl::StatusOr<ScenarioOutput> TreeTable(const ScenarioContext& ctx) {
  const json& table = ctx.param("responses");
  std::vector<Eigen::VectorXd> rows;
  for (const json& row : table) {
    const std::vector<double> v = row.get<std::vector<double>>();
    rows.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  }
  auto s = TreeStructureRecover(rows);
  if (!s.ok()) return s.status();
  std::vector<std::string> labels;
  for (int r : s->order) labels.push_back(absl::StrCat("x", r + 1));
  const std::vector<int> expected = IntList(ctx.param("expected_order"));
  ScenarioOutput out;
  out.results = {{"structure", s->ToJson()}, {"order_labels", labels}};
  out.Check("order matches expected up to reflection",
            s->consistent && SameUpToReflection(s->order, expected),
            {{"order", s->order}, {"expected", expected}});
  return out;
}

absl::StatusOr<ScenarioOutput> EpsilonCover(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  if (config.dataset.p_b != 1 || config.dataset.p_a != 0) {
    return absl::InvalidArgumentError(
        "config.dataset: the linear cover needs p_a = 0 and p_b = 1");
  }
  const int n = config.dataset.n;
  const double sigma = config.dataset.noise_sd;
  const double a_min = ctx.param("a_min").get<double>();
  const double a_max = ctx.param("a_max").get<double>();
  auto cover = MakeLinearCover(a_min, a_max, ctx.param("eps").get<double>(),
                               ctx.param("grid").get<int>(), sigma);
  if (!cover.ok()) return cover.status();
  auto joint = JointDistribution(config.dataset);
  if (!joint.ok()) return joint.status();
  const double half = (a_max - a_min) / 2;
  TaskFamily family{.coefficients = TaskFamily::Coefficients::kUniform,
                    .scale = half,
                    .noise_sd = sigma};
  if (std::abs(a_min + a_max) > 1e-12) {
    return ParamError("a_min", "the task family needs a_min = -a_max");
  }
  const RhoConfig rho = ctx.Rho({.marginal = *joint, .family = family}, *joint);

  const int trials = ctx.param("trials").get<int>();
  const double threshold = ctx.param("rho_threshold").get<double>();
  int good = 0;
  std::vector<double> rhos;
  for (int t = 0; t < trials; ++t) {
    DatasetSpec spec = config.dataset;
    auto data = SynthesizeDataset(spec, config.seed * 100003 + t);
    if (!data.ok()) return data.status();
    auto bob = Module::Create("bob", LearnerSpec::Ols(), data->x_b);
    if (!bob.ok()) return bob.status();
    auto target = MakeTarget("bob", *bob, sigma);
    ApiView api(target, ResponseMode::kResidual, std::nullopt, config.seed + t);
    auto system = EpsilonCoverImitate(*cover, api, n);
    if (!system.ok()) return system.status();
    auto est = EstimateRho(*bob, **system, rho, config.seed + t);
    if (!est.ok()) return est.status();
    rhos.push_back(est->rho_hat);
    good += est->rho_hat <= threshold ? 1 : 0;
  }

  // Matching statistic n^-1 ||y_j - y*||^2 against 2 sigma^2 + (a_j - a*)^2.
  const int reps = ctx.param("matching_reps").get<int>();
  int inside = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(config.seed, "matching", static_cast<std::uint64_t>(rep));
    const Eigen::VectorXd x = NormalVector(rng, n);
    const double a_star = rng.Uniform(a_min, a_max);
    const double a_j = cover->grid[rng.UniformInt(cover->grid.size())];
    const Eigen::VectorXd y_star = a_star * x + sigma * NormalVector(rng, n);
    const Eigen::VectorXd y_j = a_j * x + sigma * NormalVector(rng, n);
    const double c2 = (a_j - a_star) * (a_j - a_star);
    const double mean = 2 * sigma * sigma + c2;
    const double sd = std::sqrt(2.0 / n) * (c2 + 2 * sigma * sigma);
    inside += std::abs((y_j - y_star).squaredNorm() / n - mean) <= 3 * sd;
  }
  const int min_good = ctx.param("min_good").get<int>();
  ScenarioOutput out;
  out.results = {{"cover", cover->ToJson()},
                 {"rho_hat", rhos},
                 {"trials_within_threshold", good},
                 {"matching_within_3sd", inside},
                 {"matching_reps", reps}};
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < trials; ++t) rows.push_back({double(t), rhos[t]});
  out.traces.push_back(
      {"cover_trials.csv", CsvTable({"trial", "rho_hat"}, rows)});
  out.Check("rho within threshold in enough trials", good >= min_good,
            {{"good", good}, {"required", min_good}});
  out.Check("matching statistic within 3 sd in at least 98% of reps",
            inside * 100 >= 98 * reps, {{"inside", inside}, {"reps", reps}});
  return out;
}

}  // namespace

void AddAssistedScenarios(std::vector<Scenario>& out) {
  DatasetSpec correlated{
      .n = 500,
      .p_a = 3,
      .p_b = 3,
      .covariance = {.kind = CovarianceSpec::Kind::kCrossParty, .r = 0.5},
      .noise_sd = 0.5};
  out.push_back(
      {.name = "assisted-oracle-convergence",
       .description = "Two-party residual exchange with OLS on a correlated "
                      "design; converges to the pooled least-squares error.",
       .operations = {"run_stage1", "oracle_fit"},
       .defaults = DefaultDocument(
           "assisted-oracle-convergence", correlated, LossKind::kSquared, 1, 1,
           {{"max_rounds", 30},
            {"theta", 1e-6},
            {"beta", {1.0, -1.0, 0.5, 2.0, 0.3, -0.7}}}),
       .run = OracleConvergence});

  DatasetSpec small{.n = 50, .p_a = 0, .p_b = 3, .noise_sd = 0.1};
  out.push_back({.name = "column-space-recovery",
                 .description =
                     "Recovers the column span of Bob's features from "
                     "residual responses to random labels.",
                 .operations = {"recover_column_space"},
                 .defaults = DefaultDocument("column-space-recovery", small,
                                             LossKind::kSquared, 1, 1,
                                             {{"k1", 3}, {"short_k1", 2}}),
                 .run = ColumnSpace});

  DatasetSpec unit{.n = 2000,
                   .p_a = 0,
                   .p_b = 3,
                   .distribution = DatasetSpec::Distribution::kUniform,
                   .noise_sd = 0.1,
                   .bound = std::sqrt(3.0)};
  out.push_back({.name = "covariance-rotation",
                 .description =
                     "Span recovery plus task-oracle rotation fix; rho of "
                     "the rebuilt features over a grid of n.",
                 .operations = {"covariance_rotation_attack", "estimate_rho"},
                 .defaults = DefaultDocument("covariance-rotation", unit,
                                             LossKind::kScaledL2, 40, 1000,
                                             {{"n_grid", {2000, 20000, 200000}},
                                              {"slope_scale", 1.0 / 3},
                                              {"intercept_min", 2.0},
                                              {"intercept_max", 3.0},
                                              {"oracle_sd", 0.1},
                                              {"max_final_rho", 0.05}}),
                 .run = CovarianceRotation});

  const double third = 1.0 / 3;
  json table = {{third, third, 0.0, third, 0.0, 0.0},
                {0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                {0.0, 0.0, 0.5, 0.0, 0.5, 0.0},
                {0.0, 0.5, 0.0, 0.5, 0.0, 0.0},
                {0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                {0.0, 0.0, third, 0.0, third, third}};
  DatasetSpec none{.n = 6, .p_a = 0, .p_b = 1, .noise_sd = 0.0};
  out.push_back(
      {.name = "tree-structure-paper-table",
       .description = "Orders six training points from a stump's fitted "
                      "responses to indicator labels.",
       .operations = {"tree_structure_recover"},
       .defaults = DefaultDocument(
           "tree-structure-paper-table", none, LossKind::kSquared, 1, 1,
           {{"responses", table}, {"expected_order", {1, 3, 0, 5, 2, 4}}}),
       .run = TreeTable});

  DatasetSpec line{.n = 5000, .p_a = 0, .p_b = 1, .noise_sd = 0.2};
  out.push_back({.name = "epsilon-cover",
                 .description =
                     "Imitation by nearest oracle label over an eps-cover of "
                     "a one-dimensional linear family.",
                 .operations = {"make_linear_cover", "epsilon_cover_imitate",
                                "estimate_rho"},
                 .defaults = DefaultDocument("epsilon-cover", line,
                                             LossKind::kSquared, 20, 200,
                                             {{"a_min", -1.0},
                                              {"a_max", 1.0},
                                              {"eps", 0.1},
                                              {"grid", 21},
                                              {"trials", 100},
                                              {"rho_threshold", 0.15},
                                              {"min_good", 95},
                                              {"matching_reps", 200}}),
                 .run = EpsilonCover});
}

}  // namespace imitation::harness_internal
