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

// Differential-privacy scenarios: Laplace release, bias correction, and the
// two experiments contrasting DP with imitation privacy.

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "imitation/dp/dp_bridge.h"
#include "imitation/learners/ols.h"
#include "scenarios_internal.h"

namespace imitation::harness_internal {
namespace {

using nlohmann::json;

absl::Status ParamError(const std::string& key, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("config.params.", key, ": ", what));
}

struct Regression {
  DataMatrix x;
  LabelVector y;
};

absl::StatusOr<Regression> DrawRegression(const DatasetSpec& base, int n,
                                          const Eigen::VectorXd& beta,
                                          std::uint64_t seed) {
  DatasetSpec spec = base;
  spec.n = n;
  auto data = SynthesizeDataset(spec, seed);
  if (!data.ok()) return data.status();
  Rng rng(seed, "dp-noise", 0);
  Eigen::VectorXd y = data->x_b.values() * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y[i] += base.noise_sd * rng.Normal();
  return Regression{std::move(data->x_b),
                    LabelVector::Regression(std::move(y))};
}

absl::StatusOr<Eigen::VectorXd> BetaParam(const ScenarioContext& ctx,
                                          const std::string& key, int p) {
  const std::vector<double> v = DoubleList(ctx.param(key));
  if (static_cast<int>(v.size()) != p) {
    return ParamError(key,
                      absl::StrCat("expected ", p, " numbers, got ", v.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), p);
}

// Corrected and naive coefficient errors against OLS on the clean rows.
struct FitErrors {
  double corrected = 0.0;
  double naive = 0.0;
};

absl::StatusOr<FitErrors> CompareFits(const Regression& r,
                                      const LaplaceParams& params,
                                      std::uint64_t seed) {
  auto release = LaplaceMechanism(r.x, params, seed);
  if (!release.ok()) return release.status();
  auto corrected = BiasCorrectedFit(*release, r.y);
  if (!corrected.ok()) return corrected.status();
  auto naive = FitOls(*release->x_tilde, r.y);
  if (!naive.ok()) return naive.status();
  auto clean = FitOls(r.x, r.y);
  if (!clean.ok()) return clean.status();
  return FitErrors{(corrected->coefficients() - clean->coefficients()).norm(),
                   (naive->coefficients() - clean->coefficients()).norm()};
}

absl::StatusOr<ScenarioOutput> BiasCorrection(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const DatasetSpec& dataset = config.dataset;
  if (dataset.distribution != DatasetSpec::Distribution::kUniform) {
    return absl::InvalidArgumentError(
        "config.dataset.distribution: the Laplace release needs bounded "
        "(uniform) features");
  }
  const int p = dataset.p_b;
  ScenarioOutput out;

  // Closed-form identity over a small grid of (b, alpha).
  bool identity = true;
  for (double b : {0.25, 1.0, 3.0}) {
    for (double alpha : {0.1, 1.0, 2.0, 7.5}) {
      auto params = LaplaceParams::Create(b, alpha);
      if (!params.ok()) return params.status();
      identity &= params->variance == 8 * b * b / (alpha * alpha) &&
                  params->scale == 2 * b / alpha;
    }
  }
  auto unit = LaplaceParams::Create(1.0, 2.0);
  if (!unit.ok()) return unit.status();
  out.results["unit_bound_alpha_2"] = unit->ToJson();
  out.Check("tau^2 = 8 b^2 / alpha^2 exactly", identity);
  out.Check("b = 1, alpha = 2 gives scale 1 and tau^2 = 2",
            unit->scale == 1.0 && unit->variance == 2.0);

  // Single large-n comparison at the configured level.
  auto single_params = LaplaceParams::Create(
      dataset.bound, ctx.param("single_alpha").get<double>());
  if (!single_params.ok()) return single_params.status();
  auto single_beta = BetaParam(ctx, "single_beta", p);
  if (!single_beta.ok()) return single_beta.status();
  auto single = DrawRegression(dataset, dataset.n, *single_beta,
                               Rng(config.seed, "single", 0).NextBits());
  if (!single.ok()) return single.status();
  auto single_err =
      CompareFits(*single, *single_params,
                  Rng(config.seed, "single-release", 0).NextBits());
  if (!single_err.ok()) return single_err.status();
  out.results["single"] = {{"n", dataset.n},
                           {"corrected_error", single_err->corrected},
                           {"naive_error", single_err->naive}};
  out.Check("corrected fit within 0.05 of clean OLS",
            single_err->corrected < 0.05, {{"error", single_err->corrected}});

  // Error curve and paired comparison at the study level.
  auto params =
      LaplaceParams::Create(dataset.bound, ctx.param("alpha").get<double>());
  if (!params.ok()) return params.status();
  auto beta = BetaParam(ctx, "beta", p);
  if (!beta.ok()) return beta.status();
  const std::vector<int> grid = IntList(ctx.param("n_grid"));
  const int reps = ctx.param("reps").get<int>();
  if (grid.size() < 2) return ParamError("n_grid", "need at least two sizes");
  std::vector<double> mean_errors;
  std::vector<std::vector<double>> rows;
  for (int n : grid) {
    double err = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const std::uint64_t idx = static_cast<std::uint64_t>(n) * 1000 + rep;
      auto r = DrawRegression(dataset, n, *beta,
                              Rng(config.seed, "curve", idx).NextBits());
      if (!r.ok()) return r.status();
      auto e = CompareFits(*r, *params,
                           Rng(config.seed, "curve-release", idx).NextBits());
      if (!e.ok()) return e.status();
      err += e->corrected / reps;
    }
    mean_errors.push_back(err);
    rows.push_back({static_cast<double>(n), err});
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mx += std::log(grid[i]) / grid.size();
    my += std::log(mean_errors[i]) / grid.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sxy += (std::log(grid[i]) - mx) * (std::log(mean_errors[i]) - my);
    sxx += (std::log(grid[i]) - mx) * (std::log(grid[i]) - mx);
  }
  const double slope = sxy / sxx;
  out.results["curve"] = {
      {"n_grid", grid}, {"mean_error", mean_errors}, {"log_log_slope", slope}};
  out.traces.push_back(
      {"bias_correction_error.csv", CsvTable({"n", "mean_error"}, rows)});
  out.Check("log-log error slope in [-0.7, -0.3]",
            slope >= -0.7 && slope <= -0.3, {{"slope", slope}});

  const int trials = ctx.param("paired_trials").get<int>();
  const int paired_n = ctx.param("paired_n").get<int>();
  int wins = 0;
  for (int t = 0; t < trials; ++t) {
    auto r = DrawRegression(dataset, paired_n, *beta,
                            Rng(config.seed, "paired", t).NextBits());
    if (!r.ok()) return r.status();
    auto e = CompareFits(*r, *params,
                         Rng(config.seed, "paired-release", t).NextBits());
    if (!e.ok()) return e.status();
    wins += e->corrected < e->naive ? 1 : 0;
  }
  out.results["paired"] = {{"trials", trials}, {"corrected_wins", wins}};
  out.Check("corrected beats naive in at least 9 of 10 paired trials",
            wins * 10 >= 9 * trials, {{"wins", wins}, {"trials", trials}});
  return out;
}

RhoConfig BreachRho(const ScenarioContext& ctx,
                    const FeatureDistribution& joint) {
  return ctx.Rho(
      {.marginal = joint,
       .family = AffineFamily(ctx.param("slope_scale").get<double>(),
                              ctx.param("intercept_min").get<double>(),
                              ctx.param("intercept_max").get<double>(),
                              ctx.config.dataset.noise_sd)},
      joint);
}

struct BreachOutcome {
  std::vector<DpBreachPoint> curve;
  bool decreasing = true;
  double control_rho = 0.0;
  double low_alpha_rho = 0.0;
  double high_alpha_rho = 0.0;
};

absl::StatusOr<BreachOutcome> RunBreach(const ScenarioContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  auto joint = JointDistribution(config.dataset);
  if (!joint.ok()) return joint.status();
  const RhoConfig rho = BreachRho(ctx, *joint);
  auto make = [&](double alpha,
                  std::vector<int> grid) -> absl::StatusOr<DpBreachConfig> {
    auto params = LaplaceParams::Create(config.dataset.bound, alpha);
    if (!params.ok()) return params.status();
    return DpBreachConfig{.params = *params,
                          .n_grid = std::move(grid),
                          .rho = rho,
                          .intercept = true};
  };
  BreachOutcome out;
  auto main =
      make(ctx.param("alpha").get<double>(), IntList(ctx.param("n_grid")));
  if (!main.ok()) return main.status();
  auto curve = DpBreachExperiment(*main, config.seed);
  if (!curve.ok()) return curve.status();
  out.curve = *std::move(curve);
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    if (!(out.curve[i].estimate.rho_hat < out.curve[i - 1].estimate.rho_hat)) {
      out.decreasing = false;
    }
    ctx.log(absl::StrCat("dp breach n=", out.curve[i].n,
                         " rho=", out.curve[i].estimate.rho_hat));
  }
  const int control_n = ctx.param("control_n").get<int>();
  auto control = make(std::numeric_limits<double>::infinity(), {control_n});
  auto low = make(ctx.param("alpha_low").get<double>(), {control_n});
  auto high = make(ctx.param("alpha_high").get<double>(), {control_n});
  for (auto* c : {&control, &low, &high}) {
    if (!c->ok()) return c->status();
  }
  auto control_curve = DpBreachExperiment(*control, config.seed);
  auto low_curve = DpBreachExperiment(*low, config.seed);
  auto high_curve = DpBreachExperiment(*high, config.seed);
  for (auto* c : {&control_curve, &low_curve, &high_curve}) {
    if (!c->ok()) return c->status();
  }
  out.control_rho = (*control_curve)[0].estimate.rho_hat;
  out.low_alpha_rho = (*low_curve)[0].estimate.rho_hat;
  out.high_alpha_rho = (*high_curve)[0].estimate.rho_hat;
  return out;
}

void ReportBreach(const BreachOutcome& b, const std::string& prefix,
                  ScenarioOutput& out) {
  json points = json::array();
  std::vector<std::vector<double>> rows;
  for (const DpBreachPoint& p : b.curve) {
    points.push_back({{"n", p.n}, {"estimate", p.estimate.ToJson()}});
    rows.push_back(
        {static_cast<double>(p.n), p.estimate.rho_hat, p.estimate.std_error});
    out.estimates.push_back({absl::StrCat(prefix, "n=", p.n), p.estimate});
  }
  out.results[prefix + "curve"] = points;
  out.results[prefix + "control_rho"] = b.control_rho;
  out.results[prefix + "alpha_low_rho"] = b.low_alpha_rho;
  out.results[prefix + "alpha_high_rho"] = b.high_alpha_rho;
  out.traces.push_back({prefix + "dp_breach.csv",
                        CsvTable({"n", "rho_hat", "std_error"}, rows)});
}

absl::StatusOr<ScenarioOutput> DpBreach(const ScenarioContext& ctx) {
  auto b = RunBreach(ctx);
  if (!b.ok()) return b.status();
  ScenarioOutput out;
  ReportBreach(*b, "", out);
  out.Check("rho strictly decreasing in n", b->decreasing);
  out.Check("exact release control has rho <= 1e-6", b->control_rho <= 1e-6,
            {{"rho_hat", b->control_rho}});
  out.Check(
      "more noise gives larger rho", b->low_alpha_rho > b->high_alpha_rho,
      {{"alpha_low", b->low_alpha_rho}, {"alpha_high", b->high_alpha_rho}});
  return out;
}

// Population capped scaled-L2 loss of the released-columns imitation for
// equal-weight tasks on [-b, b]^p, by midpoint quadrature. With independent
// centered columns the fitted weights on the released columns converge to
// the common weight, so the imitation is the released partial sum.
double PartialReleaseOracle(int p, const std::vector<int>& released, int grid) {
  std::vector<bool> is_released(p, false);
  for (int c : released) is_released[c] = true;
  std::vector<int> index(p, 0);
  double total = 0.0;
  long long count = 0;
  while (true) {
    double full = 0.0, hidden = 0.0;
    for (int j = 0; j < p; ++j) {
      const double x = -1 + (index[j] + 0.5) * 2.0 / grid;
      full += x;
      if (!is_released[j]) hidden += x;
    }
    total += std::min(hidden * hidden / (full * full), 1.0);
    ++count;
    int j = 0;
    while (j < p && ++index[j] == grid) index[j++] = 0;
    if (j == p) break;
  }
  return total / count;
}

struct PartialOutcome {
  PartialReleaseResult result;
  PrivacyEstimate full;
  double oracle = 0.0;
};

absl::StatusOr<PartialOutcome> RunPartial(const ScenarioContext& ctx,
                                          const DatasetSpec& dataset) {
  const int p = dataset.p_b;
  if (p > 6) {
    return absl::InvalidArgumentError(
        "config.dataset.p_b: the quadrature oracle supports at most 6 columns");
  }
  if (dataset.distribution != DatasetSpec::Distribution::kUniform) {
    return absl::InvalidArgumentError(
        "config.dataset.distribution: partial release expects uniform "
        "features");
  }
  const std::vector<int> released = IntList(ctx.param("released"));
  auto data = SynthesizeDataset(dataset, ctx.config.seed);
  if (!data.ok()) return data.status();
  auto bob = Module::Create("bob", LearnerSpec::Ols(), data->x_b);
  if (!bob.ok()) return bob.status();
  auto joint = JointDistribution(dataset);
  if (!joint.ok()) return joint.status();
  const RhoConfig rho =
      ctx.Rho({.marginal = *joint,
               .family = {.coefficients = TaskFamily::Coefficients::kEqual,
                          .scale = 1.0,
                          .noise_sd = dataset.noise_sd}},
              *joint);
  auto result = PartialReleaseExperiment(*bob, released, rho, ctx.config.seed);
  if (!result.ok()) {
    return absl::Status(
        result.status().code(),
        absl::StrCat("config.params.released: ", result.status().message()));
  }
  std::vector<int> all(p);
  for (int j = 0; j < p; ++j) all[j] = j;
  auto full_imitation = ReleasedColumnsImitation(*bob, all);
  if (!full_imitation.ok()) return full_imitation.status();
  auto full = EstimateRho(*bob, **full_imitation, rho, ctx.config.seed);
  if (!full.ok()) return full.status();
  return PartialOutcome{
      *std::move(result), *std::move(full),
      PartialReleaseOracle(p, released,
                           ctx.param("quadrature_grid").get<int>())};
}

void ReportPartial(const PartialOutcome& o, const std::string& prefix,
                   double threshold, ScenarioOutput& out) {
  out.results[prefix + "partial"] = o.result.partial.ToJson();
  out.results[prefix + "none"] = o.result.none.ToJson();
  out.results[prefix + "full"] = o.full.ToJson();
  out.results[prefix + "oracle_capped_rho"] = o.oracle;
  out.results[prefix + "threshold"] = threshold;
  out.estimates.push_back({prefix + "partial", o.result.partial});
  out.estimates.push_back({prefix + "none", o.result.none});
  out.estimates.push_back({prefix + "full", o.full});
}

bool PartialPreserved(const PartialOutcome& o, double threshold) {
  return o.oracle >= threshold &&
         o.result.partial.capped_rho_hat >= threshold &&
         o.result.partial.rho_hat >= threshold;
}

absl::StatusOr<ScenarioOutput> PartialRelease(const ScenarioContext& ctx) {
  auto o = RunPartial(ctx, ctx.config.dataset);
  if (!o.ok()) return o.status();
  const double threshold = ctx.param("threshold").get<double>();
  ScenarioOutput out;
  ReportPartial(*o, "", threshold, out);
  out.Check("partial release keeps rho above the oracle-derived threshold",
            PartialPreserved(*o, threshold),
            {{"capped_rho_hat", o->result.partial.capped_rho_hat},
             {"rho_hat", o->result.partial.rho_hat},
             {"oracle", o->oracle}});
  out.Check("no release gives rho 1", o->result.none.rho_hat == 1.0,
            {{"rho_hat", o->result.none.rho_hat}});
  out.Check("full release gives rho 0", o->full.rho_hat <= 1e-12,
            {{"rho_hat", o->full.rho_hat}});
  return out;
}

absl::StatusOr<ScenarioOutput> NonImplication(const ScenarioContext& ctx) {
  auto b = RunBreach(ctx);
  if (!b.ok()) return b.status();
  DatasetSpec partial_spec{.n = ctx.param("partial_n").get<int>(),
                           .p_a = 0,
                           .p_b = ctx.param("partial_p").get<int>(),
                           .distribution = DatasetSpec::Distribution::kUniform,
                           .noise_sd = ctx.config.dataset.noise_sd,
                           .bound = 1.0};
  auto o = RunPartial(ctx, partial_spec);
  if (!o.ok()) return o.status();
  const double threshold = ctx.param("threshold").get<double>();
  const double cap = ctx.param("vanishing_cap").get<double>();
  ScenarioOutput out;
  ReportBreach(*b, "dp_", out);
  ReportPartial(*o, "partial_", threshold, out);
  const double last = b->curve.back().estimate.rho_hat;
  const bool breached = b->decreasing && last <= cap;
  const bool preserved = PartialPreserved(*o, threshold);
  out.results["verdicts"] = {{"dp_release",
                              {{"differentially_private", true},
                               {"imitation_privacy_breached", breached}}},
                             {"partial_release",
                              {{"differentially_private", false},
                               {"imitation_privacy_preserved", preserved}}}};
  out.Check("DP release: rho vanishes with n", breached,
            {{"final_rho_hat", last}, {"cap", cap}});
  out.Check("partial release: rho stays above threshold", preserved,
            {{"capped_rho_hat", o->result.partial.capped_rho_hat},
             {"oracle", o->oracle}});
  return out;
}

json BreachParams() {
  return {{"alpha", 4.0},           {"n_grid", {1000, 10000, 100000}},
          {"slope_scale", 1.0 / 3}, {"intercept_min", 2.0},
          {"intercept_max", 3.0},   {"control_n", 10000},
          {"alpha_low", 2.0},       {"alpha_high", 8.0}};
}

}  // namespace

void AddDpScenarios(std::vector<Scenario>& out) {
  DatasetSpec square{.n = 100000,
                     .p_a = 0,
                     .p_b = 2,
                     .distribution = DatasetSpec::Distribution::kUniform,
                     .noise_sd = 0.1,
                     .bound = 1.0};
  out.push_back({.name = "dp-bias-correction",
                 .description =
                     "Laplace release of bounded features and the "
                     "errors-in-variables corrected least squares fit.",
                 .operations = {"laplace_mechanism", "bias_corrected_fit"},
                 .defaults = DefaultDocument("dp-bias-correction", square,
                                             LossKind::kSquared, 1, 1,
                                             {{"single_alpha", 1.0},
                                              {"single_beta", {0.1, -0.1}},
                                              {"alpha", 4.0},
                                              {"beta", {1.0, -1.0}},
                                              {"n_grid", {1000, 10000, 100000}},
                                              {"reps", 10},
                                              {"paired_trials", 10},
                                              {"paired_n", 10000}}),
                 .run = BiasCorrection});

  DatasetSpec unit{.n = 1000,
                   .p_a = 0,
                   .p_b = 3,
                   .distribution = DatasetSpec::Distribution::kUniform,
                   .noise_sd = 0.1,
                   .bound = std::sqrt(3.0)};
  out.push_back(
      {.name = "dp-breach",
       .description = "Bias-corrected imitation built from a Laplace release; "
                      "rho over a grid of n.",
       .operations = {"dp_breach_experiment"},
       .defaults = DefaultDocument("dp-breach", unit, LossKind::kScaledL2, 20,
                                   500, BreachParams()),
       .run = DpBreach});

  DatasetSpec four{.n = 10000,
                   .p_a = 0,
                   .p_b = 4,
                   .distribution = DatasetSpec::Distribution::kUniform,
                   .noise_sd = 0.1,
                   .bound = 1.0};
  out.push_back(
      {.name = "partial-release",
       .description = "Exact release of a subset of columns; imitation from "
                      "the released columns only.",
       .operations = {"partial_release_experiment"},
       .defaults = DefaultDocument(
           "partial-release", four, LossKind::kScaledL2, 20, 2000,
           {{"released", {0}}, {"threshold", 0.3}, {"quadrature_grid", 48}}),
       .run = PartialRelease});

  json params = BreachParams();
  params["released"] = {0};
  params["threshold"] = 0.3;
  params["quadrature_grid"] = 48;
  params["partial_n"] = 10000;
  params["partial_p"] = 4;
  params["vanishing_cap"] = 0.05;
  out.push_back(
      {.name = "dp-non-implication",
       .description = "Runs the DP-release breach and the partial release "
                      "side by side and emits both verdicts.",
       .operations = {"dp_breach_experiment", "partial_release_experiment"},
       .defaults = DefaultDocument("dp-non-implication", unit,
                                   LossKind::kScaledL2, 20, 500, params),
       .run = NonImplication});
}

}  // namespace imitation::harness_internal
