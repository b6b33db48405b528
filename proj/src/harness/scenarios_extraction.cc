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

// Prediction-API extraction scenarios and the black-box audit.

#include <algorithm>
#include <cmath>
#include <memory>

#include "absl/strings/str_cat.h"
#include "imitation/attacks/api.h"
#include "imitation/attacks/assisted_attacks.h"
#include "imitation/attacks/mlaas.h"
#include "imitation/learners/linear_classifier.h"
#include "imitation/learners/logistic.h"
#include "imitation/learners/regression_tree.h"
#include "imitation/privacy/privacy_metric.h"
#include "scenarios_internal.h"

namespace imitation::harness_internal {
namespace {

using nlohmann::json;

std::span<const double> AsSpan(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

std::shared_ptr<Target> LogisticTarget(const Eigen::VectorXd& w, double b) {
  return MakePretrainedTarget(
      "logistic", PredictionFn(std::make_shared<LogisticModel>(w, b),
                               Provenance{.learner = "logistic"}));
}

absl::StatusOr<std::shared_ptr<Target>> ClassifierTarget(
    const Eigen::VectorXd& w, double c) {
  auto classifier = LinearClassifier::Create(w, c);
  if (!classifier.ok()) return classifier.status();
  return MakePretrainedTarget(
      "classifier",
      PredictionFn(std::make_shared<LinearClassifier>(*std::move(classifier)),
                   Provenance{.learner = "linear_classifier"}));
}

// Depth-limited tree fit to a smooth surface on [-5, 5]^2.
absl::StatusOr<RegressionTree> SurfaceTree(std::uint64_t seed, int depth) {
  Rng rng(seed, "tree-data", 0);
  RowMatrix x(200, 2);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = rng.Uniform(-5, 5);
    x(i, 1) = rng.Uniform(-5, 5);
    y[i] = std::sin(x(i, 0)) + 0.3 * x(i, 1) + 0.1 * rng.Normal();
  }
  auto data = DataMatrix::Create(std::move(x));
  if (!data.ok()) return data.status();
  return FitTree(*data, LabelVector::Regression(y), {.max_depth = depth});
}

std::shared_ptr<Target> TreeTarget(RegressionTree tree) {
  return MakePretrainedTarget(
      "tree", PredictionFn(std::make_shared<RegressionTree>(std::move(tree)),
                           Provenance{.learner = "tree"}));
}

double Angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  const double s = (a / a.norm() - c * b / b.norm()).norm();
  return std::atan2(s, c);
}

Eigen::VectorXd Normal(const LinearClassifier& c) {
  Eigen::VectorXd v(c.weights().size() + 1);
  v << c.weights(), c.offset();
  return v;
}

absl::StatusOr<ScenarioOutput> EquationSolving(const ScenarioContext& ctx) {
  const int trials = ctx.param("trials").get<int>();
  const int p_max = ctx.param("p_max").get<int>();
  const double tol = ctx.param("tolerance").get<double>();
  double max_error = 0.0;
  int exact_budget = 0;
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < trials; ++t) {
    const int p = 1 + t % p_max;
    Rng rng(ctx.config.seed, "target", static_cast<std::uint64_t>(t));
    const Eigen::VectorXd w = NormalVector(rng, p);
    const double b = rng.Normal();
    ApiView api(LogisticTarget(w, b), ResponseMode::kProbability);
    auto model = EquationSolvingExtract(api, p, ctx.config.seed + t);
    if (!model.ok()) return model.status();
    Eigen::VectorXd truth(p + 1), got(p + 1);
    truth << w, b;
    got << model->weights(), model->bias();
    const double err = (got - truth).norm() / truth.norm();
    max_error = std::max(max_error, err);
    exact_budget += api.queries_used() == p + 1 ? 1 : 0;
    rows.push_back({static_cast<double>(t), static_cast<double>(p),
                    static_cast<double>(api.queries_used()), err});
  }
  ScenarioOutput out;
  out.results = {{"trials", trials},
                 {"max_relative_error", max_error},
                 {"trials_with_p_plus_1_queries", exact_budget}};
  out.traces.push_back(
      {"equation_solving.csv",
       CsvTable({"trial", "p", "queries", "relative_error"}, rows)});
  out.Check("relative weight error within tolerance", max_error <= tol,
            {{"max_relative_error", max_error}, {"tolerance", tol}});
  out.Check("every target used exactly p + 1 queries", exact_budget == trials,
            {{"count", exact_budget}});
  return out;
}

absl::StatusOr<ScenarioOutput> PathFinding(const ScenarioContext& ctx) {
  const int depth = ctx.param("depth").get<int>();
  const double half = ctx.param("box").get<double>();
  const int grid = ctx.param("probe_grid").get<int>();
  auto tree = SurfaceTree(ctx.config.seed, depth);
  if (!tree.ok()) return tree.status();
  ApiView api(TreeTarget(*tree), ResponseMode::kLeafId);
  auto result =
      PathFindingExtract(api, FeatureBox::Cube(2, -half, half),
                         {.resolution = ctx.param("resolution").get<double>()});
  if (!result.ok()) return result.status();
  int agree = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x[2] = {-half + 2 * half * (i + 0.5) / grid,
                           -half + 2 * half * (j + 0.5) / grid};
      agree += tree->LeafId(x) == result->partition->LeafOf(x) ? 1 : 0;
    }
  }
  const double agreement = static_cast<double>(agree) / (grid * grid);
  ScenarioOutput out;
  out.results = {
      {"leaves", tree->Leaves().size()},
      {"cells", result->partition->cells().size()},
      {"queries", api.queries_used()},
      {"coverage", result->coverage},
      {"complete", result->complete},
      {"grid_agreement", agreement},
      {"partition", result->partition->ToJson()},
      {"record", MakeRecord("path-finding", api, "tree").ToJson(false)}};
  out.Check("partition complete", result->complete);
  out.Check("recovered leaves agree on every grid probe", agreement == 1.0,
            {{"agreement", agreement}});
  return out;
}

absl::StatusOr<ScenarioOutput> BoundaryExtraction(const ScenarioContext& ctx) {
  const int p = ctx.param("p").get<int>();
  const double box = ctx.param("box").get<double>();
  const double tol = ctx.param("tolerance").get<double>();
  Rng rng(ctx.config.seed, "boundary-target", 0);
  const Eigen::VectorXd w = NormalVector(rng, p);
  const double c = rng.Uniform(-2, 2);
  auto target = ClassifierTarget(w, c);
  if (!target.ok()) return target.status();
  ApiView api(*target, ResponseMode::kLabel);
  auto result =
      BoundaryExtract(api, p,
                      {.n_boundary = ctx.param("n_boundary").get<int>(),
                       .tol = tol,
                       .box = box,
                       .seed = ctx.config.seed});
  if (!result.ok()) return result.status();
  const LinearClassifier truth = *LinearClassifier::Create(w, c);
  Eigen::VectorXd truth_normal(p + 1);
  truth_normal << w, c;
  const double angle = Angle(Normal(result->classifier), truth_normal);

  const int n_probes = ctx.param("probes").get<int>();
  Rng probe(ctx.config.seed, "boundary-probe", 0);
  int disagree = 0;
  Eigen::VectorXd x(p);
  for (int k = 0; k < n_probes; ++k) {
    for (int j = 0; j < p; ++j) x[j] = probe.Uniform(-box, box);
    disagree +=
        truth.Classify(AsSpan(x)) != result->classifier.Classify(AsSpan(x));
  }
  const double disagreement = static_cast<double>(disagree) / n_probes;

  int worst = 0;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < result->queries_per_point.size(); ++i) {
    const int bound =
        1 +
        static_cast<int>(std::ceil(std::log2(result->chord_lengths[i] / tol)));
    worst = std::max(worst, std::abs(result->queries_per_point[i] - bound));
    rows.push_back({static_cast<double>(i), result->chord_lengths[i],
                    static_cast<double>(result->queries_per_point[i]),
                    static_cast<double>(bound)});
  }
  ScenarioOutput out;
  out.results = {{"angle_rad", angle},
                 {"probe_disagreement", disagreement},
                 {"queries", api.queries_used()},
                 {"probe_queries", result->probe_queries},
                 {"queries_per_point", result->queries_per_point},
                 {"max_bisection_deviation", worst},
                 {"recovered", ToJsonArray(Normal(result->classifier))},
                 {"truth", ToJsonArray(truth_normal)}};
  out.traces.push_back(
      {"boundary_points.csv",
       CsvTable({"point", "chord", "queries", "bisection_bound"}, rows)});
  out.Check("hyperplane direction within 1e-3 rad", angle <= 1e-3,
            {{"angle", angle}});
  out.Check("probe disagreement at most 1e-3", disagreement <= 1e-3,
            {{"disagreement", disagreement}});
  out.Check("queries per point match the bisection bound within 2", worst <= 2,
            {{"max_deviation", worst}});
  return out;
}

absl::StatusOr<double> ZeroOneDistance(const PredictionFn& target,
                                       const PredictionFn& model, int n_probe,
                                       std::uint64_t seed) {
  auto test = FeatureDistribution::Uniform(target.input_dim(), 1.0);
  if (!test.ok()) return test.status();
  auto est = FunctionRho(target, model, *test, LossFn{LossKind::kZeroOne},
                         n_probe, seed);
  if (!est.ok()) return est.status();
  return est->rho_hat;
}

absl::StatusOr<ScenarioOutput> AdaptiveRetraining(const ScenarioContext& ctx) {
  const std::vector<int> budgets = IntList(ctx.param("budgets"));
  const int batch = ctx.param("batch").get<int>();
  const int reps = ctx.param("reps").get<int>();
  const int n_probe = ctx.param("probes").get<int>();
  const std::uint64_t seed = ctx.config.seed;
  std::vector<double> adaptive(budgets.size(), 0.0),
      random(budgets.size(), 0.0);
  int wins = 0, comparisons = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(seed, "adaptive-target", static_cast<std::uint64_t>(rep));
    const Eigen::VectorXd w = NormalVector(rng, 2);
    auto target = ClassifierTarget(w, rng.Uniform(-0.3, 0.3));
    if (!target.ok()) return target.status();
    for (std::size_t k = 0; k < budgets.size(); ++k) {
      double rho[2];
      for (int mode = 0; mode < 2; ++mode) {
        ApiView api(*target, ResponseMode::kLabel);
        auto r = AdaptiveRetrain(api, 2,
                                 {.budget = budgets[k],
                                  .batch = batch,
                                  .adaptive = mode == 0,
                                  .seed = seed * 1000 + rep});
        if (!r.ok()) return r.status();
        auto d = ZeroOneDistance(*(*target)->pretrained, r->rounds.back().model,
                                 n_probe, seed + rep);
        if (!d.ok()) return d.status();
        rho[mode] = *d;
      }
      adaptive[k] += rho[0] / reps;
      random[k] += rho[1] / reps;
      wins += rho[0] <= rho[1] ? 1 : 0;
      ++comparisons;
    }
  }
  std::vector<std::vector<double>> rows;
  bool decreasing = true;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    rows.push_back({static_cast<double>(budgets[k]), adaptive[k], random[k]});
    if (k > 0 && !(adaptive[k] < adaptive[k - 1])) decreasing = false;
  }
  ScenarioOutput out;
  out.results = {{"budgets", budgets},
                 {"adaptive_zero_one", adaptive},
                 {"random_zero_one", random},
                 {"adaptive_no_worse", wins},
                 {"comparisons", comparisons}};
  out.traces.push_back(
      {"adaptive_curve.csv",
       CsvTable({"budget", "adaptive_zero_one", "random_zero_one"}, rows)});
  out.Check("adaptive error falls as the budget grows", decreasing,
            {{"adaptive_zero_one", adaptive}});
  out.Check("adaptive no worse than random in most paired runs",
            wins * 10 >= comparisons * 7,
            {{"wins", wins}, {"comparisons", comparisons}});
  return out;
}

// Runs an attack live, swaps the target's private state, replays the frozen
// log and compares outputs. A fresh live run on the swapped target must differ.
struct TamperOutcome {
  bool replay_identical = false;
  bool fresh_differs = false;
  int queries = 0;
  int replay_queries = 0;
};

json TamperJson(const TamperOutcome& o) {
  return {{"replay_identical", o.replay_identical},
          {"fresh_differs", o.fresh_differs},
          {"queries", o.queries},
          {"replay_queries", o.replay_queries}};
}

absl::StatusOr<TamperOutcome> AuditEquationSolving(std::uint64_t seed) {
  auto target = LogisticTarget(Eigen::Vector3d(1, -2, 0.5), 0.3);
  ApiView live(target, ResponseMode::kProbability);
  auto before = EquationSolvingExtract(live, 3, seed);
  if (!before.ok()) return before.status();
  target->pretrained = LogisticTarget(Eigen::Vector3d(-1, 0, 4), 2)->pretrained;
  ReplayChannel replay(live.log());
  auto after = EquationSolvingExtract(replay, 3, seed);
  if (!after.ok()) return after.status();
  ApiView tampered(target, ResponseMode::kProbability);
  auto fresh = EquationSolvingExtract(tampered, 3, seed);
  if (!fresh.ok()) return fresh.status();
  return TamperOutcome{before->ToJson().dump() == after->ToJson().dump(),
                       before->ToJson().dump() != fresh->ToJson().dump(),
                       live.queries_used(), replay.queries_used()};
}

absl::StatusOr<TamperOutcome> AuditPathFinding(std::uint64_t seed) {
  auto tree = SurfaceTree(seed, 2);
  auto other = SurfaceTree(seed + 1, 2);
  if (!tree.ok()) return tree.status();
  if (!other.ok()) return other.status();
  auto target = TreeTarget(*tree);
  const FeatureBox box = FeatureBox::Cube(2, -5, 5);
  ApiView live(target, ResponseMode::kLeafId);
  auto before = PathFindingExtract(live, box);
  if (!before.ok()) return before.status();
  target->pretrained = TreeTarget(*other)->pretrained;
  ReplayChannel replay(live.log());
  auto after = PathFindingExtract(replay, box);
  if (!after.ok()) return after.status();
  ApiView tampered(target, ResponseMode::kLeafId);
  auto fresh = PathFindingExtract(tampered, box);
  if (!fresh.ok()) return fresh.status();
  const std::string a = before->partition->ToJson().dump();
  return TamperOutcome{a == after->partition->ToJson().dump(),
                       a != fresh->partition->ToJson().dump(),
                       live.queries_used(), replay.queries_used()};
}

absl::StatusOr<Module> GaussianModule(Rng& rng, int n, int p) {
  RowMatrix x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.Normal();
  }
  auto data = DataMatrix::Create(std::move(x));
  if (!data.ok()) return data.status();
  return Module::Create("bob", LearnerSpec::Ols(), *std::move(data));
}

absl::StatusOr<TamperOutcome> AuditRotation(std::uint64_t seed) {
  Rng rng(seed, "audit-rotation", 0);
  const int n = 2000;
  auto bob = GaussianModule(rng, n, 2);
  if (!bob.ok()) return bob.status();
  auto target = MakeTarget("bob", *std::move(bob), 0.1);
  const RotationAttackOptions options{.p = 2, .intercept = false, .seed = seed};
  ApiView live(target, ResponseMode::kResidual);
  auto before = CovarianceRotationAttack(live, n, options);
  if (!before.ok()) return before.status();
  auto swapped = GaussianModule(rng, n, 2);
  if (!swapped.ok()) return swapped.status();
  target->module = *std::move(swapped);
  ReplayChannel replay(live.log());
  auto after = CovarianceRotationAttack(replay, n, options);
  if (!after.ok()) return after.status();
  ApiView tampered(target, ResponseMode::kResidual);
  auto fresh = CovarianceRotationAttack(tampered, n, options);
  if (!fresh.ok()) return fresh.status();
  return TamperOutcome{
      before->rotation.x_hat.values() == after->rotation.x_hat.values(),
      before->rotation.x_hat.values() != fresh->rotation.x_hat.values(),
      live.queries_used(), replay.queries_used()};
}

absl::StatusOr<TamperOutcome> AuditCover(std::uint64_t seed) {
  Rng rng(seed, "audit-cover", 0);
  const int n = 300;
  auto bob = GaussianModule(rng, n, 1);
  if (!bob.ok()) return bob.status();
  auto target = MakeTarget("bob", *std::move(bob), 0.2);
  auto cover = MakeLinearCover(-1, 1, 0.1, 21, 0.2);
  if (!cover.ok()) return cover.status();
  ApiView live(target, ResponseMode::kResidual);
  auto before = EpsilonCoverImitate(*cover, live, n);
  if (!before.ok()) return before.status();
  auto swapped = GaussianModule(rng, n, 1);
  if (!swapped.ok()) return swapped.status();
  target->module = *std::move(swapped);
  ReplayChannel replay(live.log());
  auto after = EpsilonCoverImitate(*cover, replay, n);
  if (!after.ok()) return after.status();
  ApiView tampered(target, ResponseMode::kResidual);
  auto fresh = EpsilonCoverImitate(*cover, tampered, n);
  if (!fresh.ok()) return fresh.status();
  const LabelVector y = LabelVector::Regression(NormalVector(rng, n));
  auto f_before = (*before)->Imitate(y, 0);
  auto f_after = (*after)->Imitate(y, 0);
  auto f_fresh = (*fresh)->Imitate(y, 0);
  if (!f_before.ok()) return f_before.status();
  if (!f_after.ok()) return f_after.status();
  if (!f_fresh.ok()) return f_fresh.status();
  const std::string a = f_before->impl().ToJson().dump();
  return TamperOutcome{a == f_after->impl().ToJson().dump(),
                       a != f_fresh->impl().ToJson().dump(),
                       live.queries_used(), replay.queries_used()};
}

absl::StatusOr<ScenarioOutput> BlackBoxAudit(const ScenarioContext& ctx) {
  const std::uint64_t seed = ctx.config.seed;
  ScenarioOutput out;
  const std::vector<
      std::pair<std::string, absl::StatusOr<TamperOutcome> (*)(std::uint64_t)>>
      audits = {{"covariance-rotation", AuditRotation},
                {"epsilon-cover", AuditCover},
                {"equation-solving", AuditEquationSolving},
                {"path-finding", AuditPathFinding}};
  for (const auto& [name, audit] : audits) {
    auto outcome = audit(seed);
    if (!outcome.ok()) return outcome.status();
    out.results[name] = TamperJson(*outcome);
    out.Check(absl::StrCat(name, " output identical after tamper"),
              outcome->replay_identical && outcome->fresh_differs &&
                  outcome->queries == outcome->replay_queries,
              TamperJson(*outcome));
  }
  return out;
}

DatasetSpec Unused() { return {.n = 1, .p_a = 0, .p_b = 1, .noise_sd = 0.0}; }

}  // namespace

void AddExtractionScenarios(std::vector<Scenario>& out) {
  out.push_back({.name = "equation-solving",
                 .description =
                     "Exact logistic extraction from p + 1 probability "
                     "queries over random targets.",
                 .operations = {"equation_solving_extract"},
                 .defaults = DefaultDocument(
                     "equation-solving", Unused(), LossKind::kSquared, 1, 1,
                     {{"trials", 100}, {"p_max", 5}, {"tolerance", 1e-8}}),
                 .run = EquationSolving});
  out.push_back({.name = "path-finding",
                 .description =
                     "Leaf-identifier path finding on a fitted regression "
                     "tree; partition checked on a probe grid.",
                 .operations = {"path_finding_extract"},
                 .defaults = DefaultDocument("path-finding", Unused(),
                                             LossKind::kSquared, 1, 1,
                                             {{"depth", 3},
                                              {"box", 5.0},
                                              {"resolution", 1e-6},
                                              {"probe_grid", 100}}),
                 .run = PathFinding});
  out.push_back({.name = "boundary-extraction",
                 .description =
                     "Label-only hyperplane recovery by bisection along "
                     "random chords.",
                 .operations = {"boundary_extract"},
                 .defaults = DefaultDocument("boundary-extraction", Unused(),
                                             LossKind::kZeroOne, 1, 1,
                                             {{"p", 3},
                                              {"n_boundary", 0},
                                              {"tolerance", 1e-9},
                                              {"box", 10.0},
                                              {"probes", 100000}}),
                 .run = BoundaryExtraction});
  out.push_back({.name = "adaptive-retraining",
                 .description =
                     "Adaptive versus uniformly random label queries against "
                     "a linear classifier at equal budgets.",
                 .operations = {"adaptive_retrain"},
                 .defaults = DefaultDocument("adaptive-retraining", Unused(),
                                             LossKind::kZeroOne, 1, 1,
                                             {{"budgets", {20, 80, 320}},
                                              {"batch", 10},
                                              {"reps", 5},
                                              {"probes", 20000}}),
                 .run = AdaptiveRetraining});
  out.push_back(
      {.name = "black-box-audit",
       .description = "Freezes each attack's query log, swaps the target's "
                      "private state and replays; outputs must not change.",
       .operations = {"equation_solving_extract", "path_finding_extract",
                      "covariance_rotation_attack", "epsilon_cover_imitate"},
       .defaults = DefaultDocument("black-box-audit", Unused(),
                                   LossKind::kSquared, 1, 1, json::object()),
       .run = BlackBoxAudit});
}

}  // namespace imitation::harness_internal
