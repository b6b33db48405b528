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

#include "imitation/privacy/privacy_metric.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/format.h"
#include "imitation/core/parallel.h"

namespace imitation {
namespace {

struct TaskOutcome {
  double loss = 0.0;
  double capped_loss = 0.0;
  int used = 0;
  int skipped = 0;
};

// Average loss of imitation vs target over the rows of x.
absl::StatusOr<TaskOutcome> AverageLoss(const PredictionFn& target,
                                        const PredictionFn& imitation,
                                        const RowMatrix& x, const LossFn& loss,
                                        const std::string& task_label) {
  if (target.input_dim() != x.cols() || imitation.input_dim() != x.cols()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "rho: module takes ", target.input_dim(), " features, imitation ",
        imitation.input_dim(), ", test points have ", x.cols()));
  }
  TaskOutcome out;
  double sum = 0.0, capped = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::span<const double> row(x.data() + i * x.cols(),
                                static_cast<std::size_t>(x.cols()));
    const double b = target(row);
    if (loss.IsDegenerate(b)) {
      ++out.skipped;
      continue;
    }
    auto l = Loss(loss, imitation(row), b);
    if (!l.ok()) return l.status();
    sum += *l;
    capped += std::min(*l, 1.0);
    ++out.used;
  }
  if (out.used == 0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "task-degenerate: every test point has a near-zero module output (",
        task_label, ")"));
  }
  out.loss = sum / out.used;
  out.capped_loss = capped / out.used;
  return out;
}

absl::StatusOr<PrivacyEstimate> Summarize(
    const std::vector<absl::StatusOr<TaskOutcome>>& outcomes, int n_test) {
  PrivacyEstimate est;
  est.n_tasks = static_cast<int>(outcomes.size());
  est.n_test = n_test;
  int skipped = 0, total = 0;
  double capped = 0.0;
  for (const auto& outcome : outcomes) {
    if (!outcome.ok()) return outcome.status();
    est.per_task_losses.push_back(outcome->loss);
    capped += outcome->capped_loss;
    skipped += outcome->skipped;
    total += outcome->skipped + outcome->used;
  }
  const double k = est.n_tasks;
  double mean = 0.0;
  for (double l : est.per_task_losses) mean += l;
  mean /= k;
  est.rho_hat = mean;
  est.capped_rho_hat = capped / k;
  est.skipped_fraction =
      total == 0 ? 0.0 : static_cast<double>(skipped) / total;
  if (est.n_tasks > 1) {
    double ss = 0.0;
    for (double l : est.per_task_losses) ss += (l - mean) * (l - mean);
    est.std_error = std::sqrt(ss / (k - 1)) / std::sqrt(k);
  } else {
    est.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

nlohmann::json NumberOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json PrivacyEstimate::ToJson() const {
  return {{"rho_hat", NumberOrNull(rho_hat)},
          {"capped_rho_hat", NumberOrNull(capped_rho_hat)},
          {"std_error", NumberOrNull(std_error)},
          {"n_tasks", n_tasks},
          {"n_test", n_test},
          {"skipped_fraction", skipped_fraction},
          {"per_task_losses", per_task_losses}};
}

std::string PrivacyEstimate::CsvHeader() {
  return "experiment_id,rho_hat,std_error,n_tasks,n_test,skipped_fraction";
}

std::string PrivacyEstimate::CsvRow(const std::string& experiment_id) const {
  return absl::StrCat(experiment_id, ",", FormatDouble(rho_hat), ",",
                      FormatDouble(std_error), ",", n_tasks, ",", n_test, ",",
                      FormatDouble(skipped_fraction));
}

absl::StatusOr<PrivacyEstimate> EstimateRho(const Module& module,
                                            const Imitation& imitation,
                                            const RhoConfig& config,
                                            std::uint64_t seed) {
  if (config.n_tasks < 1 || config.n_test < 1) {
    return absl::InvalidArgumentError("rho: n_tasks and n_test must be >= 1");
  }
  if (config.test.dim() != module.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho: test sampler has dimension ", config.test.dim(),
                     ", module has ", module.cols(), " features"));
  }
  std::vector<absl::StatusOr<TaskOutcome>> outcomes(
      config.n_tasks, absl::UnknownError("not run"));
  ParallelFor(config.n_tasks, config.jobs, [&](int t) {
    const std::string label = absl::StrCat("task ", t, ", seed ", seed);
    Rng task_rng(seed, "task", t);
    auto y = config.tasks.Draw(*module.data, task_rng);
    if (!y.ok()) {
      outcomes[t] = y.status();
      return;
    }
    const std::uint64_t fit_seed = Rng(seed, "fit", t).NextBits();
    auto target = FitModule(module, *y, fit_seed);
    if (!target.ok()) {
      outcomes[t] = absl::Status(
          target.status().code(),
          absl::StrCat(label, ": module fit: ", target.status().message()));
      return;
    }
    auto imitating = imitation.Imitate(*y, fit_seed);
    if (!imitating.ok()) {
      outcomes[t] = absl::Status(
          imitating.status().code(),
          absl::StrCat(label, ": imitation: ", imitating.status().message()));
      return;
    }
    Rng test_rng(seed, "test", t);
    const RowMatrix x = config.test.SampleMatrix(test_rng, config.n_test);
    outcomes[t] = AverageLoss(*target, *imitating, x, config.loss, label);
  });
  return Summarize(outcomes, config.n_test);
}

absl::StatusOr<PrivacyEstimate> EmpiricalRho(
    const Module& module, const Imitation& imitation,
    const std::vector<LabelVector>& tasks, const LossFn& loss,
    std::uint64_t seed) {
  if (tasks.empty()) return absl::InvalidArgumentError("rho: no tasks");
  std::vector<absl::StatusOr<TaskOutcome>> outcomes;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].size() != module.rows()) {
      return absl::InvalidArgumentError(
          absl::StrCat("rho: task ", t, " has length ", tasks[t].size(),
                       ", module has ", module.rows(), " rows"));
    }
    auto target = FitModule(module, tasks[t], seed);
    if (!target.ok()) return target.status();
    auto imitating = imitation.Imitate(tasks[t], seed);
    if (!imitating.ok()) return imitating.status();
    outcomes.push_back(AverageLoss(*target, *imitating, module.data->values(),
                                   loss, absl::StrCat("task ", t)));
  }
  return Summarize(outcomes, module.rows());
}

absl::StatusOr<PrivacyEstimate> FunctionRho(const PredictionFn& target,
                                            const PredictionFn& imitation,
                                            const TestSampler& test,
                                            const LossFn& loss, int n_test,
                                            std::uint64_t seed) {
  if (n_test < 1) return absl::InvalidArgumentError("rho: n_test must be >= 1");
  Rng test_rng(seed, "test", 0);
  const RowMatrix x = test.SampleMatrix(test_rng, n_test);
  std::vector<absl::StatusOr<TaskOutcome>> outcomes;
  outcomes.push_back(AverageLoss(target, imitation, x, loss,
                                 absl::StrCat("single task, seed ", seed)));
  return Summarize(outcomes, n_test);
}

nlohmann::json EpsDeltaVerdict::ToJson() const {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& e : evidence) {
    trials.push_back({{"trial", e.trial},
                      {"minimizer", e.minimizer},
                      {"min_rho", NumberOrNull(e.min_rho)},
                      {"at_most_eps", e.at_most_eps}});
  }
  return {{"verdict", breached ? "breached" : "private"},
          {"probability", probability},
          {"eps", eps},
          {"delta", delta},
          {"evidence", trials}};
}

absl::StatusOr<EpsDeltaVerdict> CheckEpsDelta(
    const Module& module, const std::vector<ImitationCandidate>& family,
    const RhoConfig& config, double eps, double delta, int n_trials,
    std::uint64_t seed) {
  if (family.empty()) {
    return absl::InvalidArgumentError("eps-delta: empty imitation family");
  }
  if (!(eps >= 0 && eps <= 1) || !(delta >= 0 && delta <= 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "eps-delta: eps and delta must lie in [0,1], got ", eps, ", ", delta));
  }
  if (n_trials < 1) {
    return absl::InvalidArgumentError("eps-delta: n_trials must be >= 1");
  }
  EpsDeltaVerdict verdict{.eps = eps, .delta = delta};
  int hits = 0;
  for (int trial = 0; trial < n_trials; ++trial) {
    const std::uint64_t trial_seed = Rng(seed, "trial", trial).NextBits();
    EpsDeltaTrial evidence{.trial = trial,
                           .min_rho = std::numeric_limits<double>::infinity()};
    for (const ImitationCandidate& candidate : family) {
      auto imitation = candidate.build(trial_seed);
      if (!imitation.ok()) return imitation.status();
      auto est = EstimateRho(module, **imitation, config, trial_seed);
      if (!est.ok()) return est.status();
      if (est->rho_hat < evidence.min_rho) {
        evidence.min_rho = est->rho_hat;
        evidence.minimizer = candidate.name;
      }
    }
    evidence.at_most_eps = evidence.min_rho <= eps;
    hits += evidence.at_most_eps ? 1 : 0;
    verdict.evidence.push_back(std::move(evidence));
  }
  verdict.probability = static_cast<double>(hits) / n_trials;
  verdict.breached = verdict.probability > delta;
  return verdict;
}

}  // namespace imitation
