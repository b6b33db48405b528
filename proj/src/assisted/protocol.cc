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

#include "imitation/assisted/protocol.h"

#include <cmath>
#include <memory>

#include "absl/strings/str_cat.h"
#include "imitation/core/format.h"
#include "imitation/core/rng.h"

namespace imitation {
namespace {

struct PartyFit {
  PredictionFn component;
  Eigen::VectorXd fitted;
};

// One party's turn: fit its learner to the received label on its own rows.
// A party without features can only return zero.
absl::StatusOr<PartyFit> FitParty(const Module& party,
                                  const Eigen::VectorXd& target,
                                  std::uint64_t seed) {
  if (party.cols() == 0) {
    return PartyFit{MakeZeroFn(0), Eigen::VectorXd::Zero(target.size())};
  }
  auto fn = FitModule(party, LabelVector::Regression(target), seed);
  if (!fn.ok()) return fn.status();
  auto fitted = Evaluate(*fn, *party.data);
  if (!fitted.ok()) return fitted.status();
  return PartyFit{*std::move(fn), fitted->values()};
}

absl::Status WithRound(const absl::Status& status, const std::string& party,
                       int round) {
  return absl::Status(status.code(),
                      absl::StrCat(party, " fit failed in round ", round, ": ",
                                   status.message()));
}

PredictionFn Sum(int dim, std::vector<PredictionFn> components,
                 const std::string& party) {
  return PredictionFn(
      std::make_shared<AdditiveFunction>(dim, std::move(components)),
      Provenance{.learner = "additive", .data_id = party});
}

}  // namespace

absl::Status ProtocolConfig::Validate() const {
  if (max_rounds < 1) {
    return absl::InvalidArgumentError("protocol: max_rounds must be >= 1");
  }
  if (!(theta > 0)) {
    return absl::InvalidArgumentError("protocol: theta must be > 0");
  }
  return absl::OkStatus();
}

double AdditiveFunction::Predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const PredictionFn& f : components_) sum += f(x);
  return sum;
}

nlohmann::json AdditiveFunction::ToJson() const {
  nlohmann::json parts = nlohmann::json::array();
  for (const PredictionFn& f : components_) parts.push_back(f.impl().ToJson());
  return {{"algorithm", "additive"}, {"components", parts}};
}

std::vector<double> ProtocolTranscript::MseTrace() const {
  std::vector<double> out;
  for (const ProtocolRound& r : rounds) out.push_back(r.mse);
  return out;
}

nlohmann::json ProtocolTranscript::ToJson() const {
  nlohmann::json out = {{"stop_reason", stop_reason},
                        {"label_norm", label.norm()}};
  nlohmann::json list = nlohmann::json::array();
  for (const ProtocolRound& r : rounds) {
    list.push_back({{"round", r.round},
                    {"alice_residual_norm", r.alice_residual.norm()},
                    {"bob_residual_norm", r.bob_residual.norm()},
                    {"mse", r.mse},
                    {"alice_component", r.alice_component.impl().ToJson()},
                    {"bob_component", r.bob_component.impl().ToJson()}});
  }
  out["rounds"] = list;
  return out;
}

std::string ProtocolTranscript::MseCsv() const {
  std::string out = "round,mse\n";
  for (const ProtocolRound& r : rounds) {
    absl::StrAppend(&out, r.round, ",", FormatDouble(r.mse), "\n");
  }
  return out;
}

absl::StatusOr<Stage1Result> RunStage1(const Module& alice, const Module& bob,
                                       const LabelVector& y,
                                       const ProtocolConfig& config,
                                       std::uint64_t seed) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (alice.rows() != bob.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("protocol: Alice has ", alice.rows(), " rows, Bob has ",
                     bob.rows(), "; data must be collated"));
  }
  if (y.size() != alice.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "protocol: label length ", y.size(), " vs ", alice.rows(), " rows"));
  }
  const double n = static_cast<double>(y.size());
  ProtocolTranscript transcript{.label = y.values()};
  std::vector<PredictionFn> alice_parts, bob_parts;
  Eigen::VectorXd target = y.values();

  for (int round = 1; round <= config.max_rounds; ++round) {
    auto a = FitParty(alice, target, Rng(seed, "alice", round).NextBits());
    if (!a.ok()) return WithRound(a.status(), "Alice", round);
    Eigen::VectorXd e_alice = target - a->fitted;

    auto b = FitParty(bob, e_alice, Rng(seed, "bob", round).NextBits());
    if (!b.ok()) return WithRound(b.status(), "Bob", round);
    Eigen::VectorXd e_bob = e_alice - b->fitted;

    const double previous = target.norm();
    const double current = e_bob.norm();
    alice_parts.push_back(a->component);
    bob_parts.push_back(b->component);
    transcript.rounds.push_back({.round = round,
                                 .alice_residual = std::move(e_alice),
                                 .bob_residual = e_bob,
                                 .alice_component = a->component,
                                 .bob_component = b->component,
                                 .mse = current * current / n});
    target = std::move(e_bob);

    if (bob.cols() == 0 || alice.cols() == 0) {
      transcript.stop_reason = "one party has no features";
      break;
    }
    if (current == 0.0) {
      transcript.stop_reason = "zero residual";
      break;
    }
    if (config.stop_rule == ProtocolConfig::StopRule::kRelativeImprovement &&
        (previous - current) / previous < config.theta) {
      transcript.stop_reason = "relative improvement below theta";
      break;
    }
    if (round == config.max_rounds) transcript.stop_reason = "max rounds";
  }
  AssistedPredictor predictor{Sum(alice.cols(), alice_parts, alice.id),
                              Sum(bob.cols(), bob_parts, bob.id)};
  return Stage1Result{std::move(predictor), std::move(transcript)};
}

absl::StatusOr<double> Stage2Predict(const AssistedPredictor& predictor,
                                     std::span<const double> x_alice,
                                     std::span<const double> x_bob) {
  if (static_cast<int>(x_alice.size()) != predictor.alice.input_dim() ||
      static_cast<int>(x_bob.size()) != predictor.bob.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("stage II: expected (", predictor.alice.input_dim(), ", ",
                     predictor.bob.input_dim(), ") features, got (",
                     x_alice.size(), ", ", x_bob.size(), ")"));
  }
  return predictor.alice(x_alice) + predictor.bob(x_bob);
}

AssistedPredictor ReplayTranscript(const ProtocolTranscript& transcript,
                                   int alice_dim, int bob_dim) {
  std::vector<PredictionFn> alice_parts, bob_parts;
  for (const ProtocolRound& r : transcript.rounds) {
    alice_parts.push_back(r.alice_component);
    bob_parts.push_back(r.bob_component);
  }
  return {Sum(alice_dim, std::move(alice_parts), "alice"),
          Sum(bob_dim, std::move(bob_parts), "bob")};
}

absl::StatusOr<OracleResult> OracleFit(const DataMatrix& x_alice,
                                       const DataMatrix& x_bob,
                                       const LabelVector& y,
                                       const LearnerSpec& learner,
                                       std::uint64_t seed) {
  auto joint = ConcatColumns(x_alice, x_bob);
  if (!joint.ok()) return joint.status();
  auto fn = FitLearner(learner, *joint, y, seed, "alice+bob");
  if (!fn.ok()) return fn.status();
  auto fitted = Evaluate(*fn, *joint);
  if (!fitted.ok()) return fitted.status();
  const double mse = (y.values() - fitted->values()).squaredNorm() / y.size();
  return OracleResult{mse, *std::move(fn)};
}

}  // namespace imitation
