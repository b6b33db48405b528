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

// Imitation constructions against an assisted-learning party that answers
// Stage I label vectors.

#ifndef IMITATION_ATTACKS_ASSISTED_ATTACKS_H_
#define IMITATION_ATTACKS_ASSISTED_ATTACKS_H_

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/attacks/api.h"
#include "imitation/core/rng.h"
#include "imitation/core/types.h"
#include "imitation/privacy/samplers.h"
#include "json.hpp"

namespace imitation {

struct SpanBasis {
  Eigen::MatrixXd basis;  // n x rank, orthonormal columns
  int rank = 0;
  bool rank_deficient = false;
};

// Orthonormal basis of the span of the columns of `fitted` (n x k).
// rank_deficient is set when the numerical rank is below expected_rank.
SpanBasis SpanFromResponses(const Eigen::MatrixXd& fitted, int expected_rank,
                            double tolerance = 1e-9);

// Sends k1 Gaussian label vectors to a residual- or fitted-mode channel and
// recovers span(X_B) of dimension p. Needs k1 >= min{p, n - p}; with
// k1 < p the residuals give the orthogonal complement, which is complemented
// back.
absl::StatusOr<SpanBasis> RecoverColumnSpace(Channel& bob, int k1, int n, int p,
                                             std::uint64_t seed = 0);

struct RotationQuery {
  Eigen::VectorXd beta;
  // K_t = X_tilde^T Y_t / n.
  Eigen::VectorXd k;
};

struct RotationSolution {
  Eigen::MatrixXd q_hat;
  DataMatrix x_hat;
};

// Q_hat = K B^{-1}; rows of x_tilde are Q x_i, so X_hat = X_tilde Q_hat^{-T}.
absl::StatusOr<RotationSolution> SolveRotation(
    const DataMatrix& x_tilde, const std::vector<RotationQuery>& queries);

struct RotationAttackOptions {
  int p = 0;
  // Bob's learner fits an intercept; the ones direction is then removed from
  // the recovered span.
  bool intercept = false;
  std::uint64_t seed = 0;
};

struct RotationAttackResult {
  SpanBasis span;
  RotationSolution rotation;
  std::shared_ptr<const ImitationSystem> system;
};

// Column-space recovery, then p task-oracle labels Y_t = X_B e_t + noise
// (each also sent through Stage I), then the rotation solve. Side info: Bob's
// feature covariance is the identity.
absl::StatusOr<RotationAttackResult> CovarianceRotationAttack(
    Channel& bob, int n, const RotationAttackOptions& options);

struct TreeStructure {
  // Row indices, from one anchor to the other.
  std::vector<int> order;
  bool consistent = false;
  // Leaf patterns never distinguish an order from its reverse.
  bool reflection_ambiguous = true;
  std::vector<int> anchors;
  // (query i, member j, intruder k): k sits between members of query i's
  // support but is not a member.
  std::vector<std::array<int, 3>> violations;
  std::vector<std::vector<int>> supports;

  nlohmann::json ToJson() const;
};

// responses[i] is Bob's fitted vector for the basis label e_i. Every nonzero
// pattern must be an interval of the recovered order; all-zero rows anchor
// the two ends.
absl::StatusOr<TreeStructure> TreeStructureRecover(
    const std::vector<Eigen::VectorXd>& responses, int node_cap = 1000000);

// Explicit grid cover of {x -> a x : a in [a_min, a_max]} in L2(P_X).
struct CoverSpec {
  double a_min = -1.0;
  double a_max = 1.0;
  double eps = 0.0;
  std::vector<double> grid;
  double noise_sd = 0.0;
  // sqrt(E x^2) under P_X; distances are |a - a'| * x_rms.
  double x_rms = 1.0;

  // Grid pitch / 2 scaled to L2(P_X).
  double Radius() const;
  // log(grid size), in nats.
  double Entropy() const { return std::log(static_cast<double>(grid.size())); }
  nlohmann::json ToJson() const;
};

// n_grid = 0 picks the smallest grid with radius <= eps; an explicit n_grid
// whose radius exceeds eps is an error.
absl::StatusOr<CoverSpec> MakeLinearCover(double a_min, double a_max,
                                          double eps, int n_grid,
                                          double noise_sd, double x_rms = 1.0);

// Largest distance from n_members random family members to the grid,
// estimated on n_points draws from P_X.
double SampledCoverRadius(const CoverSpec& cover,
                          const FeatureDistribution& marginal, int n_members,
                          int n_points, std::uint64_t seed);

// Dictionary attack: one Stage I query per grid element with labels from the
// task oracle, then nearest-label matching of a new task to a stored Stage II
// endpoint.
absl::StatusOr<std::shared_ptr<const ImitationSystem>> EpsilonCoverImitate(
    const CoverSpec& cover, Channel& bob, int n);

}  // namespace imitation

#endif  // IMITATION_ATTACKS_ASSISTED_ATTACKS_H_
