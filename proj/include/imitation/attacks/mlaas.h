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

// Extraction attacks against prediction APIs: each talks to the target only
// through a Channel.

#ifndef IMITATION_ATTACKS_MLAAS_H_
#define IMITATION_ATTACKS_MLAAS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/attacks/api.h"
#include "imitation/core/prediction.h"
#include "imitation/learners/linear_classifier.h"
#include "imitation/learners/logistic.h"
#include "json.hpp"

namespace imitation {

// Sends p + 1 Gaussian rows to a probability-mode logistic API and solves
// [x, 1] theta = logit(response).
absl::StatusOr<LogisticModel> EquationSolvingExtract(Channel& api, int p,
                                                     std::uint64_t seed = 0);

struct FeatureBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static FeatureBox Cube(int dim, double lo, double hi);
  int dim() const { return static_cast<int>(lower.size()); }
  double Volume() const;
  bool Contains(std::span<const double> x) const;
  nlohmann::json ToJson() const;
};

struct PartitionCell {
  std::string leaf_id;
  FeatureBox box;
};

// Recovered axis-aligned partition. Evaluates to the index of the leaf id
// in leaf_ids(); LeafOf gives the id itself.
class Partition final : public Predictor {
 public:
  Partition(std::vector<PartitionCell> cells, int dim);

  int input_dim() const override { return dim_; }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "partition"; }
  nlohmann::json ToJson() const override;

  // Containing cell, or the nearest one for points outside every cell.
  const std::string& LeafOf(std::span<const double> x) const;
  const std::vector<PartitionCell>& cells() const { return cells_; }
  const std::vector<std::string>& leaf_ids() const { return leaf_ids_; }

 private:
  std::vector<PartitionCell> cells_;
  std::vector<std::string> leaf_ids_;
  int dim_;
};

struct PathFindingOptions {
  double resolution = 1e-6;
};

struct PathFindingResult {
  std::shared_ptr<const Partition> partition;
  // Fraction of the search box volume covered by discovered cells.
  double coverage = 0.0;
  bool complete = false;
};

// Leaf-id API: grows cells around box centers by per-axis bisection and
// recurses into the uncovered remainder. Budget exhaustion yields a partial
// partition, not an error.
absl::StatusOr<PathFindingResult> PathFindingExtract(
    Channel& api, const FeatureBox& box,
    const PathFindingOptions& options = {});

struct BoundaryOptions {
  int n_boundary = 0;  // 0 means p + 1
  double tol = 1e-9;
  double box = 10.0;  // search box [-box, box]^p
  int max_probes = 1000;
  std::uint64_t seed = 0;
};

struct BoundaryResult {
  LinearClassifier classifier;
  std::vector<Eigen::VectorXd> boundary_points;
  std::vector<int> queries_per_point;
  // Initial chord length behind each boundary point.
  std::vector<double> chord_lengths;
  int probe_queries = 0;
};

// Label-only API: bisects chords between opposite-label points down to tol
// and fits the hyperplane through the boundary points.
absl::StatusOr<BoundaryResult> BoundaryExtract(Channel& api, int p,
                                               const BoundaryOptions& options);

struct AdaptiveOptions {
  int budget = 0;  // n
  int batch = 0;   // m
  double box = 1.0;
  // false gives the random-query baseline with the same budget.
  bool adaptive = true;
  // Relative perturbation of line-search points, in box units.
  double jitter = 0.0;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct AdaptiveRound {
  int round = 0;
  int queries = 0;
  PredictionFn model;
};

struct AdaptiveResult {
  std::vector<AdaptiveRound> rounds;
  std::shared_ptr<const ImitationSystem> system;
};

// Label-mode retraining: m random queries, then (n - m) / m rounds that query
// points on the current logistic imitation's decision boundary. Models
// output +1/-1 labels.
absl::StatusOr<AdaptiveResult> AdaptiveRetrain(Channel& api, int p,
                                               const AdaptiveOptions& options);

}  // namespace imitation

#endif  // IMITATION_ATTACKS_MLAAS_H_
