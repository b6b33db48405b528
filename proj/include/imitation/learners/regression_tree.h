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

#ifndef IMITATION_LEARNERS_REGRESSION_TREE_H_
#define IMITATION_LEARNERS_REGRESSION_TREE_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "imitation/core/prediction.h"
#include "imitation/core/types.h"

namespace imitation {

struct TreeOptions {
  int max_depth = 1;
  // Minimum number of training rows in each child of a split.
  int min_leaf = 1;
};

// Node of a binary regression tree. Rows with x[feature] <= threshold go
// left. Leaf identifiers spell the path from the root: "T", "TL", "TLR", ...
struct TreeNode {
  bool is_leaf = true;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::vector<int> members;
  std::string leaf_id;
};

inline constexpr char kRootLeafId[] = "T";

class RegressionTree final : public Predictor {
 public:
  RegressionTree(std::vector<TreeNode> nodes, int input_dim,
                 TreeOptions options)
      : nodes_(std::move(nodes)), input_dim_(input_dim), options_(options) {}

  int input_dim() const override { return input_dim_; }
  double Predict(std::span<const double> x) const override;
  std::string algorithm() const override { return "tree"; }
  nlohmann::json ToJson() const override;

  const std::string& LeafId(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<const TreeNode*> Leaves() const;
  int depth() const;
  const TreeOptions& options() const { return options_; }

 private:
  const TreeNode& Descend(std::span<const double> x) const;

  std::vector<TreeNode> nodes_;
  int input_dim_;
  TreeOptions options_;
};

// Greedy top-down least-squares tree. Each split minimizes the children's
// SSE over (feature, midpoint between adjacent distinct values); ties go to
// the lowest feature index, then the smallest threshold. Growth stops at
// max_depth, when no split leaves min_leaf rows on both sides, or when the
// best split does not reduce SSE.
absl::StatusOr<RegressionTree> FitTree(const DataMatrix& x,
                                       const LabelVector& y,
                                       const TreeOptions& options = {});

// Relative tolerance used to call two split scores equal.
inline constexpr double kSplitTieTolerance = 1e-10;

}  // namespace imitation

#endif  // IMITATION_LEARNERS_REGRESSION_TREE_H_
