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

#include "imitation/learners/regression_tree.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {
namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double MeanOf(const Eigen::VectorXd& y, const std::vector<int>& rows) {
  double s = 0.0;
  for (int r : rows) s += y[r];
  return s / static_cast<double>(rows.size());
}

// SSE reduction of a split equals S_L^2/n_L + S_R^2/n_R on labels centered
// at the node mean, which avoids the cancellation of raw sum-of-squares.
Split BestSplit(const DataMatrix& x, const Eigen::VectorXd& y,
                const std::vector<int>& rows, int min_leaf) {
  Split best;
  const int m = static_cast<int>(rows.size());
  if (m < 2 * min_leaf) return best;
  const double mean = MeanOf(y, rows);
  double total_ss = 0.0;
  for (int r : rows) total_ss += (y[r] - mean) * (y[r] - mean);
  const double tie = kSplitTieTolerance * (1.0 + total_ss);

  std::vector<int> order(rows);
  for (int f = 0; f < x.cols(); ++f) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return x.values()(a, f) < x.values()(b, f);
    });
    double left_sum = 0.0;
    const double total_sum = [&] {
      double s = 0.0;
      for (int r : order) s += y[r] - mean;
      return s;
    }();
    for (int k = 1; k < m; ++k) {
      left_sum += y[order[k - 1]] - mean;
      const double lo = x.values()(order[k - 1], f);
      const double hi = x.values()(order[k], f);
      if (!(lo < hi)) continue;
      if (k < min_leaf || m - k < min_leaf) continue;
      const double right_sum = total_sum - left_sum;
      const double gain = left_sum * left_sum / k +
                          right_sum * right_sum / static_cast<double>(m - k);
      if (!best.found || gain > best.gain + tie) {
        best = {true, f, 0.5 * (lo + hi), gain};
      }
    }
  }
  if (best.found && best.gain <= tie) best.found = false;
  return best;
}

void Grow(const DataMatrix& x, const Eigen::VectorXd& y,
          const TreeOptions& options, int node_index, int depth,
          std::vector<TreeNode>& nodes) {
  const std::string path = nodes[node_index].leaf_id;
  std::vector<int> rows = nodes[node_index].members;
  Split split;
  if (depth < options.max_depth) {
    split = BestSplit(x, y, rows, options.min_leaf);
  }
  if (!split.found) return;

  std::vector<int> left_rows, right_rows;
  for (int r : rows) {
    (x.values()(r, split.feature) <= split.threshold ? left_rows : right_rows)
        .push_back(r);
  }
  const int left = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode{.value = MeanOf(y, left_rows),
                           .members = std::move(left_rows),
                           .leaf_id = path + "L"});
  const int right = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode{.value = MeanOf(y, right_rows),
                           .members = std::move(right_rows),
                           .leaf_id = path + "R"});
  TreeNode& parent = nodes[node_index];
  parent.is_leaf = false;
  parent.feature = split.feature;
  parent.threshold = split.threshold;
  parent.left = left;
  parent.right = right;
  parent.members.clear();
  parent.leaf_id.clear();
  Grow(x, y, options, left, depth + 1, nodes);
  Grow(x, y, options, right, depth + 1, nodes);
}

}  // namespace

const TreeNode& RegressionTree::Descend(std::span<const double> x) const {
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf) {
    node =
        &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

double RegressionTree::Predict(std::span<const double> x) const {
  return Descend(x).value;
}

const std::string& RegressionTree::LeafId(std::span<const double> x) const {
  return Descend(x).leaf_id;
}

std::vector<const TreeNode*> RegressionTree::Leaves() const {
  std::vector<const TreeNode*> out;
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf) out.push_back(&n);
  }
  return out;
}

int RegressionTree::depth() const {
  int d = 0;
  for (const TreeNode* leaf : Leaves()) {
    d = std::max(d, static_cast<int>(leaf->leaf_id.size()) - 1);
  }
  return d;
}

nlohmann::json RegressionTree::ToJson() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf) {
      nodes.push_back(
          {{"leaf_id", n.leaf_id}, {"value", n.value}, {"members", n.members}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right}});
    }
  }
  return {
      {"algorithm", "tree"},
      {"hyperparameters",
       {{"max_depth", options_.max_depth}, {"min_leaf", options_.min_leaf}}},
      {"input_dim", input_dim_},
      {"nodes", std::move(nodes)}};
}

absl::StatusOr<RegressionTree> FitTree(const DataMatrix& x,
                                       const LabelVector& y,
                                       const TreeOptions& options) {
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fit_tree: ", y.size(), " labels for ", x.rows(), " rows"));
  }
  if (options.max_depth < 0 || options.min_leaf < 1) {
    return absl::InvalidArgumentError(
        "fit_tree: max_depth must be >= 0 and min_leaf >= 1");
  }
  std::vector<int> all(x.rows());
  std::iota(all.begin(), all.end(), 0);
  std::vector<TreeNode> nodes;
  nodes.push_back(TreeNode{.value = MeanOf(y.values(), all),
                           .members = std::move(all),
                           .leaf_id = kRootLeafId});
  Grow(x, y.values(), options, 0, 0, nodes);
  return RegressionTree(std::move(nodes), x.cols(), options);
}

}  // namespace imitation
