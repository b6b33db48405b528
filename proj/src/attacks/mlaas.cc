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

#include "imitation/attacks/mlaas.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/imitation.h"
#include "imitation/core/rng.h"
#include "imitation/core/types.h"
#include "imitation/learners/regression_tree.h"

namespace imitation {
namespace {

std::span<const double> AsSpan(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

absl::StatusOr<double> AskValue(Channel& api, const Eigen::VectorXd& x) {
  auto r = api.Predict(x);
  if (!r.ok()) return r.status();
  if (const double* v = std::get_if<double>(&*r)) return *v;
  return absl::FailedPreconditionError("api returned a non-numeric response");
}

absl::StatusOr<std::string> AskLeaf(Channel& api, const Eigen::VectorXd& x) {
  auto r = api.Predict(x);
  if (!r.ok()) return r.status();
  if (const std::string* v = std::get_if<std::string>(&*r)) return *v;
  return absl::FailedPreconditionError("api did not return a leaf id");
}

Eigen::VectorXd UniformPoint(Rng& rng, int p, double box) {
  Eigen::VectorXd x(p);
  for (int j = 0; j < p; ++j) x[j] = rng.Uniform(-box, box);
  return x;
}

}  // namespace

absl::StatusOr<LogisticModel> EquationSolvingExtract(Channel& api, int p,
                                                     std::uint64_t seed) {
  if (p < 1) return absl::InvalidArgumentError("equation solving: p < 1");
  for (int attempt = 0; attempt < 2; ++attempt) {
    Rng rng(seed, "equation-solving", attempt);
    Eigen::MatrixXd a(p + 1, p + 1);
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; j < p; ++j) a(i, j) = rng.Normal();
      a(i, p) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < p + 1) continue;
    Eigen::VectorXd z(p + 1);
    for (int i = 0; i <= p; ++i) {
      auto prob = AskValue(api, a.row(i).head(p).transpose());
      if (!prob.ok()) return prob.status();
      if (!(*prob > 0 && *prob < 1)) {
        return absl::FailedPreconditionError(absl::StrCat(
            "equation solving: response ", *prob, " is not a probability"));
      }
      z[i] = Logit(*prob);
    }
    Eigen::VectorXd theta = lu.solve(z);
    return LogisticModel(theta.head(p), theta[p]);
  }
  return absl::FailedPreconditionError(
      "equation solving: query matrix singular twice");
}

FeatureBox FeatureBox::Cube(int dim, double lo, double hi) {
  return {Eigen::VectorXd::Constant(dim, lo),
          Eigen::VectorXd::Constant(dim, hi)};
}

double FeatureBox::Volume() const { return (upper - lower).prod(); }

bool FeatureBox::Contains(std::span<const double> x) const {
  for (int j = 0; j < dim(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  }
  return true;
}

nlohmann::json FeatureBox::ToJson() const {
  return {{"lower", std::vector<double>(lower.begin(), lower.end())},
          {"upper", std::vector<double>(upper.begin(), upper.end())}};
}

Partition::Partition(std::vector<PartitionCell> cells, int dim)
    : cells_(std::move(cells)), dim_(dim) {
  for (const PartitionCell& c : cells_) leaf_ids_.push_back(c.leaf_id);
  std::sort(leaf_ids_.begin(), leaf_ids_.end());
  leaf_ids_.erase(std::unique(leaf_ids_.begin(), leaf_ids_.end()),
                  leaf_ids_.end());
}

const std::string& Partition::LeafOf(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  const PartitionCell* nearest = &cells_.front();
  for (const PartitionCell& c : cells_) {
    double d2 = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double gap =
          std::max({c.box.lower[j] - x[j], 0.0, x[j] - c.box.upper[j]});
      d2 += gap * gap;
    }
    if (d2 == 0.0) return c.leaf_id;
    if (d2 < best) {
      best = d2;
      nearest = &c;
    }
  }
  return nearest->leaf_id;
}

double Partition::Predict(std::span<const double> x) const {
  const std::string& id = LeafOf(x);
  return static_cast<double>(
      std::lower_bound(leaf_ids_.begin(), leaf_ids_.end(), id) -
      leaf_ids_.begin());
}

nlohmann::json Partition::ToJson() const {
  nlohmann::json cells = nlohmann::json::array();
  for (const PartitionCell& c : cells_) {
    nlohmann::json cell = c.box.ToJson();
    cell["leaf_id"] = c.leaf_id;
    cells.push_back(cell);
  }
  return {{"algorithm", "partition"}, {"cells", cells}};
}

absl::StatusOr<PathFindingResult> PathFindingExtract(
    Channel& api, const FeatureBox& box, const PathFindingOptions& options) {
  const int p = box.dim();
  if (p < 1 || box.upper.size() != p ||
      !((box.upper - box.lower).minCoeff() > 0)) {
    return absl::InvalidArgumentError("path finding: empty feature box");
  }
  const double res = options.resolution;
  std::vector<PartitionCell> cells;
  std::deque<FeatureBox> pending{box};
  double covered = 0.0;
  bool exhausted = false;

  auto finish = [&]() {
    PathFindingResult result;
    result.coverage = covered / box.Volume();
    result.complete = !exhausted && pending.empty();
    if (!cells.empty()) {
      result.partition = std::make_shared<Partition>(cells, p);
    }
    return result;
  };
  auto stop = [&](const absl::Status& s) -> absl::Status {
    if (absl::IsResourceExhausted(s)) {
      exhausted = true;
      return absl::OkStatus();
    }
    return s;
  };

  while (!pending.empty()) {
    FeatureBox current = pending.front();
    Eigen::VectorXd center = (current.lower + current.upper) / 2;
    auto leaf = AskLeaf(api, center);
    if (!leaf.ok()) {
      if (absl::Status s = stop(leaf.status()); !s.ok()) return s;
      return finish();
    }
    pending.pop_front();
    if (*leaf == kRootLeafId) {
      cells.push_back({*leaf, current});
      covered += current.Volume();
      continue;
    }

    FeatureBox cell = current;
    for (int d = 0; d < p; ++d) {
      for (int side = 0; side < 2; ++side) {
        const double limit = side == 0 ? current.lower[d] : current.upper[d];
        Eigen::VectorXd probe = center;
        probe[d] = limit;
        auto at_limit = AskLeaf(api, probe);
        if (!at_limit.ok()) {
          if (absl::Status s = stop(at_limit.status()); !s.ok()) return s;
          return finish();
        }
        double edge = limit;
        if (*at_limit != *leaf) {
          double inside = center[d], outside = limit;
          while (std::abs(inside - outside) > res) {
            probe[d] = (inside + outside) / 2;
            auto mid = AskLeaf(api, probe);
            if (!mid.ok()) {
              if (absl::Status s = stop(mid.status()); !s.ok()) return s;
              return finish();
            }
            (*mid == *leaf ? inside : outside) = probe[d];
          }
          edge = (inside + outside) / 2;
        }
        (side == 0 ? cell.lower[d] : cell.upper[d]) = edge;
      }
    }
    cells.push_back({*leaf, cell});
    covered += cell.Volume();

    // Box difference current \ cell as up to 2p slabs.
    FeatureBox rest = current;
    for (int d = 0; d < p; ++d) {
      if (cell.lower[d] > rest.lower[d]) {
        FeatureBox slab = rest;
        slab.upper[d] = cell.lower[d];
        rest.lower[d] = cell.lower[d];
        if ((slab.upper - slab.lower).minCoeff() > res) pending.push_back(slab);
      }
      if (cell.upper[d] < rest.upper[d]) {
        FeatureBox slab = rest;
        slab.lower[d] = cell.upper[d];
        rest.upper[d] = cell.upper[d];
        if ((slab.upper - slab.lower).minCoeff() > res) pending.push_back(slab);
      }
    }
  }
  return finish();
}

absl::StatusOr<BoundaryResult> BoundaryExtract(Channel& api, int p,
                                               const BoundaryOptions& options) {
  if (p < 1) return absl::InvalidArgumentError("boundary extraction: p < 1");
  const int n_boundary = options.n_boundary == 0 ? p + 1 : options.n_boundary;
  if (n_boundary < p + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("boundary extraction: need at least p + 1 = ", p + 1,
                     " boundary points, got ", n_boundary));
  }
  Rng probe_rng(options.seed, "probe", 0);
  std::optional<Eigen::VectorXd> positive, negative;
  int probes = 0;
  while (probes < options.max_probes && !(positive && negative)) {
    Eigen::VectorXd x = UniformPoint(probe_rng, p, options.box);
    auto label = AskValue(api, x);
    if (!label.ok()) return label.status();
    ++probes;
    (*label > 0 ? positive : negative) = x;
  }
  if (!(positive && negative)) {
    return absl::NotFoundError(
        absl::StrCat("boundary extraction: one class observed in ", probes,
                     " probes; cannot bracket the boundary"));
  }

  std::vector<Eigen::VectorXd> points;
  std::vector<int> counts;
  std::vector<double> lengths;
  Eigen::MatrixXd rows(n_boundary, p + 1);
  for (int i = 0; i < n_boundary; ++i) {
    Rng rng(options.seed, "chord", i);
    Eigen::VectorXd near = UniformPoint(rng, p, options.box);
    auto label = AskValue(api, near);
    if (!label.ok()) return label.status();
    const double side = *label > 0 ? 1.0 : -1.0;
    Eigen::VectorXd far = side > 0 ? *negative : *positive;
    int used = 1;
    lengths.push_back((near - far).norm());
    while ((near - far).norm() > options.tol) {
      Eigen::VectorXd mid = (near + far) / 2;
      auto l = AskValue(api, mid);
      if (!l.ok()) return l.status();
      ++used;
      ((*l > 0 ? 1.0 : -1.0) == side ? near : far) = mid;
    }
    Eigen::VectorXd point = (near + far) / 2;
    rows.row(i) << point.transpose(), 1.0;
    points.push_back(std::move(point));
    counts.push_back(used);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  Eigen::VectorXd theta = svd.matrixV().col(p);
  if (theta.head(p).dot(*positive) + theta[p] < 0) theta = -theta;
  auto classifier = LinearClassifier::Create(theta.head(p), theta[p]);
  if (!classifier.ok()) return classifier.status();
  return BoundaryResult{.classifier = *std::move(classifier),
                        .boundary_points = std::move(points),
                        .queries_per_point = std::move(counts),
                        .chord_lengths = std::move(lengths),
                        .probe_queries = probes};
}

namespace {

// Logistic fit on +1/-1 labels, returned as a +1/-1 classifier. A single
// observed class gives the constant function.
absl::StatusOr<PredictionFn> FitLabelImitation(
    const std::vector<Eigen::VectorXd>& xs, const std::vector<double>& labels,
    double l2) {
  const int n = static_cast<int>(xs.size());
  const int p = static_cast<int>(xs.front().size());
  RowMatrix m(n, p);
  Eigen::VectorXd y01(n);
  for (int i = 0; i < n; ++i) {
    m.row(i) = xs[i].transpose();
    y01[i] = labels[i] > 0 ? 1.0 : 0.0;
  }
  const double positives = y01.sum();
  if (positives == 0 || positives == n) {
    return MakeLinearFn(Eigen::VectorXd::Zero(p), positives == 0 ? -1.0 : 1.0,
                        "adaptive");
  }
  auto x = DataMatrix::Create(std::move(m));
  if (!x.ok()) return x.status();
  auto y = LabelVector::Create(std::move(y01), LabelKind::kClassLabel);
  if (!y.ok()) return y.status();
  auto fit = FitLogistic(*x, *y, {.l2 = l2});
  if (!fit.ok()) return fit.status();
  auto classifier =
      LinearClassifier::Create(fit->model.weights(), fit->model.bias());
  if (!classifier.ok()) return classifier.status();
  return PredictionFn(
      std::make_shared<LinearClassifier>(*std::move(classifier)),
      Provenance{.learner = "logistic", .data_id = "adaptive"});
}

}  // namespace

absl::StatusOr<AdaptiveResult> AdaptiveRetrain(Channel& api, int p,
                                               const AdaptiveOptions& options) {
  const int n = options.budget;
  const int m = options.batch;
  if (p < 1 || m < 1 || m > n || (n - m) % m != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("adaptive retraining: budget ", n, " and batch ", m,
                     " must satisfy 1 <= m <= n and m | (n - m)"));
  }
  const int n_rounds = (n - m) / m;
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> labels;
  AdaptiveResult result;

  auto query_batch = [&](const std::vector<Eigen::VectorXd>& batch) {
    for (const Eigen::VectorXd& x : batch) {
      auto label = AskValue(api, x);
      if (!label.ok()) return label.status();
      xs.push_back(x);
      labels.push_back(*label > 0 ? 1.0 : -1.0);
    }
    return absl::OkStatus();
  };
  auto random_batch = [&](int round) {
    Rng rng(options.seed, "random", round);
    std::vector<Eigen::VectorXd> batch;
    for (int k = 0; k < m; ++k)
      batch.push_back(UniformPoint(rng, p, options.box));
    return batch;
  };

  for (int round = 0; round <= n_rounds; ++round) {
    std::vector<Eigen::VectorXd> batch;
    if (round == 0 || !options.adaptive) {
      batch = random_batch(round);
    } else {
      const PredictionFn& model = result.rounds.back().model;
      Rng rng(options.seed, "line-search", round);
      for (int k = 0; k < m; ++k) {
        Eigen::VectorXd a = UniformPoint(rng, p, options.box);
        Eigen::VectorXd b = a;
        bool bracketed = false;
        for (int tries = 0; tries < 100 && !bracketed; ++tries) {
          b = UniformPoint(rng, p, options.box);
          bracketed = model(AsSpan(a)) != model(AsSpan(b));
        }
        if (bracketed) {
          const double side = model(AsSpan(a));
          while ((a - b).norm() > 1e-9 * options.box) {
            Eigen::VectorXd mid = (a + b) / 2;
            (model(AsSpan(mid)) == side ? a : b) = mid;
          }
          a = (a + b) / 2;
        }
        for (int j = 0; j < p; ++j) {
          a[j] += options.jitter * options.box * rng.Normal();
        }
        batch.push_back(std::move(a));
      }
    }
    if (absl::Status s = query_batch(batch); !s.ok()) return s;
    auto model = FitLabelImitation(xs, labels, options.l2);
    if (!model.ok()) return model.status();
    result.rounds.push_back(
        {.round = round, .queries = api.queries_used(), .model = *model});
  }

  nlohmann::json parameters = {{"budget", n},
                               {"batch", m},
                               {"adaptive", options.adaptive},
                               {"jitter", options.jitter},
                               {"l2", options.l2},
                               {"seed", options.seed}};
  result.system = std::make_shared<ImitationSystem>(
      options.adaptive ? "adaptive-retrain" : "random-retrain", parameters,
      api.log(),
      std::make_shared<FixedImitation>("adaptive-retrain",
                                       result.rounds.back().model));
  return result;
}

}  // namespace imitation
