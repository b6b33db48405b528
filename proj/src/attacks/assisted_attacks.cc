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

#include "imitation/attacks/assisted_attacks.h"

#include <algorithm>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "imitation/core/imitation.h"
#include "imitation/core/module.h"

namespace imitation {

SpanBasis SpanFromResponses(const Eigen::MatrixXd& fitted, int expected_rank,
                            double tolerance) {
  SpanBasis out;
  if (fitted.cols() == 0) {
    out.basis = Eigen::MatrixXd(fitted.rows(), 0);
    out.rank_deficient = expected_rank > 0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(fitted, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s[rank] > tolerance * s[0]) ++rank;
  if (s[0] == 0) rank = 0;
  out.basis = svd.matrixU().leftCols(rank);
  out.rank = rank;
  out.rank_deficient = rank < expected_rank;
  return out;
}

absl::StatusOr<SpanBasis> RecoverColumnSpace(Channel& bob, int k1, int n, int p,
                                             std::uint64_t seed) {
  if (n < 1 || p < 1 || p > n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "column space: need 1 <= p <= n, got p = ", p, ", n = ", n));
  }
  const int needed = std::min(p, n - p);
  if (k1 < needed || k1 < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("column space: insufficient queries, k1 = ", k1,
                     " < min{p, n - p} = ", needed));
  }
  auto mode = bob.log().side_info.find(SideInfoTag::kResponseMode);
  if (mode == bob.log().side_info.end() ||
      (mode->second != "residual" && mode->second != "fitted")) {
    return absl::FailedPreconditionError(
        "column space: channel must answer Stage I residuals or fitted values");
  }
  const bool residual_mode = mode->second == "residual";

  Eigen::MatrixXd fitted(n, k1), residual(n, k1);
  for (int l = 0; l < k1; ++l) {
    Rng rng(seed, "span-label", l);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = rng.Normal();
    auto r = bob.Label(y);
    if (!r.ok()) return r.status();
    if (r->values.size() != n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column space: response length ", r->values.size(), " vs n = ", n));
    }
    if (residual_mode) {
      residual.col(l) = r->values;
      fitted.col(l) = y - r->values;
    } else {
      fitted.col(l) = r->values;
      residual.col(l) = y - r->values;
    }
  }
  if (k1 >= p) return SpanFromResponses(fitted, p);

  // Fewer than p queries: the residuals span the (n - p)-dimensional
  // complement.
  SpanBasis complement = SpanFromResponses(residual, n - p);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(complement.basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  SpanBasis out;
  out.rank = n - complement.rank;
  out.basis = q.rightCols(out.rank);
  out.rank_deficient = complement.rank_deficient;
  return out;
}

absl::StatusOr<RotationSolution> SolveRotation(
    const DataMatrix& x_tilde, const std::vector<RotationQuery>& queries) {
  const int p = x_tilde.cols();
  if (static_cast<int>(queries.size()) != p) {
    return absl::InvalidArgumentError(
        absl::StrCat("rotation: need ", p, " queries, got ", queries.size()));
  }
  Eigen::MatrixXd k(p, p), b(p, p);
  for (int t = 0; t < p; ++t) {
    if (queries[t].beta.size() != p || queries[t].k.size() != p) {
      return absl::InvalidArgumentError(absl::StrCat(
          "rotation: query ", t, " has dimension mismatch with p = ", p));
    }
    k.col(t) = queries[t].k;
    b.col(t) = queries[t].beta;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> b_lu(b);
  if (b_lu.rank() < p) {
    return absl::InvalidArgumentError(
        "rotation: query coefficients are linearly dependent (singular B)");
  }
  Eigen::MatrixXd q_hat = k * b_lu.inverse();
  Eigen::FullPivLU<Eigen::MatrixXd> q_lu(q_hat);
  if (q_lu.rank() < p) {
    return absl::FailedPreconditionError("rotation: estimated Q is singular");
  }
  RowMatrix x_hat = x_tilde.values() * q_lu.inverse().transpose();
  auto data = DataMatrix::Create(std::move(x_hat));
  if (!data.ok()) return data.status();
  return RotationSolution{std::move(q_hat), *std::move(data)};
}

absl::StatusOr<RotationAttackResult> CovarianceRotationAttack(
    Channel& bob, int n, const RotationAttackOptions& options) {
  const int p = options.p;
  const int span_dim = p + (options.intercept ? 1 : 0);
  auto span = RecoverColumnSpace(bob, span_dim, n, span_dim, options.seed);
  if (!span.ok()) return span.status();
  if (span->rank != span_dim) {
    return absl::FailedPreconditionError(absl::StrCat(
        "rotation: recovered rank ", span->rank, ", expected ", span_dim));
  }
  Eigen::MatrixXd u = span->basis;
  if (options.intercept) {
    u.rowwise() -= u.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u, Eigen::ComputeThinU);
    u = svd.matrixU().leftCols(p);
  }
  RowMatrix x_tilde = std::sqrt(static_cast<double>(n)) * u;
  auto x_tilde_data = DataMatrix::Create(x_tilde);
  if (!x_tilde_data.ok()) return x_tilde_data.status();

  std::vector<RotationQuery> queries;
  for (int t = 0; t < p; ++t) {
    Eigen::VectorXd beta = Eigen::VectorXd::Unit(p, t);
    auto y = bob.OracleLabel(beta);
    if (!y.ok()) return y.status();
    auto sent = bob.Label(*y);
    if (!sent.ok()) return sent.status();
    queries.push_back({beta, x_tilde.transpose() * *y / n});
  }
  auto rotation = SolveRotation(*x_tilde_data, queries);
  if (!rotation.ok()) return rotation.status();

  InformationSet information = bob.log();
  information.AddSideInfo(SideInfoTag::kFeatureCovariance, "identity");
  auto imitation = std::make_shared<LearnerImitation>(
      "covariance-rotation", LearnerSpec::Ols(options.intercept),
      std::make_shared<const DataMatrix>(rotation->x_hat));
  auto system = std::make_shared<ImitationSystem>(
      "covariance-rotation",
      nlohmann::json{
          {"p", p}, {"intercept", options.intercept}, {"seed", options.seed}},
      std::move(information), std::move(imitation));
  return RotationAttackResult{*std::move(span), *std::move(rotation),
                              std::move(system)};
}

nlohmann::json TreeStructure::ToJson() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& t : violations) v.push_back({t[0], t[1], t[2]});
  return {{"order", order},
          {"consistent", consistent},
          {"reflection_ambiguous", reflection_ambiguous},
          {"anchors", anchors},
          {"violations", v}};
}

namespace {

class IntervalOrderSearch {
 public:
  IntervalOrderSearch(const std::vector<std::vector<int>>& supports, int n,
                      int node_cap)
      : supports_(supports),
        n_(n),
        node_cap_(node_cap),
        member_of_(n),
        count_(supports.size(), 0),
        placed_(n, false) {
    for (std::size_t i = 0; i < supports.size(); ++i) {
      for (int r : supports[i]) member_of_[r].push_back(static_cast<int>(i));
    }
  }

  // Order starting at `first` (or anywhere, if -1) and ending at `last` (or
  // anywhere, if -1).
  bool Run(int first, int last) {
    order_.clear();
    std::fill(placed_.begin(), placed_.end(), false);
    std::fill(count_.begin(), count_.end(), 0);
    last_ = last;
    if (first < 0) {
      for (int r = 0; r < n_; ++r) {
        if (r == last && n_ > 1) continue;
        if (Place(r) && Search()) return true;
        Unplace(r);
      }
      return false;
    }
    if (first == last && n_ > 1) return false;
    if (Place(first) && Search()) return true;
    Unplace(first);
    return false;
  }

  const std::vector<int>& order() const { return order_; }
  const std::vector<int>& deepest() const { return deepest_; }

 private:
  bool Place(int r) {
    placed_[r] = true;
    order_.push_back(r);
    for (int i : member_of_[r]) ++count_[i];
    if (order_.size() > deepest_.size()) deepest_ = order_;
    return true;
  }
  void Unplace(int r) {
    placed_[r] = false;
    order_.pop_back();
    for (int i : member_of_[r]) --count_[i];
  }

  bool Search() {
    if (++nodes_ > node_cap_) return false;
    const int pos = static_cast<int>(order_.size());
    if (pos == n_) return last_ < 0 || order_.back() == last_;
    // A started, unfinished support forces the next row to be a member.
    std::vector<bool> allowed(n_, true);
    for (std::size_t i = 0; i < supports_.size(); ++i) {
      const int size = static_cast<int>(supports_[i].size());
      if (count_[i] == 0 || count_[i] == size) continue;
      std::vector<bool> in(n_, false);
      for (int r : supports_[i]) in[r] = true;
      for (int r = 0; r < n_; ++r) allowed[r] = allowed[r] && in[r];
    }
    for (int r = 0; r < n_; ++r) {
      if (placed_[r] || !allowed[r]) continue;
      if (r == last_ && pos != n_ - 1) continue;
      Place(r);
      if (Search()) return true;
      Unplace(r);
      if (nodes_ > node_cap_) return false;
    }
    return false;
  }

  const std::vector<std::vector<int>>& supports_;
  int n_;
  int node_cap_;
  int nodes_ = 0;
  int last_ = -1;
  std::vector<std::vector<int>> member_of_;
  std::vector<int> count_;
  std::vector<bool> placed_;
  std::vector<int> order_;
  std::vector<int> deepest_;
};

}  // namespace

absl::StatusOr<TreeStructure> TreeStructureRecover(
    const std::vector<Eigen::VectorXd>& responses, int node_cap) {
  const int n = static_cast<int>(responses.size());
  if (n == 0) return absl::InvalidArgumentError("tree structure: no responses");
  TreeStructure out;
  for (int i = 0; i < n; ++i) {
    if (responses[i].size() != n) {
      return absl::InvalidArgumentError(
          absl::StrCat("tree structure: response ", i, " has length ",
                       responses[i].size(), ", expected ", n));
    }
    const double scale = responses[i].cwiseAbs().maxCoeff();
    std::vector<int> support;
    for (int j = 0; j < n; ++j) {
      if (scale > 0 && std::abs(responses[i][j]) > 1e-12 * scale) {
        support.push_back(j);
      }
    }
    out.supports.push_back(std::move(support));
  }
  for (int i = 0; i < n; ++i) {
    if (out.supports[i].empty()) out.anchors.push_back(i);
  }
  if (out.anchors.size() < 2) {
    for (int i = 0; i < n; ++i) {
      if (out.supports[i].size() == 1) out.anchors.push_back(i);
    }
    std::sort(out.anchors.begin(), out.anchors.end());
    out.anchors.erase(std::unique(out.anchors.begin(), out.anchors.end()),
                      out.anchors.end());
  }

  IntervalOrderSearch search(out.supports, n, node_cap);
  bool found = false;
  if (n == 1) {
    found = search.Run(0, -1);
  }
  for (std::size_t a = 0; !found && a < out.anchors.size(); ++a) {
    for (std::size_t b = a + 1; !found && b < out.anchors.size(); ++b) {
      found = search.Run(out.anchors[a], out.anchors[b]);
    }
  }
  if (!found) found = search.Run(-1, -1);
  out.consistent = found;
  out.order = found ? search.order() : search.deepest();
  if (!found) {
    std::vector<bool> used(n, false);
    for (int r : out.order) used[r] = true;
    for (int r = 0; r < n; ++r) {
      if (!used[r]) out.order.push_back(r);
    }
    std::vector<int> position(n);
    for (int k = 0; k < n; ++k) position[out.order[k]] = k;
    for (int i = 0; i < n; ++i) {
      const std::vector<int>& s = out.supports[i];
      if (s.size() < 2) continue;
      int lo = n, hi = -1;
      for (int r : s) {
        lo = std::min(lo, position[r]);
        hi = std::max(hi, position[r]);
      }
      for (int k = lo + 1; k < hi; ++k) {
        const int row = out.order[k];
        if (!std::binary_search(s.begin(), s.end(), row)) {
          out.violations.push_back({i, out.order[lo], row});
        }
      }
    }
  }
  return out;
}

double CoverSpec::Radius() const {
  if (grid.size() < 2) return (a_max - a_min) / 2 * x_rms;
  double pitch = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    pitch = std::max(pitch, grid[j] - grid[j - 1]);
  }
  const double edges = std::max(grid.front() - a_min, a_max - grid.back());
  return std::max(pitch / 2, edges) * x_rms;
}

nlohmann::json CoverSpec::ToJson() const {
  return {{"family", "linear-1d"},
          {"a_min", a_min},
          {"a_max", a_max},
          {"eps", eps},
          {"grid_size", grid.size()},
          {"radius", Radius()},
          {"entropy_nats", Entropy()},
          {"noise_sd", noise_sd}};
}

absl::StatusOr<CoverSpec> MakeLinearCover(double a_min, double a_max,
                                          double eps, int n_grid,
                                          double noise_sd, double x_rms) {
  if (!(a_max > a_min) || !(eps > 0) || !(x_rms > 0) || n_grid < 0 ||
      !(noise_sd >= 0)) {
    return absl::InvalidArgumentError(
        "cover: need a_min < a_max, eps > 0, x_rms > 0, noise_sd >= 0");
  }
  if (n_grid == 0) {
    n_grid = static_cast<int>(
                 std::ceil((a_max - a_min) * x_rms / (2 * eps) - 1e-12)) +
             1;
  }
  CoverSpec cover{.a_min = a_min,
                  .a_max = a_max,
                  .eps = eps,
                  .grid = {},
                  .noise_sd = noise_sd,
                  .x_rms = x_rms};
  if (n_grid == 1) {
    cover.grid.push_back((a_min + a_max) / 2);
  } else {
    for (int j = 0; j < n_grid; ++j) {
      cover.grid.push_back(a_min + (a_max - a_min) * j / (n_grid - 1));
    }
  }
  if (cover.Radius() > eps * (1 + 1e-12)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cover: ", n_grid, " grid points give radius ",
                     cover.Radius(), " > eps = ", eps));
  }
  return cover;
}

double SampledCoverRadius(const CoverSpec& cover,
                          const FeatureDistribution& marginal, int n_members,
                          int n_points, std::uint64_t seed) {
  Rng x_rng(seed, "cover-x", 0);
  RowMatrix x = marginal.SampleMatrix(x_rng, n_points);
  const double rms = std::sqrt(x.col(0).squaredNorm() / n_points);
  double worst = 0.0;
  for (int k = 0; k < n_members; ++k) {
    Rng rng(seed, "cover-member", k);
    const double a = rng.Uniform(cover.a_min, cover.a_max);
    double best = std::numeric_limits<double>::infinity();
    for (double g : cover.grid) best = std::min(best, std::abs(a - g) * rms);
    worst = std::max(worst, best);
  }
  return worst;
}

absl::StatusOr<std::shared_ptr<const ImitationSystem>> EpsilonCoverImitate(
    const CoverSpec& cover, Channel& bob, int n) {
  if (cover.grid.empty()) {
    return absl::InvalidArgumentError("epsilon cover: dictionary empty");
  }
  struct Entry {
    Eigen::VectorXd label;
    std::shared_ptr<const StageTwoEndpoint> endpoint;
  };
  auto dictionary = std::make_shared<std::vector<Entry>>();
  for (double a : cover.grid) {
    auto y = bob.OracleLabel(Eigen::VectorXd::Constant(1, a));
    if (!y.ok()) return y.status();
    if (y->size() != n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "epsilon cover: oracle returned ", y->size(), " labels, n = ", n));
    }
    auto response = bob.Label(*y);
    if (!response.ok()) return response.status();
    if (response->endpoint == nullptr) {
      return absl::FailedPreconditionError(
          "epsilon cover: channel gave no Stage II endpoint");
    }
    dictionary->push_back({*std::move(y), response->endpoint});
  }
  auto match = [dictionary, n](const LabelVector& y,
                               std::uint64_t) -> absl::StatusOr<PredictionFn> {
    if (y.size() != n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "epsilon cover: task has ", y.size(), " labels, dictionary has ", n));
    }
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dictionary->size(); ++j) {
      const double d = ((*dictionary)[j].label - y.values()).squaredNorm();
      if (d < best_distance) {
        best_distance = d;
        best = j;
      }
    }
    return (*dictionary)[best].endpoint->AsPredictionFn();
  };
  InformationSet information = bob.log();
  information.AddSideInfo(SideInfoTag::kFunctionFamily, cover.ToJson());
  auto factory = std::make_shared<CallableImitation>("epsilon-cover", match,
                                                     cover.ToJson());
  return std::shared_ptr<const ImitationSystem>(
      std::make_shared<ImitationSystem>("epsilon-cover", cover.ToJson(),
                                        std::move(information),
                                        std::move(factory)));
}

}  // namespace imitation
