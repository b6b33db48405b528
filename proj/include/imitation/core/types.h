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

#ifndef IMITATION_CORE_TYPES_H_
#define IMITATION_CORE_TYPES_H_

#include <Eigen/Dense>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace imitation {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// An n x p feature matrix with finite entries. Rows are items, columns are
// features. A party without features is represented with p = 0.
class DataMatrix {
 public:
  static absl::StatusOr<DataMatrix> Create(RowMatrix values);
  static absl::StatusOr<DataMatrix> FromRows(
      std::initializer_list<std::initializer_list<double>> rows);
  static absl::StatusOr<DataMatrix> FromColumn(const Eigen::VectorXd& column);
  // n rows and no columns.
  static DataMatrix Empty(int rows);

  int rows() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }
  const RowMatrix& values() const { return values_; }
  std::span<const double> row(int i) const {
    return {values_.data() + static_cast<std::ptrdiff_t>(i) * cols(),
            static_cast<std::size_t>(cols())};
  }

 private:
  explicit DataMatrix(RowMatrix values) : values_(std::move(values)) {}
  RowMatrix values_;
};

// [a, b] side by side. Row counts must agree.
absl::StatusOr<DataMatrix> ConcatColumns(const DataMatrix& a,
                                         const DataMatrix& b);
absl::StatusOr<DataMatrix> SelectColumns(const DataMatrix& x,
                                         const std::vector<int>& columns);

enum class LabelKind { kRegression, kClassLabel, kProbability };

// A task label vector y of length n.
class LabelVector {
 public:
  static absl::StatusOr<LabelVector> Create(
      Eigen::VectorXd values, LabelKind kind = LabelKind::kRegression);
  static LabelVector Regression(Eigen::VectorXd values);

  int size() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  LabelKind kind() const { return kind_; }

 private:
  LabelVector(Eigen::VectorXd values, LabelKind kind)
      : values_(std::move(values)), kind_(kind) {}
  Eigen::VectorXd values_;
  LabelKind kind_;
};

// Stage I label queries (k1) and Stage II prediction queries per Stage I
// query (k2; nullopt means unbounded).
struct QueryBudget {
  int k1 = 0;
  std::optional<int> k2;

  bool Valid() const { return k1 >= 0 && (!k2.has_value() || *k2 >= 0); }
};

}  // namespace imitation

#endif  // IMITATION_CORE_TYPES_H_
