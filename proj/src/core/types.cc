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

#include "imitation/core/types.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace imitation {

absl::StatusOr<DataMatrix> DataMatrix::Create(RowMatrix values) {
  if (values.rows() < 1) {
    return absl::InvalidArgumentError("DataMatrix needs at least one row");
  }
  if (!values.allFinite()) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        if (!std::isfinite(values(i, j))) {
          return absl::InvalidArgumentError(
              absl::StrCat("DataMatrix entry (", i, ",", j, ") is not finite"));
        }
      }
    }
  }
  return DataMatrix(std::move(values));
}

absl::StatusOr<DataMatrix> DataMatrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t p = n == 0 ? 0 : rows.begin()->size();
  RowMatrix m(n, p);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != p) {
      return absl::InvalidArgumentError("ragged rows");
    }
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return Create(std::move(m));
}

absl::StatusOr<DataMatrix> DataMatrix::FromColumn(
    const Eigen::VectorXd& column) {
  return Create(RowMatrix(column));
}

DataMatrix DataMatrix::Empty(int rows) {
  return DataMatrix(RowMatrix(rows, 0));
}

absl::StatusOr<DataMatrix> ConcatColumns(const DataMatrix& a,
                                         const DataMatrix& b) {
  if (a.rows() != b.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("row count mismatch: ", a.rows(), " vs ", b.rows()));
  }
  RowMatrix m(a.rows(), a.cols() + b.cols());
  m.leftCols(a.cols()) = a.values();
  m.rightCols(b.cols()) = b.values();
  return DataMatrix::Create(std::move(m));
}

absl::StatusOr<DataMatrix> SelectColumns(const DataMatrix& x,
                                         const std::vector<int>& columns) {
  RowMatrix m(x.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] < 0 || columns[k] >= x.cols()) {
      return absl::OutOfRangeError(
          absl::StrCat("column ", columns[k], " out of range"));
    }
    m.col(k) = x.values().col(columns[k]);
  }
  if (columns.empty()) return DataMatrix::Empty(x.rows());
  return DataMatrix::Create(std::move(m));
}

absl::StatusOr<LabelVector> LabelVector::Create(Eigen::VectorXd values,
                                                LabelKind kind) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", i, " is not finite"));
    }
    if (kind == LabelKind::kProbability && (values[i] < 0 || values[i] > 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability label ", i, " outside [0,1]"));
    }
  }
  return LabelVector(std::move(values), kind);
}

LabelVector LabelVector::Regression(Eigen::VectorXd values) {
  return LabelVector(std::move(values), LabelKind::kRegression);
}

}  // namespace imitation
