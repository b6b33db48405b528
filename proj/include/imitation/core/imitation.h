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

#ifndef IMITATION_CORE_IMITATION_H_
#define IMITATION_CORE_IMITATION_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "imitation/core/module.h"
#include "imitation/core/prediction.h"
#include "imitation/core/types.h"
#include "json.hpp"

namespace imitation {

// Anything that turns a task label y into an imitating function f_{I,y}.
// Implementations are immutable and safe to call concurrently.
class Imitation {
 public:
  virtual ~Imitation() = default;
  virtual absl::StatusOr<PredictionFn> Imitate(const LabelVector& y,
                                               std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
  virtual nlohmann::json Describe() const { return {{"name", name()}}; }
};

// Fits a learner on imitation-side data. With the module's own learner and
// data this is the self-imitation.
class LearnerImitation final : public Imitation {
 public:
  LearnerImitation(std::string name, LearnerSpec learner,
                   std::shared_ptr<const DataMatrix> data)
      : name_(std::move(name)),
        learner_(std::move(learner)),
        data_(std::move(data)) {}
  static std::shared_ptr<const Imitation> SelfOf(const Module& module);

  absl::StatusOr<PredictionFn> Imitate(const LabelVector& y,
                                       std::uint64_t seed) const override;
  std::string name() const override { return name_; }
  nlohmann::json Describe() const override;

 private:
  std::string name_;
  LearnerSpec learner_;
  std::shared_ptr<const DataMatrix> data_;
};

// x -> 0 for every task.
class ZeroImitation final : public Imitation {
 public:
  explicit ZeroImitation(int dim) : dim_(dim) {}
  absl::StatusOr<PredictionFn> Imitate(const LabelVector&,
                                       std::uint64_t) const override {
    return MakeZeroFn(dim_);
  }
  std::string name() const override { return "zero"; }

 private:
  int dim_;
};

// A task-independent function, for single-task extraction attacks.
class FixedImitation final : public Imitation {
 public:
  FixedImitation(std::string name, PredictionFn fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  absl::StatusOr<PredictionFn> Imitate(const LabelVector&,
                                       std::uint64_t) const override {
    return fn_;
  }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  PredictionFn fn_;
};

// Wraps a callable factory.
class CallableImitation final : public Imitation {
 public:
  using Factory = std::function<absl::StatusOr<PredictionFn>(const LabelVector&,
                                                             std::uint64_t)>;
  CallableImitation(std::string name, Factory factory,
                    nlohmann::json description = nlohmann::json::object())
      : name_(std::move(name)),
        factory_(std::move(factory)),
        description_(std::move(description)) {}
  absl::StatusOr<PredictionFn> Imitate(const LabelVector& y,
                                       std::uint64_t seed) const override {
    return factory_(y, seed);
  }
  std::string name() const override { return name_; }
  nlohmann::json Describe() const override;

 private:
  std::string name_;
  Factory factory_;
  nlohmann::json description_;
};

}  // namespace imitation

#endif  // IMITATION_CORE_IMITATION_H_
