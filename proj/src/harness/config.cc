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

#include "imitation/harness/config.h"

#include <cstdio>
#include <utility>

#include "absl/strings/str_cat.h"
#include "imitation/core/rng.h"
#include "imitation/harness/scenario.h"

namespace imitation {
namespace {

using nlohmann::json;

std::string TypeName(const json& v) { return std::string(v.type_name()); }

bool IsInteger(const json& v) {
  return v.is_number_integer() || v.is_number_unsigned();
}

absl::Status FieldError(const std::string& path, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat(path, ": ", what));
}

absl::Status CheckType(const json& schema, const json& value,
                       const std::string& path) {
  if (schema.is_null()) {
    if (value.is_null() || value.is_number()) return absl::OkStatus();
    return FieldError(
        path, absl::StrCat("expected number or null, got ", TypeName(value)));
  }
  if (IsInteger(schema)) {
    if (IsInteger(value)) return absl::OkStatus();
    return FieldError(path,
                      absl::StrCat("expected integer, got ", TypeName(value)));
  }
  if (schema.is_number_float()) {
    if (value.is_number()) return absl::OkStatus();
    return FieldError(path,
                      absl::StrCat("expected number, got ", TypeName(value)));
  }
  if (schema.type() != value.type()) {
    return FieldError(path, absl::StrCat("expected ", TypeName(schema),
                                         ", got ", TypeName(value)));
  }
  return absl::OkStatus();
}

absl::StatusOr<int> PositiveInt(const json& doc, const std::string& key,
                                const std::string& path, int minimum = 1) {
  const std::int64_t v = doc.at(key).get<std::int64_t>();
  if (v < minimum || v > 1'000'000'000) {
    return FieldError(absl::StrCat(path, ".", key),
                      absl::StrCat("must be >= ", minimum, ", got ", v));
  }
  return static_cast<int>(v);
}

absl::StatusOr<CovarianceSpec> ParseCovariance(const json& doc, int dim) {
  const std::string path = "config.dataset.covariance";
  CovarianceSpec spec;
  const std::string kind = doc.at("kind").get<std::string>();
  spec.r = doc.at("r").get<double>();
  if (kind == "identity") {
    spec.kind = CovarianceSpec::Kind::kIdentity;
  } else if (kind == "ar") {
    spec.kind = CovarianceSpec::Kind::kAutoregressive;
  } else if (kind == "cross") {
    spec.kind = CovarianceSpec::Kind::kCrossParty;
  } else if (kind == "custom") {
    spec.kind = CovarianceSpec::Kind::kCustom;
    const json& rows = doc.at("matrix");
    if (static_cast<int>(rows.size()) != dim) {
      return FieldError(
          path + ".matrix",
          absl::StrCat("expected ", dim, " rows, got ", rows.size()));
    }
    spec.matrix.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const std::string row_path = absl::StrCat(path, ".matrix[", i, "]");
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim) {
        return FieldError(row_path, absl::StrCat("expected ", dim, " numbers"));
      }
      for (int j = 0; j < dim; ++j) {
        if (!rows[i][j].is_number()) {
          return FieldError(absl::StrCat(row_path, "[", j, "]"),
                            "expected number");
        }
        spec.matrix(i, j) = rows[i][j].get<double>();
      }
    }
  } else {
    return FieldError(path + ".kind",
                      absl::StrCat("unknown kind \"", kind,
                                   "\" (identity, ar, cross, custom)"));
  }
  if ((spec.kind == CovarianceSpec::Kind::kAutoregressive ||
       spec.kind == CovarianceSpec::Kind::kCrossParty) &&
      !(std::abs(spec.r) < 1)) {
    return FieldError(path + ".r", "must lie in (-1, 1)");
  }
  return spec;
}

absl::StatusOr<DatasetSpec> ParseDataset(const json& doc) {
  const std::string path = "config.dataset";
  DatasetSpec spec;
  auto n = PositiveInt(doc, "n", path);
  if (!n.ok()) return n.status();
  auto p_a = PositiveInt(doc, "p_a", path, 0);
  if (!p_a.ok()) return p_a.status();
  auto p_b = PositiveInt(doc, "p_b", path);
  if (!p_b.ok()) return p_b.status();
  spec.n = *n;
  spec.p_a = *p_a;
  spec.p_b = *p_b;
  const std::string distribution = doc.at("distribution").get<std::string>();
  if (distribution == "gaussian") {
    spec.distribution = DatasetSpec::Distribution::kGaussian;
  } else if (distribution == "uniform") {
    spec.distribution = DatasetSpec::Distribution::kUniform;
  } else {
    return FieldError(path + ".distribution",
                      absl::StrCat("unknown distribution \"", distribution,
                                   "\" (gaussian, uniform)"));
  }
  auto covariance = ParseCovariance(doc.at("covariance"), spec.dim());
  if (!covariance.ok()) return covariance.status();
  spec.covariance = *std::move(covariance);
  spec.noise_sd = doc.at("noise_sd").get<double>();
  spec.bound = doc.at("bound").get<double>();
  if (!(spec.noise_sd >= 0)) {
    return FieldError(path + ".noise_sd", "must be >= 0");
  }
  if (!(spec.bound > 0)) return FieldError(path + ".bound", "must be > 0");
  // Validates positive definiteness.
  auto joint = JointDistribution(spec);
  if (!joint.ok()) return joint.status();
  return spec;
}

}  // namespace

absl::StatusOr<json> MergeStrict(const json& schema, const json& value,
                                 const std::string& path) {
  if (absl::Status s = CheckType(schema, value, path); !s.ok()) return s;
  if (schema.is_object()) {
    json merged = schema;
    for (const auto& [key, v] : value.items()) {
      const std::string child = absl::StrCat(path, ".", key);
      if (!schema.contains(key)) return FieldError(child, "unknown key");
      auto m = MergeStrict(schema.at(key), v, child);
      if (!m.ok()) return m.status();
      merged[key] = *std::move(m);
    }
    return merged;
  }
  if (schema.is_array() && !schema.empty()) {
    json merged = json::array();
    for (std::size_t i = 0; i < value.size(); ++i) {
      auto m =
          MergeStrict(schema.at(0), value[i], absl::StrCat(path, "[", i, "]"));
      if (!m.ok()) return m.status();
      merged.push_back(*std::move(m));
    }
    return merged;
  }
  return value;
}

std::string ExperimentConfig::CanonicalText() const {
  return document.dump(2) + "\n";
}

std::string ExperimentConfig::Hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : document.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

absl::StatusOr<ExperimentConfig> ConfigFromDocument(json document) {
  ExperimentConfig config;
  config.scenario = document.at("scenario").get<std::string>();
  config.experiment_id = document.at("experiment_id").get<std::string>();
  if (config.experiment_id.empty()) {
    config.experiment_id = config.scenario;
    document["experiment_id"] = config.scenario;
  }
  const json& seed = document.at("seed");
  if (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0) {
    return FieldError("config.seed", "must be >= 0");
  }
  config.seed = seed.get<std::uint64_t>();
  auto dataset = ParseDataset(document.at("dataset"));
  if (!dataset.ok()) return dataset.status();
  config.dataset = *std::move(dataset);
  auto loss = ParseLossKind(document.at("loss").get<std::string>());
  if (!loss.ok())
    return FieldError("config.loss", std::string(loss.status().message()));
  config.loss = *loss;
  const json& mc = document.at("monte_carlo");
  auto n_tasks = PositiveInt(mc, "n_tasks", "config.monte_carlo");
  if (!n_tasks.ok()) return n_tasks.status();
  auto n_test = PositiveInt(mc, "n_test", "config.monte_carlo");
  if (!n_test.ok()) return n_test.status();
  config.n_tasks = *n_tasks;
  config.n_test = *n_test;
  config.params = document.at("params");
  config.output_dir = document.at("output_dir").get<std::string>();
  config.document = std::move(document);
  return config;
}

absl::StatusOr<ExperimentConfig> ParseConfigJson(const json& value) {
  if (!value.is_object()) {
    return FieldError("config",
                      absl::StrCat("expected object, got ", TypeName(value)));
  }
  if (!value.contains("scenario") || !value.at("scenario").is_string()) {
    return FieldError("config.scenario", "required string");
  }
  const std::string name = value.at("scenario").get<std::string>();
  const Scenario* scenario = FindScenario(name);
  if (scenario == nullptr) {
    return absl::NotFoundError(absl::StrCat(
        "config.scenario: unknown scenario \"", name, "\"; see `list`"));
  }
  auto merged = MergeStrict(scenario->defaults, value, "config");
  if (!merged.ok()) return merged.status();
  return ConfigFromDocument(*std::move(merged));
}

absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text) {
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    return absl::InvalidArgumentError("config: not valid JSON");
  }
  return ParseConfigJson(value);
}

void OverrideSeed(ExperimentConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.document["seed"] = seed;
}

json DatasetToJson(const DatasetSpec& spec) {
  std::string kind = "identity";
  switch (spec.covariance.kind) {
    case CovarianceSpec::Kind::kIdentity:
      break;
    case CovarianceSpec::Kind::kAutoregressive:
      kind = "ar";
      break;
    case CovarianceSpec::Kind::kCrossParty:
      kind = "cross";
      break;
    case CovarianceSpec::Kind::kCustom:
      kind = "custom";
      break;
  }
  json matrix = json::array();
  for (Eigen::Index i = 0; i < spec.covariance.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < spec.covariance.matrix.cols(); ++j) {
      row.push_back(spec.covariance.matrix(i, j));
    }
    matrix.push_back(std::move(row));
  }
  return {
      {"n", spec.n},
      {"p_a", spec.p_a},
      {"p_b", spec.p_b},
      {"distribution", spec.distribution == DatasetSpec::Distribution::kGaussian
                           ? "gaussian"
                           : "uniform"},
      {"covariance",
       {{"kind", kind}, {"r", spec.covariance.r}, {"matrix", matrix}}},
      {"noise_sd", spec.noise_sd},
      {"bound", spec.bound}};
}

absl::StatusOr<FeatureDistribution> JointDistribution(const DatasetSpec& spec) {
  const int dim = spec.dim();
  if (spec.distribution == DatasetSpec::Distribution::kUniform) {
    if (spec.covariance.kind != CovarianceSpec::Kind::kIdentity) {
      return FieldError("config.dataset.covariance.kind",
                        "uniform features support only identity");
    }
    return FeatureDistribution::Uniform(dim, spec.bound);
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(dim, dim);
  switch (spec.covariance.kind) {
    case CovarianceSpec::Kind::kIdentity:
      break;
    case CovarianceSpec::Kind::kAutoregressive:
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          cov(i, j) = std::pow(spec.covariance.r, std::abs(i - j));
        }
      }
      break;
    case CovarianceSpec::Kind::kCrossParty:
      for (int j = 0; j < std::min(spec.p_a, spec.p_b); ++j) {
        cov(j, spec.p_a + j) = cov(spec.p_a + j, j) = spec.covariance.r;
      }
      break;
    case CovarianceSpec::Kind::kCustom:
      cov = spec.covariance.matrix;
      break;
  }
  auto joint = FeatureDistribution::Gaussian(cov);
  if (!joint.ok()) {
    return FieldError("config.dataset.covariance",
                      std::string(joint.status().message()));
  }
  return joint;
}

absl::StatusOr<SynthDataset> SynthesizeDataset(const DatasetSpec& spec,
                                               std::uint64_t seed) {
  auto joint = JointDistribution(spec);
  if (!joint.ok()) return joint.status();
  Rng rng(seed, "synth-rows", 0);
  const RowMatrix rows = joint->SampleMatrix(rng, spec.n);
  auto x_a = spec.p_a == 0
                 ? absl::StatusOr<DataMatrix>(DataMatrix::Empty(spec.n))
                 : DataMatrix::Create(rows.leftCols(spec.p_a));
  if (!x_a.ok()) return x_a.status();
  auto x_b = DataMatrix::Create(rows.rightCols(spec.p_b));
  if (!x_b.ok()) return x_b.status();
  TaskSampler tasks{
      .marginal = *joint,
      .family = {.coefficients = TaskFamily::Coefficients::kGaussian,
                 .scale = 1.0,
                 .noise_sd = spec.noise_sd}};
  return SynthDataset{*std::move(x_a), *std::move(x_b), *joint,
                      std::move(tasks)};
}

}  // namespace imitation
