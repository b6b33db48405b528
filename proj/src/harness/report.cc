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

#include "imitation/harness/report.h"

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace imitation {
namespace {

using nlohmann::json;

std::string Fnv1aHex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

}  // namespace

json ExperimentReport::Payload() const {
  json estimates = json::array();
  for (const auto& [label, estimate] : output.estimates) {
    estimates.push_back({{"label", label}, {"estimate", estimate.ToJson()}});
  }
  json assertions = json::array();
  for (const Assertion& a : output.assertions) assertions.push_back(a.ToJson());
  json traces = json::object();
  for (const auto& [name, csv] : output.traces) traces[name] = Fnv1aHex(csv);
  return {{"config", config.document}, {"config_hash", config.Hash()},
          {"results", output.results}, {"estimates", estimates},
          {"assertions", assertions},  {"trace_digests", traces},
          {"passed", passed()}};
}

json ExperimentReport::ToJson() const {
  json out = Payload();
  out["wall_seconds"] = wall_seconds;
  out["versions"] = {
      {"library", kLibraryVersion},
      {"eigen", absl::StrCat(EIGEN_WORLD_VERSION, ".", EIGEN_MAJOR_VERSION, ".",
                             EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__}};
  return out;
}

json StripTiming(json report) {
  report.erase("wall_seconds");
  report.erase("versions");
  return report;
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const RunOptions& options) {
  const Scenario* scenario = FindScenario(config.scenario);
  if (scenario == nullptr) {
    return absl::NotFoundError(absl::StrCat(
        "config.scenario: unknown scenario \"", config.scenario, "\""));
  }
  ScenarioContext ctx{.config = config, .jobs = options.jobs};
  if (options.log) ctx.log = options.log;
  const auto start = std::chrono::steady_clock::now();
  auto output = scenario->run(ctx);
  if (!output.ok()) {
    return absl::Status(
        output.status().code(),
        absl::StrCat(config.scenario, ": ", output.status().message()));
  }
  ExperimentReport report{.config = config, .output = *std::move(output)};
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

absl::Status WriteReport(const ExperimentReport& report,
                         const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::filesystem::path root(dir);
  absl::Status status =
      WriteFile(root / "report.json", report.ToJson().dump(2) + "\n");
  if (!status.ok()) return status;
  std::string csv = PrivacyEstimate::CsvHeader() + "\n";
  for (const auto& [label, estimate] : report.output.estimates) {
    absl::StrAppend(
        &csv,
        estimate.CsvRow(absl::StrCat(report.config.experiment_id, "/", label)),
        "\n");
  }
  status = WriteFile(root / "estimates.csv", csv);
  if (!status.ok()) return status;
  for (const auto& [name, text] : report.output.traces) {
    status = WriteFile(root / name, text);
    if (!status.ok()) return status;
  }
  return absl::OkStatus();
}

absl::StatusOr<ReplayResult> ReplayReport(const std::string& report_path,
                                          const RunOptions& options) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read ", report_path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  json stored = json::parse(buffer.str(), nullptr, false);
  if (stored.is_discarded() || !stored.is_object() ||
      !stored.contains("config") || !stored.contains("config_hash")) {
    return absl::InvalidArgumentError(
        absl::StrCat(report_path, ": not a report (missing config echo)"));
  }
  auto config = ParseConfigJson(stored["config"]);
  if (!config.ok()) return config.status();
  if (config->Hash() != stored["config_hash"]) {
    return absl::DataLossError(
        absl::StrCat(report_path, ": config hash mismatch (stored ",
                     stored["config_hash"].dump(), ", recomputed \"",
                     config->Hash(), "\")"));
  }
  auto rerun = RunExperiment(*config, options);
  if (!rerun.ok()) return rerun.status();
  ReplayResult result{.rerun = *std::move(rerun)};
  const json expected = StripTiming(stored);
  const json actual = result.rerun.Payload();
  result.identical = expected.dump() == actual.dump();
  if (!result.identical) {
    for (const auto& [key, value] : actual.items()) {
      if (!expected.contains(key) || expected[key].dump() != value.dump()) {
        result.first_difference = key;
        break;
      }
    }
    if (result.first_difference.empty())
      result.first_difference = "(extra keys)";
  }
  return result;
}

}  // namespace imitation
