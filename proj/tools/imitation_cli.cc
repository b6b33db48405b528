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

// Command-line front end for the experiment harness.
//
//   imitation_cli list [--dump-configs DIR]
//   imitation_cli run CONFIG [--seed N] [--out DIR] [--jobs N] [--verbose]
//   imitation_cli replay REPORT [--jobs N] [--verbose]
//   imitation_cli selftest [--jobs N]
//
// Exit codes: 0 when every assertion passes, 1 on an assertion failure or a
// replay mismatch, 2 on a configuration or runtime error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "imitation/harness/config.h"
#include "imitation/harness/report.h"
#include "imitation/harness/scenario.h"

namespace imitation {
namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

int ReportError(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return kError;
}

absl::StatusOr<std::string> ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunOptions Options(int jobs, bool verbose) {
  RunOptions options{.jobs = jobs};
  if (verbose) {
    options.log = [](const std::string& line) { std::cerr << line << "\n"; };
  }
  return options;
}

void PrintAssertions(const ExperimentReport& report) {
  for (const Assertion& a : report.output.assertions) {
    std::cout << (a.passed ? "PASS " : "FAIL ") << report.config.experiment_id
              << ": " << a.name;
    if (!a.detail.is_null()) std::cout << " " << a.detail.dump();
    std::cout << "\n";
  }
}

// Seed precedence: --seed, then IMITATION_SEED, then the config.
absl::Status ApplySeed(ExperimentConfig& config,
                       const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) {
    OverrideSeed(config, *flag);
    return absl::OkStatus();
  }
  if (const char* env = std::getenv("IMITATION_SEED"); env != nullptr) {
    std::uint64_t seed = 0;
    if (!absl::SimpleAtoi(env, &seed)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "IMITATION_SEED: not an unsigned integer: \"", env, "\""));
    }
    OverrideSeed(config, seed);
  }
  return absl::OkStatus();
}

int List(const std::string& dump_dir) {
  if (dump_dir.empty()) {
    for (const Scenario& s : ScenarioRegistry()) {
      std::cout << s.name << "\t" << s.description << "\n";
    }
    std::cout << ScenarioListing().dump(2) << "\n";
    return kPass;
  }
  std::error_code ec;
  std::filesystem::create_directories(dump_dir, ec);
  if (ec) return ReportError(absl::UnavailableError(ec.message()));
  for (const Scenario& s : ScenarioRegistry()) {
    const std::filesystem::path path =
        std::filesystem::path(dump_dir) / (s.name + ".json");
    std::ofstream out(path, std::ios::binary);
    out << s.defaults.dump(2) << "\n";
    if (!out) {
      return ReportError(
          absl::UnavailableError(absl::StrCat("cannot write ", path.string())));
    }
  }
  return kPass;
}

int Run(const std::string& config_path,
        const std::optional<std::uint64_t>& seed, const std::string& out_flag,
        int jobs, bool verbose) {
  auto text = ReadText(config_path);
  if (!text.ok()) return ReportError(text.status());
  auto config = ParseConfig(*text);
  if (!config.ok()) return ReportError(config.status());
  if (absl::Status s = ApplySeed(*config, seed); !s.ok()) return ReportError(s);
  auto report = RunExperiment(*config, Options(jobs, verbose));
  if (!report.ok()) return ReportError(report.status());
  std::string out_dir = out_flag;
  if (out_dir.empty()) out_dir = config->output_dir;
  if (out_dir.empty()) out_dir = absl::StrCat("runs/", config->experiment_id);
  if (absl::Status s = WriteReport(*report, out_dir); !s.ok()) {
    return ReportError(s);
  }
  PrintAssertions(*report);
  std::cout << (report->passed() ? "PASS " : "FAIL ") << config->experiment_id
            << " (" << report->wall_seconds << " s) -> " << out_dir
            << "/report.json\n";
  return report->passed() ? kPass : kFail;
}

int Replay(const std::string& report_path, int jobs, bool verbose) {
  auto replay = ReplayReport(report_path, Options(jobs, verbose));
  if (!replay.ok()) return ReportError(replay.status());
  if (!replay->identical) {
    std::cout << "MISMATCH " << report_path << ": payload differs at \""
              << replay->first_difference << "\"\n";
    return kFail;
  }
  std::cout << "IDENTICAL " << report_path << "\n";
  return replay->rerun.passed() ? kPass : kFail;
}

// Runs the fast scenarios at their defaults, twice, and checks both the
// assertions and payload equality.
int SelfTest(int jobs) {
  int status = kPass;
  for (const char* name : {"trivial-imitation", "tree-structure-paper-table",
                           "column-space-recovery",
                           "assisted-oracle-convergence", "black-box-audit"}) {
    const Scenario* scenario = FindScenario(name);
    auto config = ParseConfigJson(scenario->defaults);
    if (!config.ok()) return ReportError(config.status());
    auto first = RunExperiment(*config, {.jobs = jobs});
    auto second = RunExperiment(*config, {.jobs = 1});
    if (!first.ok()) return ReportError(first.status());
    if (!second.ok()) return ReportError(second.status());
    const bool same = first->Payload().dump() == second->Payload().dump();
    const bool ok = first->passed() && same;
    std::cout << (ok ? "PASS " : "FAIL ") << name
              << (same ? "" : " (payload not reproducible)") << "\n";
    if (!ok) status = kFail;
  }
  return status;
}

}  // namespace
}  // namespace imitation

int main(int argc, char** argv) {
  CLI::App app{"Imitation privacy experiment harness"};
  app.require_subcommand(1);

  std::string dump_dir;
  CLI::App* list = app.add_subcommand("list", "List registered scenarios");
  list->add_option("--dump-configs", dump_dir,
                   "Write each scenario's default config to DIR/<name>.json");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int jobs = 1;
  bool verbose = false;
  CLI::App* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Output directory");

  std::string report_path;
  CLI::App* replay =
      app.add_subcommand("replay", "Rerun a report's config and compare");
  replay->add_option("report", report_path, "report.json")->required();

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the fast scenarios twice");

  for (CLI::App* sub : {run, replay, selftest}) {
    sub->add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "Progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*list) return imitation::List(dump_dir);
  if (*run) return imitation::Run(config_path, seed, out_dir, jobs, verbose);
  if (*replay) return imitation::Replay(report_path, jobs, verbose);
  return imitation::SelfTest(jobs);
}
