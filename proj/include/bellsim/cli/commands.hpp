// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "bellsim/cli/manifest.hpp"

namespace bellsim::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "BELLSIM_OUT_DIR";

/// Analytic tau-interval lengths against the Born rule.
inline constexpr double kExactBornTolerance = 1e-12;
/// Monte Carlo estimates against their oracle, in standard errors.
inline constexpr double kMonteCarloSigma = 4.0;

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the manifest seed
  unsigned workers = 1;
  /// Include wall-clock timing in the report (makes reruns differ).
  bool timing = false;
};

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::json report;
  /// Summary rows for --format csv.
  std::string summary_csv;
  /// File name -> content, written next to the report.
  std::map<std::string, std::string> artifacts;
};

CommandResult cmd_born_check(const ExperimentManifest& m, const RunOptions& opt);
CommandResult cmd_chsh(const ExperimentManifest& m, const RunOptions& opt);
/// Throws ManifestError when psi2 is missing or ray-equal to psi.
CommandResult cmd_overlap(const ExperimentManifest& m, const RunOptions& opt);
CommandResult cmd_audit(const ExperimentManifest& m, const RunOptions& opt);
CommandResult cmd_zmap(const ExperimentManifest& m, const RunOptions& opt);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
