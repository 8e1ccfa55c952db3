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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bellsim/audit/conditions.hpp"
#include "bellsim/audit/experiment.hpp"
#include "bellsim/model.hpp"
#include "bellsim/quantum_oracle.hpp"

namespace bellsim::cli {

/// Invalid manifest content; `field` names the offending key.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Everything a command needs, decoded from a JSON manifest. See README for
/// the schema; every key is optional except where a command needs it.
struct ExperimentManifest {
  nlohmann::json raw;
  std::filesystem::path base_dir;

  ModelKind model = ModelKind::ontic;
  StateVector psi = singlet();
  std::optional<StateVector> psi2;
  StateVector reference;
  std::vector<Setting> menu_a;
  std::vector<Setting> menu_b;
  std::vector<double> prior_a;
  std::vector<double> prior_b;
  std::vector<double> prior_c;
  audit::DisclosureChannel channel;
  audit::LambdaBinning lambda;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  audit::TolerancePolicy tolerance = audit::TolerancePolicy::statistical();
  ChshSettings chsh = ChshSettings::optimal_singlet();
  /// Check name -> "pass" or "fail".
  std::map<std::string, std::string> expect;
  /// Replaces the Born oracle in born-check, one row per (a, b) pair in
  /// row-major menu order, entries by outcome slot (+,+), (+,-), (-,+), (-,-).
  std::optional<std::vector<std::array<double, 4>>> expected_born;
  /// Audit an existing table instead of running the experiment.
  std::optional<std::filesystem::path> table_csv;
  std::size_t zmap_points = 101;
  std::size_t dump_samples = 0;

  audit::ExperimentConfig experiment(unsigned workers) const;
};

/// Throws ManifestError.
ExperimentManifest parse_manifest(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// SHA-256 hex digest of the manifest's canonical JSON text.
std::string manifest_digest(const nlohmann::json& raw);

}  // namespace bellsim::cli
