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
#include <optional>
#include <string_view>
#include <vector>

#include "bellsim/audit/table.hpp"
#include "bellsim/hilbert.hpp"
#include "bellsim/model.hpp"

namespace bellsim::audit {

/// Measurement (C, Z) that reveals part of the ontic state. Setting C = c
/// selects menu[c], the number of tau bits disclosed.
struct DisclosureChannel {
  enum class Kind {
    constant,   // Z = 0
    tau,        // Z = floor(tau * 2^bits)
    e0,         // Z = E0 membership bit when bits > 0, else 0
    composite,  // Z = 2 * floor(tau * 2^bits) + E0 bit
  };

  Kind kind = Kind::tau;
  std::vector<int> menu{6};

  int max_bits() const;
  std::size_t z_cells() const;
  std::int64_t disclose(const OnticState& lambda, std::size_t c, const StateVector& ref) const;
};

std::string_view to_string(DisclosureChannel::Kind kind);
std::optional<DisclosureChannel::Kind> parse_channel_kind(std::string_view name);

/// Coarse-graining of lambda into the variable L.
struct LambdaBinning {
  bool enabled = true;
  int bits = 6;
  bool with_e0 = false;

  std::size_t cells() const;
  std::int64_t bin(const OnticState& lambda, const StateVector& ref) const;
};

/// floor(tau * 2^bits), clamped into range.
std::int64_t tau_bin(double tau, int bits);

struct ExperimentConfig {
  ModelKind model = ModelKind::ontic;
  StateVector psi = singlet();
  StateVector reference;
  std::vector<Setting> menu_a;
  std::vector<Setting> menu_b;
  std::vector<double> prior_a;  // empty means uniform
  std::vector<double> prior_b;
  std::vector<double> prior_c;
  DisclosureChannel channel;
  LambdaBinning lambda;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Throws std::invalid_argument for empty menus, malformed priors, bad bit
/// counts or zero samples.
void validate(const ExperimentConfig& cfg);

/// Tallies (A, B, C, X, Y, Z[, L]) over `samples` independent trials. Settings
/// are drawn from their priors independently of lambda. The table depends only
/// on the configuration, not on the worker count.
ProbabilityTable<double> run_experiment(const ExperimentConfig& cfg);

/// Exact (A, B, C, X, Y, Z) table from the Born rule with a constant
/// disclosure: P = P(a) P(b) |<phi_j|psi>|^2, C and Z single-valued.
ProbabilityTable<double> oracle_table(const StateVector& psi, const std::vector<Setting>& menu_a,
                                      const std::vector<Setting>& menu_b,
                                      const std::vector<double>& prior_a,
                                      const std::vector<double>& prior_b,
                                      const StateVector& ref = StateVector{});

/// Singlet, A in {0, 90} and B in {0, 90} degrees in the x-z plane, uniform
/// priors, tau disclosure of 6 bits, L with 6 bits.
ExperimentConfig default_singlet_audit(std::uint64_t samples, std::uint64_t seed);

}  // namespace bellsim::audit
