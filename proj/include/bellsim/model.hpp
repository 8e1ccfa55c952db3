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

#include <optional>
#include <string_view>

#include "bellsim/bell_ontic.hpp"
#include "bellsim/epistemic.hpp"
#include "bellsim/quantum_oracle.hpp"

namespace bellsim {

enum class ModelKind { ontic, epistemic };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Draws ontic states for a fixed preparation under either model.
class OnticSampler {
 public:
  OnticSampler(ModelKind kind, const StateVector& psi, const StateVector& ref = StateVector{})
      : kind_(kind), psi_(psi), ref_(ref) {}

  OnticState operator()(Rng& rng) const {
    return kind_ == ModelKind::ontic ? sample_ontic(psi_, rng) : sample_epistemic(psi_, ref_, rng);
  }

  ModelKind kind() const { return kind_; }
  const StateVector& psi() const { return psi_; }
  const StateVector& reference() const { return ref_; }

 private:
  ModelKind kind_;
  StateVector psi_;
  StateVector ref_;
};

/// Monte Carlo CHSH estimate from model samples.
struct ChshEstimate {
  double value = 0.0;
  double sigma = 0.0;
  std::array<double, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
  std::uint64_t samples_per_term = 0;
};

/// Splits `total` samples evenly across the four correlation terms; each term
/// uses its own family of streams derived from `seed`.
ChshEstimate estimate_chsh(const OnticSampler& model, const ChshSettings& s, std::uint64_t total,
                           std::uint64_t seed, unsigned workers = 1);

}  // namespace bellsim
