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
#include <cstddef>
#include <ostream>

#include "bellsim/hilbert.hpp"
#include "bellsim/random.hpp"

namespace bellsim {

/// Complete state of the hidden-variable model: a state vector phi and a
/// real parameter tau in [0, 1).
struct OnticState {
  StateVector phi;
  double tau = 0.0;
};

/// Draws lambda = (psi, tau) with tau uniform on [0, 1).
OnticState sample_ontic(const StateVector& psi, Rng& rng);

/// Upper ends S_0..S_3 of the tau intervals for phi in `basis`;
/// S_j = sum_{k<=j} |<phi_k|phi>|^2 with S_3 pinned to 1.
std::array<double, 4> cumulative_bounds(const StateVector& phi, const JointEigenbasis& basis);

/// Index j of the basis projector that takes the value 1 at lambda.
std::size_t assigned_index(const OnticState& lambda, const JointEigenbasis& basis);

/// Index lookup against precomputed bounds.
std::size_t assigned_index(double tau, const std::array<double, 4>& bounds);

OutcomePair outcomes(const OnticState& lambda, const JointEigenbasis& basis);
OutcomePair outcomes(const OnticState& lambda, const Setting& a, const Setting& b,
                     const StateVector& ref = StateVector{});

struct ExactBornCheck {
  std::array<double, 4> interval_lengths{};
  std::array<double, 4> born{};
  double max_deviation = 0.0;
};

/// Compares tau-interval lengths with |<phi_j|psi>|^2 without sampling.
ExactBornCheck exact_born_check(const StateVector& psi, const Setting& a, const Setting& b,
                                const StateVector& ref = StateVector{});

/// Writes sample rows "tau,j,X,Y" (17 significant digits) with a seed comment.
void write_ontic_samples_csv(std::ostream& out, const StateVector& psi, const Setting& a,
                             const Setting& b, const StateVector& ref, std::size_t count,
                             std::uint64_t seed);

}  // namespace bellsim
