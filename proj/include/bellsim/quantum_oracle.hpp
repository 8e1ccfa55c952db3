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

#include "bellsim/hilbert.hpp"

namespace bellsim {

/// Born-rule distribution over (X, Y), indexed by outcome_slot().
struct OutcomeDistribution {
  std::array<double, 4> p{};

  double operator()(int x, int y) const { return p[outcome_slot({x, y})]; }
  double marginal_x(int x) const { return (*this)(x, 1) + (*this)(x, -1); }
  double marginal_y(int y) const { return (*this)(1, y) + (*this)(-1, y); }
};

OutcomeDistribution born_distribution(const StateVector& psi, const Setting& a, const Setting& b,
                                      const StateVector& ref = StateVector{});

/// E(a, b) = sum_j X_j Y_j |<phi_j|psi>|^2.
double correlation(const StateVector& psi, const Setting& a, const Setting& b,
                   const StateVector& ref = StateVector{});

/// The four settings of a CHSH experiment.
struct ChshSettings {
  Setting a;
  Setting a_prime;
  Setting b;
  Setting b_prime;

  /// a = 0, a' = 90, b = 45, b' = -45 degrees in the x-z plane; reaches
  /// S = -2 sqrt(2) on the singlet.
  static ChshSettings optimal_singlet();
};

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh(const StateVector& psi, const ChshSettings& s, const StateVector& ref = StateVector{});

}  // namespace bellsim
