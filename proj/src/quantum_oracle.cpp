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

#include "bellsim/quantum_oracle.hpp"

#include <numbers>

namespace bellsim {

OutcomeDistribution born_distribution(const StateVector& psi, const Setting& a, const Setting& b,
                                      const StateVector& ref) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  OutcomeDistribution dist;
  for (std::size_t j = 0; j < 4; ++j) {
    dist.p[outcome_slot(basis.outcomes[j])] = overlap(basis.vectors[j], psi);
  }
  return dist;
}

double correlation(const StateVector& psi, const Setting& a, const Setting& b,
                   const StateVector& ref) {
  const OutcomeDistribution d = born_distribution(psi, a, b, ref);
  return d(1, 1) + d(-1, -1) - d(1, -1) - d(-1, 1);
}

ChshSettings ChshSettings::optimal_singlet() {
  constexpr double q = std::numbers::pi / 4.0;
  return {Setting::in_xz_plane(0.0), Setting::in_xz_plane(2.0 * q), Setting::in_xz_plane(q),
          Setting::in_xz_plane(-q)};
}

double chsh(const StateVector& psi, const ChshSettings& s, const StateVector& ref) {
  return correlation(psi, s.a, s.b, ref) + correlation(psi, s.a, s.b_prime, ref) +
         correlation(psi, s.a_prime, s.b, ref) - correlation(psi, s.a_prime, s.b_prime, ref);
}

}  // namespace bellsim
