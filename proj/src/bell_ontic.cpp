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

#include "bellsim/bell_ontic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace bellsim {

OnticState sample_ontic(const StateVector& psi, Rng& rng) { return {psi, rng.uniform()}; }

std::array<double, 4> cumulative_bounds(const StateVector& phi, const JointEigenbasis& basis) {
  std::array<double, 4> s{};
  double acc = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    acc += overlap(basis.vectors[j], phi);
    s[j] = std::min(acc, 1.0);
  }
  s[3] = 1.0;
  return s;
}

std::size_t assigned_index(double tau, const std::array<double, 4>& bounds) {
  for (std::size_t j = 0; j < 3; ++j) {
    if (tau < bounds[j]) return j;
  }
  return 3;
}

std::size_t assigned_index(const OnticState& lambda, const JointEigenbasis& basis) {
  return assigned_index(lambda.tau, cumulative_bounds(lambda.phi, basis));
}

OutcomePair outcomes(const OnticState& lambda, const JointEigenbasis& basis) {
  return basis.outcomes[assigned_index(lambda, basis)];
}

OutcomePair outcomes(const OnticState& lambda, const Setting& a, const Setting& b,
                     const StateVector& ref) {
  return outcomes(lambda, joint_eigenbasis(a, b, ref));
}

ExactBornCheck exact_born_check(const StateVector& psi, const Setting& a, const Setting& b,
                                const StateVector& ref) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  const std::array<double, 4> s = cumulative_bounds(psi, basis);
  ExactBornCheck out;
  double lower = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    out.interval_lengths[j] = s[j] - lower;
    lower = s[j];
    out.born[j] = overlap(basis.vectors[j], psi);
    out.max_deviation =
        std::max(out.max_deviation, std::abs(out.interval_lengths[j] - out.born[j]));
  }
  return out;
}

void write_ontic_samples_csv(std::ostream& out, const StateVector& psi, const Setting& a,
                             const Setting& b, const StateVector& ref, std::size_t count,
                             std::uint64_t seed) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  const auto bounds = cumulative_bounds(psi, basis);
  Rng rng(seed);
  fmt::print(out, "# seed={}\ntau,j,X,Y\n", seed);
  for (std::size_t i = 0; i < count; ++i) {
    const OnticState lambda = sample_ontic(psi, rng);
    const std::size_t j = assigned_index(lambda.tau, bounds);
    fmt::print(out, "{:.17g},{},{},{}\n", lambda.tau, j, basis.outcomes[j].x, basis.outcomes[j].y);
  }
}

}  // namespace bellsim
