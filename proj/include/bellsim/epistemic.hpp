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
#include <ostream>
#include <string>

#include "bellsim/bell_ontic.hpp"
#include "bellsim/hilbert.hpp"
#include "bellsim/random.hpp"

namespace bellsim {

/// Fixed thresholds of the redistribution.
struct EpistemicParams {
  /// States with |<phi|ref>|^2 above this lie in the cap where z > 0.
  static constexpr double kCapThreshold = 0.75;
  /// Minimum reference overlap admitted by the infimum defining z.
  static constexpr double kConstraintLevel = 0.25;
  /// sup z, attained at phi = ref.
  static constexpr double kMaxZ = 0.25;
  /// Rejection loop budget for E0 sampling.
  static constexpr std::uint64_t kMaxIterations = 10'000'000;
};

/// z as a function of c^2 = |<ref|phi>|^2:
/// zero for c^2 <= 3/4, (c - sqrt(3) sqrt(1 - c^2))^2 / 4 above.
double z_from_overlap(double c2);

/// inf |<phi'|phi>|^2 over all phi' with |<phi'|ref>|^2 >= 1/4.
double z(const StateVector& phi, const StateVector& ref = StateVector{});

bool in_cap(const StateVector& phi, const StateVector& ref = StateVector{});

/// True iff |<phi|ref>|^2 > 3/4 and 0 <= tau < z(phi).
bool in_E0(const OnticState& lambda, const StateVector& ref = StateVector{});

/// Haar-distributed state conditioned on |<phi|ref>|^2 > 3/4.
StateVector sample_cap_state(const StateVector& ref, Rng& rng);

/// Uniform draw from E0 under Haar measure on states times Lebesgue measure on
/// tau. Throws std::runtime_error if the rejection budget is exhausted.
/// `candidates_used`, when given, receives the number of cap states drawn.
OnticState sample_E0_uniform(const StateVector& ref, Rng& rng,
                             std::uint64_t* candidates_used = nullptr);

/// Draw from the redistributed density for preparation psi.
OnticState sample_epistemic(const StateVector& psi, const StateVector& ref, Rng& rng);

struct StatisticalBornCheck {
  std::array<double, 4> frequency{};  // by basis index j
  std::array<double, 4> born{};
  std::array<double, 4> tolerance{};  // 4 sqrt(p(1-p)/N)
  std::uint64_t samples = 0;
  double max_deviation = 0.0;
  /// Largest |freq - p| / sqrt(p(1-p)/N); zero-variance cells count only if they deviate.
  double max_sigma = 0.0;
  bool pass = true;
};

inline constexpr double kBornSigma = 4.0;

/// Frequencies of assigned_index over `n` epistemic draws against the Born rule.
StatisticalBornCheck epistemic_born_check(const StateVector& psi, const Setting& a,
                                          const Setting& b, const StateVector& ref,
                                          std::uint64_t n, Rng& rng);

/// Chunked variant: stream `c` is derived from `seed`, results are independent
/// of `workers`.
StatisticalBornCheck epistemic_born_check(const StateVector& psi, const Setting& a,
                                          const Setting& b, const StateVector& ref,
                                          std::uint64_t n, std::uint64_t seed,
                                          unsigned workers);

/// Lower bound on the shared probability mass of two preparations.
struct OverlapCertificate {
  StateVector psi1;
  StateVector psi2;
  double z1 = 0.0;
  double z2 = 0.0;
  double lower_bound = 0.0;
  std::string witness;
};

/// Throws std::invalid_argument when the states are equal as rays.
OverlapCertificate overlap_certificate(const StateVector& psi1, const StateVector& psi2,
                                       const StateVector& ref = StateVector{});

/// Writes "in_E0,c2,tau,j,X,Y" rows with a seed comment.
void write_epistemic_samples_csv(std::ostream& out, const StateVector& psi, const Setting& a,
                                 const Setting& b, const StateVector& ref, std::size_t count,
                                 std::uint64_t seed);

/// Writes "c2,z" rows on an even grid of `points` values over [0, 1].
void write_z_profile_csv(std::ostream& out, std::size_t points);

}  // namespace bellsim
