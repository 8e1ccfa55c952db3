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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace bellsim {
namespace {

TEST(CumulativeBounds, MonotoneAndClosed) {
  std::mt19937_64 eng(20);
  for (int i = 0; i < 500; ++i) {
    const JointEigenbasis jb =
        joint_eigenbasis(testing::random_setting(eng), testing::random_setting(eng));
    const auto s = cumulative_bounds(testing::haar_state(eng), jb);
    EXPECT_GE(s[0], 0.0);
    for (int j = 1; j < 4; ++j) EXPECT_GE(s[j], s[j - 1]);
    EXPECT_EQ(s[3], 1.0);
  }
}

TEST(AssignedIndex, HalfOpenIntervals) {
  const std::array<double, 4> s{0.25, 0.5, 0.5, 1.0};
  EXPECT_EQ(assigned_index(0.0, s), 0u);
  EXPECT_EQ(assigned_index(0.2499, s), 0u);
  EXPECT_EQ(assigned_index(0.25, s), 1u);
  EXPECT_EQ(assigned_index(0.5, s), 3u);  // empty third interval is skipped
  EXPECT_EQ(assigned_index(0.999999, s), 3u);
}

TEST(ExactBorn, IntervalLengthsMatchOracle) {
  std::mt19937_64 eng(21);
  for (int i = 0; i < 1000; ++i) {
    const StateVector psi = testing::haar_state(eng);
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const StateVector ref = i % 3 == 0 ? testing::haar_state(eng) : StateVector{};
    const ExactBornCheck e = exact_born_check(psi, a, b, ref);
    const JointEigenbasis jb = joint_eigenbasis(a, b, ref);
    const auto oracle = testing::born_oracle(psi, a, b);
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(e.interval_lengths[j], oracle[outcome_slot(jb.outcomes[j])], 1e-12);
    }
    EXPECT_LE(e.max_deviation, 1e-12);
  }
}

TEST(SampleOntic, StateIsPreparationAndTauUniform) {
  Rng rng(22);
  const StateVector psi = singlet();
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const OnticState l = sample_ontic(psi, rng);
    ASSERT_EQ(l.phi, psi);
    ASSERT_GE(l.tau, 0.0);
    ASSERT_LT(l.tau, 1.0);
    sum += l.tau;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(SampleOntic, OutcomeFrequenciesFollowBornRule) {
  std::mt19937_64 eng(23);
  Rng rng(24);
  const int n = 40000;
  for (int c = 0; c < 10; ++c) {
    const StateVector psi = testing::haar_state(eng);
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const JointEigenbasis jb = joint_eigenbasis(a, b);
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) ++counts[outcome_slot(outcomes(sample_ontic(psi, rng), jb))];
    const auto p = testing::born_oracle(psi, a, b);
    for (int s = 0; s < 4; ++s) {
      EXPECT_LE(std::abs(counts[s] / double(n) - p[s]), 4.0 * std::sqrt(p[s] * (1 - p[s]) / n) + 1e-12);
    }
  }
}

TEST(SampleOntic, OutcomesAreDeterministicGivenLambda) {
  const OnticState l{singlet(), 0.3};
  const Setting a = Setting::in_xz_plane(0.4);
  const Setting b = Setting::in_xz_plane(1.9);
  EXPECT_EQ(outcomes(l, a, b), outcomes(l, a, b));
}

TEST(OnticCsv, HeaderAndDeterminism) {
  std::ostringstream a, b;
  write_ontic_samples_csv(a, singlet(), Setting{}, Setting{}, StateVector{}, 50, 77);
  write_ontic_samples_csv(b, singlet(), Setting{}, Setting{}, StateVector{}, 50, 77);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# seed=77\ntau,j,X,Y\n", 0), 0u);
  std::istringstream in(a.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 52);
}

}  // namespace
}  // namespace bellsim
