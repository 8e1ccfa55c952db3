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

#include "bellsim/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace bellsim {
namespace {

using testing::kron;
using testing::Mat2;
using testing::Mat4;
using testing::pauli_dot;
using testing::to_eigen;

TEST(StateVector, DefaultIsFirstBasisVector) {
  const StateVector s;
  EXPECT_EQ(s[0], Complex(1.0));
  for (int k = 1; k < 4; ++k) EXPECT_EQ(s[k], Complex(0.0));
}

TEST(StateVector, RejectsBadNorm) {
  EXPECT_THROW(StateVector::from_amplitudes({Complex{1.0}, Complex{0.1}, {}, {}}),
               std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes({Complex{NAN}, {}, {}, {}}), std::invalid_argument);
  EXPECT_THROW(StateVector::normalized({}), std::invalid_argument);
}

TEST(StateVector, RenormalizesWithinTolerance) {
  const double eps = 4e-13;
  const StateVector s = StateVector::from_amplitudes({Complex{std::sqrt(1.0 + eps)}, {}, {}, {}});
  EXPECT_NEAR(std::norm(s[0]), 1.0, 1e-15);
}

TEST(StateVector, PhaseFixedKeepsRay) {
  std::mt19937_64 eng(1);
  for (int i = 0; i < 200; ++i) {
    const StateVector s = testing::haar_state(eng);
    const StateVector f = s.phase_fixed();
    EXPECT_TRUE(ray_equal(s, f));
    EXPECT_NEAR(f[0].imag(), 0.0, 1e-15);
    EXPECT_GT(f[0].real(), 0.0);
  }
  const StateVector t = StateVector::from_amplitudes({Complex{}, Complex{0.0, -1.0}, Complex{}, Complex{}}).phase_fixed();
  EXPECT_NEAR(t[1].real(), 1.0, 1e-15);
}

TEST(StateVector, SingletAmplitudes) {
  const StateVector s = singlet();
  EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[2].real(), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(StateVector, RayEquality) {
  const StateVector s = singlet();
  std::array<Complex, 4> rotated{};
  for (int k = 0; k < 4; ++k) rotated[k] = s[k] * std::polar(1.0, 0.7);
  EXPECT_TRUE(ray_equal(s, StateVector::from_amplitudes(rotated)));
  EXPECT_FALSE(ray_equal(s, StateVector{}));
}

TEST(Setting, Validation) {
  EXPECT_THROW(Setting::from_vector({1.0, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Setting::from_vector({NAN, 0.0, 1.0}), std::invalid_argument);
  const Setting s = Setting::in_xz_plane(std::numbers::pi / 2);
  EXPECT_NEAR(s.x(), 1.0, 1e-15);
  EXPECT_NEAR(s.z(), 0.0, 1e-15);
}

TEST(Observable, HermitianWithUnitEigenvalues) {
  std::mt19937_64 eng(2);
  for (int i = 0; i < 500; ++i) {
    const Setting n = testing::random_setting(eng);
    const Observable o = observable_from_setting(n);
    Mat2 m;
    m << o.m[0][0], o.m[0][1], o.m[1][0], o.m[1][1];
    EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
    EXPECT_LT((m - pauli_dot(n)).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-10);
    EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-10);
  }
}

TEST(QubitEigenvector, SatisfiesEigenvalueRelationIncludingPoles) {
  std::mt19937_64 eng(3);
  std::vector<Setting> settings{Setting{}, Setting::from_vector({0, 0, -1}),
                                Setting::from_vector({1, 0, 0})};
  for (int i = 0; i < 300; ++i) settings.push_back(testing::random_setting(eng));
  for (const auto& n : settings) {
    for (int sign : {1, -1}) {
      const auto v = qubit_eigenvector(n, sign);
      Eigen::Vector2cd e(v[0], v[1]);
      EXPECT_NEAR(e.norm(), 1.0, 1e-12);
      EXPECT_LT((pauli_dot(n) * e - static_cast<double>(sign) * e).norm(), 1e-10);
    }
  }
}

void expect_valid_basis(const JointEigenbasis& jb, const Setting& a, const Setting& b) {
  const Mat4 ea = kron(pauli_dot(a), Mat2::Identity());
  const Mat4 eb = kron(Mat2::Identity(), pauli_dot(b));
  for (int j = 0; j < 4; ++j) {
    const auto v = to_eigen(jb.vectors[j]);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(std::abs(v.dot(to_eigen(jb.vectors[k]))), j == k ? 1.0 : 0.0, 1e-10);
    }
    EXPECT_LT((ea * v - jb.outcomes[j].x * v).norm(), 1e-10);
    EXPECT_LT((eb * v - jb.outcomes[j].y * v).norm(), 1e-10);
    // Product state: the 2x2 amplitude matrix has rank one.
    EXPECT_LT(std::abs(v(0) * v(3) - v(1) * v(2)), 1e-10);
    // Phase convention.
    for (int k = 0; k < 4; ++k) {
      if (std::abs(v(k)) > 1e-12) {
        EXPECT_GT(v(k).real(), 0.0);
        EXPECT_NEAR(v(k).imag(), 0.0, 1e-12);
        break;
      }
    }
    if (j > 0) {
      EXPECT_GE(overlap(jb.vectors[j - 1], jb.reference) + kTieTolerance,
                overlap(jb.vectors[j], jb.reference));
    }
  }
  std::array<int, 4> seen{};
  for (const auto& o : jb.outcomes) ++seen[outcome_slot(o)];
  EXPECT_EQ(seen, (std::array<int, 4>{1, 1, 1, 1}));
}

TEST(JointEigenbasis, PropertiesOnRandomSettings) {
  std::mt19937_64 eng(4);
  for (int i = 0; i < 500; ++i) {
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const StateVector ref = i % 2 == 0 ? StateVector{} : testing::haar_state(eng);
    expect_valid_basis(joint_eigenbasis(a, b, ref), a, b);
  }
}

TEST(JointEigenbasis, TiesFollowOutcomeLabels) {
  const Setting x = Setting::from_vector({1, 0, 0});
  const JointEigenbasis all_tied = joint_eigenbasis(x, x);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(outcome_slot(all_tied.outcomes[j]), j);

  const JointEigenbasis zz = joint_eigenbasis(Setting{}, Setting{});
  EXPECT_EQ(zz.outcomes[0], (OutcomePair{1, 1}));
  for (std::size_t j = 1; j < 4; ++j) EXPECT_EQ(outcome_slot(zz.outcomes[j]), j);
}

TEST(JointEigenbasis, ReferenceVectorLeadsWhenItIsAProductEigenvector) {
  // |00> is the (+,+) eigenvector of z (x) z; with a = -z it is (-,+).
  const JointEigenbasis jb = joint_eigenbasis(Setting::from_vector({0, 0, -1}), Setting{});
  EXPECT_EQ(jb.outcomes[0], (OutcomePair{-1, 1}));
  EXPECT_NEAR(overlap(jb.vectors[0], StateVector{}), 1.0, 1e-15);
}

TEST(JointEigenbasis, BornProbabilitiesMatchSpectralOracle) {
  std::mt19937_64 eng(5);
  for (int i = 0; i < 500; ++i) {
    const StateVector psi = testing::haar_state(eng);
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const JointEigenbasis jb = joint_eigenbasis(a, b);
    const auto expected = testing::born_oracle(psi, a, b);
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(overlap(jb.vectors[j], psi), expected[outcome_slot(jb.outcomes[j])], 1e-12);
    }
  }
}

}  // namespace
}  // namespace bellsim
