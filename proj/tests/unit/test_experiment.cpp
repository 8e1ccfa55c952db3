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

#include "bellsim/audit/experiment.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bellsim/audit/conditions.hpp"
#include "bellsim/quantum_oracle.hpp"

namespace bellsim::audit {
namespace {

using Names = std::vector<std::string>;

TEST(TauBin, EdgesAndClamp) {
  EXPECT_EQ(tau_bin(0.0, 6), 0);
  EXPECT_EQ(tau_bin(0.999999999, 6), 63);
  EXPECT_EQ(tau_bin(1.0, 6), 63);
  EXPECT_EQ(tau_bin(0.5, 1), 1);
  EXPECT_EQ(tau_bin(0.7, 0), 0);
}

TEST(DisclosureChannel, CellCounts) {
  DisclosureChannel c;
  c.menu = {2, 5};
  c.kind = DisclosureChannel::Kind::tau;
  EXPECT_EQ(c.z_cells(), 32u);
  c.kind = DisclosureChannel::Kind::composite;
  EXPECT_EQ(c.z_cells(), 64u);
  c.kind = DisclosureChannel::Kind::e0;
  EXPECT_EQ(c.z_cells(), 2u);
  c.kind = DisclosureChannel::Kind::constant;
  EXPECT_EQ(c.z_cells(), 1u);
  EXPECT_EQ(c.disclose({singlet(), 0.9}, 1, StateVector{}), 0);
}

TEST(DisclosureChannel, KindNames) {
  for (auto k : {DisclosureChannel::Kind::constant, DisclosureChannel::Kind::tau,
                 DisclosureChannel::Kind::e0, DisclosureChannel::Kind::composite}) {
    EXPECT_EQ(parse_channel_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_channel_kind("bogus"));
}

TEST(Experiment, ValidationErrors) {
  auto cfg = default_singlet_audit(10, 1);
  cfg.prior_a = {0.5, 0.6};
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = default_singlet_audit(10, 1);
  cfg.prior_b = {1.0};
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = default_singlet_audit(10, 1);
  cfg.channel.menu = {17};
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = default_singlet_audit(0, 1);
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = default_singlet_audit(10, 1);
  cfg.menu_a.clear();
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(Experiment, TableShapeAndTotal) {
  const auto t = run_experiment(default_singlet_audit(50000, 2));
  ASSERT_EQ(t.variables().size(), 7u);
  EXPECT_EQ(t.variables()[5].size(), 64u);
  EXPECT_EQ(t.variables()[6].size(), 64u);
  EXPECT_EQ(t.total(), 50000u);
}

TEST(Experiment, IndependentOfWorkerCount) {
  auto cfg = default_singlet_audit(150000, 3);
  cfg.model = ModelKind::epistemic;
  cfg.workers = 1;
  const auto t1 = run_experiment(cfg);
  cfg.workers = 7;
  const auto t7 = run_experiment(cfg);
  EXPECT_TRUE(std::equal(t1.counts().begin(), t1.counts().end(), t7.counts().begin()));
}

TEST(Experiment, OutcomeStatisticsMatchOracle) {
  for (ModelKind kind : {ModelKind::ontic, ModelKind::epistemic}) {
    auto cfg = default_singlet_audit(400000, 4);
    cfg.model = kind;
    cfg.psi = StateVector::from_amplitudes(
        {Complex{std::cos(0.3)}, Complex{0.0, std::sin(0.3)}, Complex{}, Complex{}});
    cfg.prior_a = {0.3, 0.7};
    const auto sampled = marginalize(run_experiment(cfg), Names{"A", "B", "X", "Y"});
    const auto exact = marginalize(
        oracle_table(cfg.psi, cfg.menu_a, cfg.menu_b, cfg.prior_a, {}, StateVector{}),
        Names{"A", "B", "X", "Y"});
    const double n = static_cast<double>(sampled.total());
    for (std::size_t f = 0; f < exact.cell_count(); ++f) {
      const double p = exact.p(f);
      EXPECT_LE(std::abs(sampled.p(f) - p), 4.0 * std::sqrt(p * (1 - p) / n) + 1e-12)
          << to_string(kind) << " cell " << f;
    }
  }
}

TEST(Experiment, TauDisclosureMatchesLambdaBins) {
  auto cfg = default_singlet_audit(20000, 5);
  const auto t = run_experiment(cfg);
  const auto c = condition(t, Names{"Z"}, Names{"L"});
  for (std::size_t g = 0; g < c.given_index.cells(); ++g) {
    if (!c.defined[g]) continue;
    EXPECT_DOUBLE_EQ(c.prob(g, g), 1.0);
  }
}

TEST(OracleTable, ExactAndNormalized) {
  const std::vector<Setting> menu{Setting{}, Setting::in_xz_plane(std::numbers::pi / 2)};
  const auto t = oracle_table(singlet(), menu, menu, {}, {}, StateVector{});
  double sum = 0.0;
  for (double p : t.probabilities()) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  const auto c = condition(t, Names{"X", "Y"}, Names{"A", "B"});
  EXPECT_NEAR(c.prob(0, 1), 0.5, 1e-15);  // a = b = z: X = -Y
  EXPECT_NEAR(c.prob(1, 0), 0.25, 1e-15);
  EXPECT_TRUE(check_NS2(t, TolerancePolicy::exact(1e-12)).pass);
}

}  // namespace
}  // namespace bellsim::audit
