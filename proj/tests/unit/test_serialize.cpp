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

#include "bellsim/serialize.hpp"

#include <numbers>

#include <gtest/gtest.h>

namespace bellsim {
namespace {

TEST(CanonicalJson, SortedKeysAndSeventeenDigits) {
  nlohmann::json j;
  j["zeta"] = 0.1;
  j["alpha"] = {1, 2};
  j["mid"] = {{"b", true}, {"a", nullptr}};
  EXPECT_EQ(canonical_json(j),
            "{\n  \"alpha\": [\n    1,\n    2\n  ],\n  \"mid\": {\n    \"a\": null,\n    \"b\": true\n"
            "  },\n  \"zeta\": 0.10000000000000001\n}\n");
}

TEST(CanonicalJson, NonFiniteBecomesNull) {
  nlohmann::json j = {{"x", std::numeric_limits<double>::infinity()}};
  EXPECT_EQ(canonical_json(j), "{\n  \"x\": null\n}\n");
}

TEST(CanonicalJson, RoundTripsDoublesExactly) {
  const double v = std::numbers::pi / 7.0;
  const auto back = nlohmann::json::parse(canonical_json({{"v", v}}));
  EXPECT_EQ(back["v"].get<double>(), v);
}

TEST(StateJson, RoundTrip) {
  const StateVector s = singlet();
  EXPECT_EQ(state_from_json(state_to_json(s)), s);
}

TEST(StateJson, RejectsMalformed) {
  EXPECT_THROW(state_from_json(nlohmann::json::parse("[[1,0],[0,0],[0,0]]")), std::invalid_argument);
  EXPECT_THROW(state_from_json(nlohmann::json::parse("[[1,0],[0,0],[0,0],[0.5,0]]")),
               std::invalid_argument);
  EXPECT_THROW(state_from_json(nlohmann::json::parse("[[1,0],[0,0],[0,0],[\"a\",0]]")),
               std::invalid_argument);
}

TEST(SettingJson, VectorAndAngleForms) {
  const Setting s = setting_from_json(nlohmann::json::parse("{\"xz_deg\": 90}"));
  EXPECT_NEAR(s.x(), 1.0, 1e-15);
  EXPECT_EQ(setting_from_json(setting_to_json(s)), s);
  EXPECT_THROW(setting_from_json(nlohmann::json::parse("[1, 1, 0]")), std::invalid_argument);
  EXPECT_THROW(setting_from_json(nlohmann::json::parse("[1, 0]")), std::invalid_argument);
}

}  // namespace
}  // namespace bellsim
