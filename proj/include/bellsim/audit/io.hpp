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

// Table and verdict serialization.
//
// CSV layout: optional '#' comment lines, a header naming the variables then
// "count,probability", and one row per cell in row-major order. The count
// column is empty for tables without tallies. Double probabilities use 17
// significant digits; rational ones are written as "num/den".
//
// On input, each variable's domain is the sorted set of values found in its
// column, absent cells have probability zero, and a probability may be given
// as a decimal or as "num/den".

#pragma once

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "bellsim/audit/conditions.hpp"
#include "bellsim/audit/table.hpp"

namespace bellsim::audit {

template <class S>
void write_table_csv(std::ostream& out, const ProbabilityTable<S>& t);

/// Throws std::invalid_argument on malformed input.
ProbabilityTable<double> read_table_csv(std::istream& in);
ProbabilityTable<Rational> read_rational_table_csv(std::istream& in);

template <class S>
nlohmann::json table_to_json(const ProbabilityTable<S>& t);

nlohmann::json to_json(const TolerancePolicy& p);
nlohmann::json to_json(const ConditionVerdict& v);
nlohmann::json to_json(const ImplicationReport& r);
nlohmann::json to_json(const FreeChoiceReport& r);

}  // namespace bellsim::audit
