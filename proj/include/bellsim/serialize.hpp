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

#include <string>

#include <nlohmann/json.hpp>

#include "bellsim/hilbert.hpp"

namespace bellsim {

/// Deterministic JSON text: object keys sorted, two-space indent, floating
/// point numbers printed with 17 significant digits, non-finite as null.
std::string canonical_json(const nlohmann::json& j);

/// [[re, im], x4]
nlohmann::json state_to_json(const StateVector& psi);
/// Throws std::invalid_argument on malformed input or a non-unit norm.
StateVector state_from_json(const nlohmann::json& j);

/// [x, y, z]
nlohmann::json setting_to_json(const Setting& s);
/// Accepts [x, y, z] or {"xz_deg": theta}.
Setting setting_from_json(const nlohmann::json& j);

}  // namespace bellsim
