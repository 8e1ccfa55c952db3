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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace bellsim {
namespace {

void emit(const nlohmann::json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(v, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string("null");
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

nlohmann::json state_to_json(const StateVector& psi) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : psi.amplitudes()) arr.push_back({c.real(), c.imag()});
  return arr;
}

StateVector state_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != StateVector::kDim) {
    throw std::invalid_argument("state must be an array of 4 [re, im] pairs");
  }
  std::array<Complex, StateVector::kDim> amps;
  for (std::size_t k = 0; k < StateVector::kDim; ++k) {
    const auto& c = j[k];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw std::invalid_argument("state amplitude must be a [re, im] pair of numbers");
    }
    amps[k] = Complex{c[0].get<double>(), c[1].get<double>()};
  }
  return StateVector::from_amplitudes(amps);
}

nlohmann::json setting_to_json(const Setting& s) { return {s.x(), s.y(), s.z()}; }

Setting setting_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("xz_deg") && j["xz_deg"].is_number()) {
    return Setting::in_xz_plane(j["xz_deg"].get<double>() * std::numbers::pi / 180.0);
  }
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("setting must be [x, y, z] or {\"xz_deg\": theta}");
  }
  std::array<double, 3> n{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw std::invalid_argument("setting component must be a number");
    n[k] = j[k].get<double>();
  }
  return Setting::from_vector(n);
}

}  // namespace bellsim
