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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bellsim {
namespace {

// Amplitudes below this magnitude are skipped when fixing the global phase.
constexpr double kPhaseCutoff = 1e-12;

double norm_squared(const std::array<Complex, StateVector::kDim>& amps) {
  double s = 0.0;
  for (const auto& c : amps) s += std::norm(c);
  return s;
}

template <std::size_t N>
std::array<Complex, N> fix_phase(std::array<Complex, N> amps) {
  for (const auto& c : amps) {
    if (std::abs(c) > kPhaseCutoff) {
      const Complex rot = std::conj(c) / std::abs(c);
      for (auto& a : amps) a *= rot;
      break;
    }
  }
  return amps;
}

}  // namespace

StateVector::StateVector() : amps_{Complex{1.0, 0.0}, {}, {}, {}} {}

StateVector StateVector::from_amplitudes(const std::array<Complex, kDim>& amps, double tol) {
  for (const auto& c : amps) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("state amplitude is not finite");
    }
  }
  const double n2 = norm_squared(amps);
  if (std::abs(n2 - 1.0) > tol) {
    throw std::invalid_argument("state is not normalized: |psi|^2 = " + std::to_string(n2));
  }
  return normalized(amps);
}

StateVector StateVector::normalized(const std::array<Complex, kDim>& amps) {
  const double n2 = norm_squared(amps);
  if (!std::isfinite(n2) || n2 <= 0.0) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(n2);
  std::array<Complex, kDim> out = amps;
  for (auto& c : out) c *= inv;
  return StateVector(out);
}

StateVector StateVector::basis(std::size_t index) {
  if (index >= kDim) throw std::invalid_argument("basis index out of range");
  std::array<Complex, kDim> amps{};
  amps[index] = 1.0;
  return StateVector(amps);
}

StateVector StateVector::phase_fixed() const { return StateVector(fix_phase(amps_)); }

StateVector singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  return StateVector::from_amplitudes({Complex{0.0}, Complex{h}, Complex{-h}, Complex{0.0}});
}

StateVector tensor(const std::array<Complex, 2>& u, const std::array<Complex, 2>& v) {
  return StateVector::normalized({u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]});
}

Complex inner(const StateVector& u, const StateVector& v) {
  Complex s{};
  for (std::size_t k = 0; k < StateVector::kDim; ++k) s += std::conj(u[k]) * v[k];
  return s;
}

double overlap(const StateVector& u, const StateVector& v) {
  return std::clamp(std::norm(inner(u, v)), 0.0, 1.0);
}

bool ray_equal(const StateVector& u, const StateVector& v, double tol) {
  return overlap(u, v) >= 1.0 - tol;
}

Setting Setting::from_vector(const std::array<double, 3>& n, double tol) {
  for (double c : n) {
    if (!std::isfinite(c)) throw std::invalid_argument("setting component is not finite");
  }
  const double n2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
  if (std::abs(n2 - 1.0) > tol) {
    throw std::invalid_argument("setting is not a unit vector: |n|^2 = " + std::to_string(n2));
  }
  const double inv = 1.0 / std::sqrt(n2);
  return Setting({n[0] * inv, n[1] * inv, n[2] * inv});
}

Setting Setting::in_xz_plane(double theta_rad) {
  return Setting({std::sin(theta_rad), 0.0, std::cos(theta_rad)});
}

Observable observable_from_setting(const Setting& n) {
  const Complex i{0.0, 1.0};
  return Observable{Matrix2{{{Complex{n.z()}, n.x() - i * n.y()},
                             {n.x() + i * n.y(), Complex{-n.z()}}}}};
}

std::array<Complex, 2> qubit_eigenvector(const Setting& n, int sign) {
  const double x = n.x(), y = n.y(), z = n.z();
  std::array<Complex, 2> v;
  // Pick the algebraically equivalent form with the larger norm.
  if (sign > 0) {
    v = z >= 0.0 ? std::array<Complex, 2>{Complex{1.0 + z}, Complex{x, y}}
                 : std::array<Complex, 2>{Complex{x, -y}, Complex{1.0 - z}};
  } else {
    v = z >= 0.0 ? std::array<Complex, 2>{Complex{x, -y}, Complex{-(1.0 + z)}}
                 : std::array<Complex, 2>{Complex{1.0 - z}, Complex{-x, -y}};
  }
  const double inv = 1.0 / std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  v[0] *= inv;
  v[1] *= inv;
  return fix_phase(v);
}

JointEigenbasis joint_eigenbasis(const Setting& a, const Setting& b, const StateVector& ref) {
  struct Entry {
    StateVector vec;
    OutcomePair out;
    double ov;
  };
  std::array<Entry, 4> entries;
  for (std::size_t slot = 0; slot < 4; ++slot) {
    const OutcomePair o = outcome_from_slot(slot);
    StateVector v = tensor(qubit_eigenvector(a, o.x), qubit_eigenvector(b, o.y)).phase_fixed();
    entries[slot] = Entry{v, o, overlap(v, ref)};
  }
  // Stable insertion sort, descending overlap; near-equal overlaps keep the
  // lexicographic label order they started in.
  for (std::size_t i = 1; i < entries.size(); ++i) {
    for (std::size_t k = i; k > 0 && entries[k].ov > entries[k - 1].ov + kTieTolerance; --k) {
      std::swap(entries[k], entries[k - 1]);
    }
  }
  JointEigenbasis basis{{}, {}, ref};
  for (std::size_t j = 0; j < 4; ++j) {
    basis.vectors[j] = entries[j].vec;
    basis.outcomes[j] = entries[j].out;
  }
  return basis;
}

}  // namespace bellsim
