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
#include <complex>
#include <cstddef>
#include <span>

namespace bellsim {

using Complex = std::complex<double>;

/// Normalization tolerance accepted when constructing states and settings.
inline constexpr double kUnitTolerance = 1e-12;

/// A normalized vector in the two-qubit space C^2 (x) C^2.
///
/// Amplitude k corresponds to the product basis vector |i_A i_B> with
/// k = 2 * i_A + i_B.
class StateVector {
 public:
  static constexpr std::size_t kDim = 4;

  /// |00>.
  StateVector();

  /// Validates finiteness and that the norm is 1 within `tol`, then rescales
  /// to remove the residual. Throws std::invalid_argument otherwise.
  static StateVector from_amplitudes(const std::array<Complex, kDim>& amps,
                                     double tol = kUnitTolerance);

  /// Normalizes an arbitrary nonzero finite vector.
  static StateVector normalized(const std::array<Complex, kDim>& amps);

  /// Computational basis vector |index>.
  static StateVector basis(std::size_t index);

  const Complex& operator[](std::size_t k) const { return amps_[k]; }
  std::span<const Complex, kDim> amplitudes() const { return amps_; }

  /// Same ray with the first nonzero amplitude made real and positive.
  StateVector phase_fixed() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  explicit StateVector(const std::array<Complex, kDim>& amps) : amps_(amps) {}
  std::array<Complex, kDim> amps_;
};

/// The singlet (|01> - |10>)/sqrt(2).
StateVector singlet();

/// |u> (x) |v> for single-qubit amplitudes.
StateVector tensor(const std::array<Complex, 2>& u, const std::array<Complex, 2>& v);

/// <u|v>.
Complex inner(const StateVector& u, const StateVector& v);

/// |<u|v>|^2.
double overlap(const StateVector& u, const StateVector& v);

/// True when u and v differ only by a global phase.
bool ray_equal(const StateVector& u, const StateVector& v, double tol = 1e-12);

/// Unit measurement direction in R^3.
class Setting {
 public:
  /// (0, 0, 1).
  Setting() = default;

  /// Throws std::invalid_argument unless finite and |n| = 1 within `tol`.
  static Setting from_vector(const std::array<double, 3>& n, double tol = kUnitTolerance);

  /// (sin theta, 0, cos theta).
  static Setting in_xz_plane(double theta_rad);

  double x() const { return n_[0]; }
  double y() const { return n_[1]; }
  double z() const { return n_[2]; }
  const std::array<double, 3>& vector() const { return n_; }

  friend bool operator==(const Setting&, const Setting&) = default;

 private:
  explicit Setting(const std::array<double, 3>& n) : n_(n) {}
  std::array<double, 3> n_{0.0, 0.0, 1.0};
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// Single-qubit observable n . sigma.
struct Observable {
  Matrix2 m;
};

Observable observable_from_setting(const Setting& n);

/// Joint outcome of the two local +-1 observables.
struct OutcomePair {
  int x = 1;
  int y = 1;
  friend bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

/// Lexicographic slot of an outcome pair: (+,+)=0, (+,-)=1, (-,+)=2, (-,-)=3.
constexpr std::size_t outcome_slot(OutcomePair o) {
  return (o.x == 1 ? 0U : 2U) + (o.y == 1 ? 0U : 1U);
}

constexpr OutcomePair outcome_from_slot(std::size_t slot) {
  return {slot < 2 ? 1 : -1, slot % 2 == 0 ? 1 : -1};
}

/// The factorized common eigenbasis of (a . sigma) (x) 1 and 1 (x) (b . sigma),
/// ordered by descending overlap with the reference state.
struct JointEigenbasis {
  std::array<StateVector, 4> vectors;
  std::array<OutcomePair, 4> outcomes;
  StateVector reference;
};

/// Overlaps closer than this are treated as ties and ordered by outcome labels.
inline constexpr double kTieTolerance = 1e-12;

JointEigenbasis joint_eigenbasis(const Setting& a, const Setting& b,
                                 const StateVector& ref = StateVector{});

/// Phase-fixed eigenvector of n . sigma for eigenvalue `sign` (+1 or -1).
std::array<Complex, 2> qubit_eigenvector(const Setting& n, int sign);

}  // namespace bellsim
