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

#include "bellsim/epistemic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace bellsim {

double z_from_overlap(double c2) {
  c2 = std::clamp(c2, 0.0, 1.0);
  if (c2 <= EpistemicParams::kCapThreshold) return 0.0;
  // Within the plane spanned by ref and phi, the best admissible phi' sits on
  // the constraint boundary, 60 degrees from ref and rotated away from phi.
  const double d = std::sqrt(c2) - std::sqrt(3.0) * std::sqrt(1.0 - c2);
  return std::max(0.0, d * d / 4.0);
}

double z(const StateVector& phi, const StateVector& ref) { return z_from_overlap(overlap(phi, ref)); }

bool in_cap(const StateVector& phi, const StateVector& ref) {
  return overlap(phi, ref) > EpistemicParams::kCapThreshold;
}

bool in_E0(const OnticState& lambda, const StateVector& ref) {
  if (!in_cap(lambda.phi, ref)) return false;
  return lambda.tau >= 0.0 && lambda.tau < z(lambda.phi, ref);
}

StateVector sample_cap_state(const StateVector& ref, Rng& rng) {
  // For Haar states in C^4, c^2 = |<ref|phi>|^2 has density 3 (1 - c^2)^2, so
  // conditioned on c^2 > 3/4, (1 - c^2) = u^(1/3) / 4. The component
  // orthogonal to ref is Haar on the complement, with an independent phase.
  for (;;) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double c2 = 1.0 - std::cbrt(u) / 4.0;
    const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);

    // chi <- g - <ref|g> ref for a complex Gaussian g.
    std::array<Complex, 4> chi;
    for (auto& c : chi) c = Complex{rng.normal(), rng.normal()};
    Complex along{};
    for (std::size_t k = 0; k < 4; ++k) along += std::conj(ref[k]) * chi[k];
    double chi_norm2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      chi[k] -= along * ref[k];
      chi_norm2 += std::norm(chi[k]);
    }
    if (chi_norm2 < 1e-20) continue;
    const double inv = 1.0 / std::sqrt(chi_norm2);
    const double c = std::sqrt(c2);
    const double s = std::sqrt(1.0 - c2);
    const Complex phase = std::polar(1.0, alpha);
    std::array<Complex, 4> amps;
    for (std::size_t k = 0; k < 4; ++k) amps[k] = c * phase * ref[k] + s * inv * chi[k];
    StateVector phi = StateVector::normalized(amps);
    if (in_cap(phi, ref)) return phi;
  }
}

OnticState sample_E0_uniform(const StateVector& ref, Rng& rng, std::uint64_t* candidates_used) {
  for (std::uint64_t it = 1; it <= EpistemicParams::kMaxIterations; ++it) {
    StateVector phi = sample_cap_state(ref, rng);
    const double zp = z(phi, ref);
    if (rng.uniform() * EpistemicParams::kMaxZ < zp) {
      if (candidates_used != nullptr) *candidates_used = it;
      return {phi, rng.uniform() * zp};
    }
  }
  throw std::runtime_error("E0 rejection sampler exceeded its iteration budget");
}

OnticState sample_epistemic(const StateVector& psi, const StateVector& ref, Rng& rng) {
  const double zp = z(psi, ref);
  if (zp <= 0.0) return sample_ontic(psi, rng);
  if (rng.uniform() < zp) return sample_E0_uniform(ref, rng);
  return {psi, rng.uniform(zp, 1.0)};
}

namespace {

StatisticalBornCheck finish_born_check(const std::array<std::uint64_t, 4>& counts,
                                       const JointEigenbasis& basis, const StateVector& psi,
                                       std::uint64_t n) {
  StatisticalBornCheck out;
  out.samples = n;
  for (std::size_t j = 0; j < 4; ++j) {
    const double p = overlap(basis.vectors[j], psi);
    const double f = n == 0 ? 0.0 : static_cast<double>(counts[j]) / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const double dev = std::abs(f - p);
    out.frequency[j] = f;
    out.born[j] = p;
    out.tolerance[j] = kBornSigma * sigma;
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > out.tolerance[j]) out.pass = false;
    const double score = sigma > 0.0 ? dev / sigma : (dev > 0.0 ? INFINITY : 0.0);
    out.max_sigma = std::max(out.max_sigma, score);
  }
  return out;
}

}  // namespace

StatisticalBornCheck epistemic_born_check(const StateVector& psi, const Setting& a,
                                          const Setting& b, const StateVector& ref,
                                          std::uint64_t n, Rng& rng) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  std::array<std::uint64_t, 4> counts{};
  for (std::uint64_t i = 0; i < n; ++i) {
    ++counts[assigned_index(sample_epistemic(psi, ref, rng), basis)];
  }
  return finish_born_check(counts, basis, psi, n);
}

StatisticalBornCheck epistemic_born_check(const StateVector& psi, const Setting& a,
                                          const Setting& b, const StateVector& ref,
                                          std::uint64_t n, std::uint64_t seed,
                                          unsigned workers) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  std::vector<std::array<std::uint64_t, 4>> per_chunk(chunk_count(n));
  for_each_chunk(n, seed, workers,
                 [&](Rng& rng, std::uint64_t, std::uint64_t count, std::uint64_t c) {
                   auto& local = per_chunk[c];
                   for (std::uint64_t i = 0; i < count; ++i) {
                     ++local[assigned_index(sample_epistemic(psi, ref, rng), basis)];
                   }
                 });
  std::array<std::uint64_t, 4> counts{};
  for (const auto& local : per_chunk) {
    for (std::size_t j = 0; j < 4; ++j) counts[j] += local[j];
  }
  return finish_born_check(counts, basis, psi, n);
}

OverlapCertificate overlap_certificate(const StateVector& psi1, const StateVector& psi2,
                                       const StateVector& ref) {
  if (ray_equal(psi1, psi2)) {
    throw std::invalid_argument("overlap certificate needs two distinct rays");
  }
  OverlapCertificate cert{psi1, psi2, z(psi1, ref), z(psi2, ref), 0.0, {}};
  if (cert.z1 > 0.0 && cert.z2 > 0.0) {
    cert.lower_bound = std::min(cert.z1, cert.z2);
    cert.witness = fmt::format(
        "both preparations place mass z1={:.17g} and z2={:.17g} on the uniform E0 component; "
        "shared mass >= {:.17g}",
        cert.z1, cert.z2, cert.lower_bound);
  } else {
    cert.witness = "at least one preparation lies outside the cap; no shared E0 mass";
  }
  return cert;
}

void write_epistemic_samples_csv(std::ostream& out, const StateVector& psi, const Setting& a,
                                 const Setting& b, const StateVector& ref, std::size_t count,
                                 std::uint64_t seed) {
  const JointEigenbasis basis = joint_eigenbasis(a, b, ref);
  Rng rng(seed);
  fmt::print(out, "# seed={}\nin_E0,c2,tau,j,X,Y\n", seed);
  for (std::size_t i = 0; i < count; ++i) {
    const OnticState lambda = sample_epistemic(psi, ref, rng);
    const std::size_t j = assigned_index(lambda, basis);
    fmt::print(out, "{},{:.17g},{:.17g},{},{},{}\n", in_E0(lambda, ref) ? 1 : 0,
               overlap(lambda.phi, ref), lambda.tau, j, basis.outcomes[j].x,
               basis.outcomes[j].y);
  }
}

void write_z_profile_csv(std::ostream& out, std::size_t points) {
  fmt::print(out, "c2,z\n");
  for (std::size_t i = 0; i < points; ++i) {
    const double c2 = points == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    fmt::print(out, "{:.17g},{:.17g}\n", c2, z_from_overlap(c2));
  }
}

}  // namespace bellsim
