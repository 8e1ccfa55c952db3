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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "bellsim/quantum_oracle.hpp"

namespace bellsim::audit {
namespace {

constexpr int kMaxBits = 16;

std::vector<double> uniform_if_empty(const std::vector<double>& prior, std::size_t n) {
  if (!prior.empty()) return prior;
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void validate_prior(const std::vector<double>& prior, std::size_t n, const char* name) {
  if (prior.empty()) return;
  if (prior.size() != n) {
    throw std::invalid_argument(std::string(name) + " does not match its menu size");
  }
  double sum = 0.0;
  for (double p : prior) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument(std::string(name) + " has a bad entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument(std::string(name) + " is not normalized");
}

std::vector<std::int64_t> iota_values(std::size_t n) {
  std::vector<std::int64_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::int64_t tau_bin(double tau, int bits) {
  const auto cells = static_cast<std::int64_t>(1) << bits;
  const auto b = static_cast<std::int64_t>(std::floor(tau * static_cast<double>(cells)));
  return std::clamp<std::int64_t>(b, 0, cells - 1);
}

int DisclosureChannel::max_bits() const {
  return menu.empty() ? 0 : *std::max_element(menu.begin(), menu.end());
}

std::size_t DisclosureChannel::z_cells() const {
  switch (kind) {
    case Kind::constant: return 1;
    case Kind::tau: return std::size_t{1} << max_bits();
    case Kind::e0: return 2;
    case Kind::composite: return std::size_t{2} << max_bits();
  }
  return 1;
}

std::int64_t DisclosureChannel::disclose(const OnticState& lambda, std::size_t c,
                                         const StateVector& ref) const {
  const int bits = menu[c];
  switch (kind) {
    case Kind::constant: return 0;
    case Kind::tau: return tau_bin(lambda.tau, bits);
    case Kind::e0: return bits > 0 && in_E0(lambda, ref) ? 1 : 0;
    case Kind::composite: return 2 * tau_bin(lambda.tau, bits) + (in_E0(lambda, ref) ? 1 : 0);
  }
  return 0;
}

std::string_view to_string(DisclosureChannel::Kind kind) {
  switch (kind) {
    case DisclosureChannel::Kind::constant: return "constant";
    case DisclosureChannel::Kind::tau: return "tau";
    case DisclosureChannel::Kind::e0: return "e0";
    case DisclosureChannel::Kind::composite: return "composite";
  }
  return "?";
}

std::optional<DisclosureChannel::Kind> parse_channel_kind(std::string_view name) {
  using K = DisclosureChannel::Kind;
  for (K k : {K::constant, K::tau, K::e0, K::composite}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t LambdaBinning::cells() const {
  return (std::size_t{1} << bits) * (with_e0 ? 2 : 1);
}

std::int64_t LambdaBinning::bin(const OnticState& lambda, const StateVector& ref) const {
  const std::int64_t t = tau_bin(lambda.tau, bits);
  return with_e0 ? 2 * t + (in_E0(lambda, ref) ? 1 : 0) : t;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.menu_a.empty() || cfg.menu_b.empty()) throw std::invalid_argument("setting menus must be nonempty");
  if (cfg.channel.menu.empty()) throw std::invalid_argument("disclosure menu must be nonempty");
  for (int bits : cfg.channel.menu) {
    if (bits < 0 || bits > kMaxBits) throw std::invalid_argument("disclosure bits out of range");
  }
  if (cfg.lambda.enabled && (cfg.lambda.bits < 0 || cfg.lambda.bits > kMaxBits)) {
    throw std::invalid_argument("lambda bits out of range");
  }
  validate_prior(cfg.prior_a, cfg.menu_a.size(), "priorA");
  validate_prior(cfg.prior_b, cfg.menu_b.size(), "priorB");
  validate_prior(cfg.prior_c, cfg.channel.menu.size(), "priorC");
  if (cfg.samples == 0) throw std::invalid_argument("samples must be at least 1");
}

ProbabilityTable<double> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto prior_a = uniform_if_empty(cfg.prior_a, cfg.menu_a.size());
  const auto prior_b = uniform_if_empty(cfg.prior_b, cfg.menu_b.size());
  const auto prior_c = uniform_if_empty(cfg.prior_c, cfg.channel.menu.size());
  const std::size_t na = cfg.menu_a.size(), nb = cfg.menu_b.size();

  std::vector<VariableSpec> vars{{"A", iota_values(na)},
                                 {"B", iota_values(nb)},
                                 {"C", iota_values(cfg.channel.menu.size())},
                                 {"X", {-1, 1}},
                                 {"Y", {-1, 1}},
                                 {"Z", iota_values(cfg.channel.z_cells())}};
  if (cfg.lambda.enabled) vars.push_back({"L", iota_values(cfg.lambda.cells())});
  std::vector<std::size_t> sizes;
  for (const auto& v : vars) sizes.push_back(v.size());
  const Indexer index(sizes);

  std::vector<JointEigenbasis> bases;
  std::vector<std::array<double, 4>> psi_bounds;
  for (const auto& a : cfg.menu_a) {
    for (const auto& b : cfg.menu_b) {
      bases.push_back(joint_eigenbasis(a, b, cfg.reference));
      psi_bounds.push_back(cumulative_bounds(cfg.psi, bases.back()));
    }
  }

  const OnticSampler model(cfg.model, cfg.psi, cfg.reference);
  std::vector<std::uint64_t> counts(index.cells(), 0);
  std::mutex merge;
  for_each_chunk(cfg.samples, cfg.seed, cfg.workers,
                 [&](Rng& rng, std::uint64_t, std::uint64_t count, std::uint64_t) {
                   std::vector<std::uint64_t> local(index.cells(), 0);
                   std::array<std::size_t, 7> idx{};
                   for (std::uint64_t i = 0; i < count; ++i) {
                     const std::size_t a = rng.categorical(prior_a);
                     const std::size_t b = rng.categorical(prior_b);
                     const std::size_t c = rng.categorical(prior_c);
                     const OnticState lambda = model(rng);
                     const std::size_t ab = a * nb + b;
                     const std::size_t j =
                         lambda.phi == cfg.psi
                             ? assigned_index(lambda.tau, psi_bounds[ab])
                             : assigned_index(lambda.tau, cumulative_bounds(lambda.phi, bases[ab]));
                     const OutcomePair o = bases[ab].outcomes[j];
                     idx[0] = a;
                     idx[1] = b;
                     idx[2] = c;
                     idx[3] = o.x == 1 ? 1 : 0;
                     idx[4] = o.y == 1 ? 1 : 0;
                     idx[5] = static_cast<std::size_t>(cfg.channel.disclose(lambda, c, cfg.reference));
                     if (cfg.lambda.enabled) {
                       idx[6] = static_cast<std::size_t>(cfg.lambda.bin(lambda, cfg.reference));
                     }
                     ++local[index.flatten(std::span(idx.data(), sizes.size()))];
                   }
                   std::lock_guard lock(merge);
                   for (std::size_t k = 0; k < local.size(); ++k) counts[k] += local[k];
                 });
  return ProbabilityTable<double>::from_counts(std::move(vars), std::move(counts));
}

ProbabilityTable<double> oracle_table(const StateVector& psi, const std::vector<Setting>& menu_a,
                                      const std::vector<Setting>& menu_b,
                                      const std::vector<double>& prior_a_in,
                                      const std::vector<double>& prior_b_in,
                                      const StateVector& ref) {
  if (menu_a.empty() || menu_b.empty()) throw std::invalid_argument("setting menus must be nonempty");
  validate_prior(prior_a_in, menu_a.size(), "priorA");
  validate_prior(prior_b_in, menu_b.size(), "priorB");
  const auto prior_a = uniform_if_empty(prior_a_in, menu_a.size());
  const auto prior_b = uniform_if_empty(prior_b_in, menu_b.size());
  std::vector<VariableSpec> vars{{"A", iota_values(menu_a.size())},
                                 {"B", iota_values(menu_b.size())},
                                 {"C", {0}},
                                 {"X", {-1, 1}},
                                 {"Y", {-1, 1}},
                                 {"Z", {0}}};
  std::vector<double> p(menu_a.size() * menu_b.size() * 4, 0.0);
  for (std::size_t a = 0; a < menu_a.size(); ++a) {
    for (std::size_t b = 0; b < menu_b.size(); ++b) {
      const OutcomeDistribution d = born_distribution(psi, menu_a[a], menu_b[b], ref);
      for (int x : {-1, 1}) {
        for (int y : {-1, 1}) {
          const std::size_t flat = ((a * menu_b.size() + b) * 2 + (x == 1 ? 1 : 0)) * 2 + (y == 1 ? 1 : 0);
          p[flat] = prior_a[a] * prior_b[b] * d(x, y);
        }
      }
    }
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return ProbabilityTable<double>::from_probabilities(std::move(vars), std::move(p));
}

ExperimentConfig default_singlet_audit(std::uint64_t samples, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.model = ModelKind::ontic;
  cfg.psi = singlet();
  cfg.menu_a = {Setting::in_xz_plane(0.0), Setting::in_xz_plane(std::numbers::pi / 2)};
  cfg.menu_b = {Setting::in_xz_plane(0.0), Setting::in_xz_plane(std::numbers::pi / 2)};
  cfg.channel.kind = DisclosureChannel::Kind::tau;
  cfg.channel.menu = {6};
  cfg.lambda = LambdaBinning{true, 6, false};
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

}  // namespace bellsim::audit
