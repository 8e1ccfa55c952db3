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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "bellsim/audit/conditions.hpp"
#include "bellsim/audit/experiment.hpp"
#include "bellsim/audit/io.hpp"
#include "bellsim/bell_ontic.hpp"
#include "bellsim/cli/commands.hpp"
#include "bellsim/epistemic.hpp"
#include "bellsim/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace bellsim;
namespace at = bellsim::audit;

constexpr double kBornIdentityTol = 1e-12;
constexpr double kSigma = 4.0;
constexpr double kWitnessSigma = 5.0;
constexpr double kZTol = 1e-8;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> body;
};

Outcome born_identity() {
  std::mt19937_64 eng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const StateVector psi = testing::haar_state(eng);
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const ExactBornCheck e = exact_born_check(psi, a, b);
    const JointEigenbasis jb = joint_eigenbasis(a, b);
    const auto oracle = testing::born_oracle(psi, a, b);
    for (int j = 0; j < 4; ++j) {
      worst = std::max(worst, std::abs(e.interval_lengths[j] - oracle[outcome_slot(jb.outcomes[j])]));
    }
  }
  return {worst <= kBornIdentityTol, fmt::format("1000 cases, max |len - born| = {:.3g}", worst)};
}

Outcome epistemic_born() {
  std::mt19937_64 eng(1002);
  const std::uint64_t n = 100000;
  int failures = 0;
  double worst_sigma = 0.0;
  for (int c = 0; c < 50; ++c) {
    const StateVector psi = testing::haar_state_above(eng, StateVector{}, EpistemicParams::kCapThreshold);
    const Setting a = testing::random_setting(eng);
    const Setting b = testing::random_setting(eng);
    const auto r = epistemic_born_check(psi, a, b, StateVector{}, n, stream_seed(1002, c), workers());
    const JointEigenbasis jb = joint_eigenbasis(a, b);
    const auto oracle = testing::born_oracle(psi, a, b);
    for (int j = 0; j < 4; ++j) {
      const double p = oracle[outcome_slot(jb.outcomes[j])];
      const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      const double dev = std::abs(r.frequency[j] - p);
      if (dev > kSigma * sd) ++failures;
      if (sd > 0.0) worst_sigma = std::max(worst_sigma, dev / sd);
    }
  }
  return {failures == 0,
          fmt::format("50 cap states x 1e5 samples, {} cells outside 4 sigma, worst {:.2f} sigma",
                      failures, worst_sigma)};
}

Outcome z_closed_form() {
  std::mt19937_64 eng(1003);
  const StateVector ref;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const StateVector phi = i % 2 == 0 ? testing::haar_state_above(eng, ref, 0.7) : testing::haar_state(eng);
    worst = std::max(worst, std::abs(z(phi, ref) - testing::z_oracle(phi, ref, eng)));
  }
  const bool at_ref = z(ref, ref) == 0.25;
  bool zero_below = z_from_overlap(EpistemicParams::kCapThreshold) == 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double c2 = 0.75 * i / 999.0;
    const double c = std::sqrt(c2);
    const double s = std::sqrt(1.0 - c2);
    const StateVector phi = StateVector::normalized({Complex{c}, Complex{0.0, s}, Complex{}, Complex{}});
    if (z_from_overlap(c2) != 0.0 || z(phi, ref) > 1e-30) zero_below = false;
  }
  return {worst <= kZTol && at_ref && zero_below,
          fmt::format("1000 states, max |closed - numerical| = {:.3g}; z(ref) = 1/4: {}; z = 0 for c^2 <= 3/4: {}",
                      worst, at_ref, zero_below)};
}

Outcome e0_invariance() {
  std::mt19937_64 eng(1004);
  Rng rng(1004);
  std::uint64_t total = 0, first = 0;
  for (int s = 0; s < 100; ++s) {
    const JointEigenbasis jb = joint_eigenbasis(testing::random_setting(eng), testing::random_setting(eng));
    for (int i = 0; i < 10000; ++i) {
      ++total;
      if (assigned_index(sample_E0_uniform(StateVector{}, rng), jb) == 0) ++first;
    }
  }
  return {first == total, fmt::format("{} of {} E0 samples assigned index 0", first, total)};
}

Outcome overlap_certificate_check() {
  const StateVector p1;
  const StateVector p2 = StateVector::from_amplitudes(
      {Complex{std::cos(0.2)}, Complex{std::sin(0.2)}, Complex{}, Complex{}});
  const OverlapCertificate cert = overlap_certificate(p1, p2);

  Rng rng(1005);
  const int n = 20000;
  int shared_ontic = 0, e0_1 = 0, e0_2 = 0;
  for (int i = 0; i < n; ++i) {
    if (ray_equal(sample_ontic(p1, rng).phi, sample_ontic(p2, rng).phi)) ++shared_ontic;
    e0_1 += in_E0(sample_epistemic(p1, StateVector{}, rng)) ? 1 : 0;
    e0_2 += in_E0(sample_epistemic(p2, StateVector{}, rng)) ? 1 : 0;
  }
  const bool ontic_disjoint = shared_ontic == 0 && !ray_equal(p1, p2);
  const double f1 = e0_1 / double(n), f2 = e0_2 / double(n);
  const bool masses_ok = std::abs(f1 - cert.z1) <= kSigma * std::sqrt(cert.z1 * (1 - cert.z1) / n) &&
                         std::abs(f2 - cert.z2) <= kSigma * std::sqrt(cert.z2 * (1 - cert.z2) / n);
  return {cert.lower_bound >= 0.01 && ontic_disjoint && masses_ok,
          fmt::format("lower bound {:.6f} (z1 {:.4f}, z2 {:.4f}; sampled E0 mass {:.4f}, {:.4f}); "
                      "ontic supports disjoint: {}",
                      cert.lower_bound, cert.z1, cert.z2, f1, f2, ontic_disjoint)};
}

Outcome chsh_check() {
  const ChshSettings s = ChshSettings::optimal_singlet();
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  bool pass = std::abs(std::abs(chsh(singlet(), s)) - tsirelson) < 1e-12;
  std::string detail;
  for (ModelKind kind : {ModelKind::ontic, ModelKind::epistemic}) {
    const ChshEstimate e = estimate_chsh(OnticSampler(kind, singlet()), s, 1000000, 1006, workers());
    const double dev = std::abs(std::abs(e.value) - tsirelson);
    pass = pass && dev <= kSigma * e.sigma;
    detail += fmt::format("{}: S = {:.5f} +- {:.5f} ({:.2f} sigma from 2 sqrt 2); ", to_string(kind),
                          e.value, e.sigma, dev / e.sigma);
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome condition_suite() {
  bool pass = true;
  std::string detail;
  const auto pol = at::TolerancePolicy::statistical(kSigma, kWitnessSigma);
  for (ModelKind kind : {ModelKind::ontic, ModelKind::epistemic}) {
    auto cfg = at::default_singlet_audit(1000000, 1007);
    cfg.model = kind;
    cfg.workers = workers();
    const auto t = at::run_experiment(cfg);
    const auto fw = at::check_FW(t, pol);
    const auto ns2 = at::check_NS2(t, pol);
    const auto pi = at::check_PI(t, pol);
    const auto fr = at::check_FR(t, pol);
    pass = pass && fw.pass && !fw.inconclusive && ns2.pass && !ns2.inconclusive &&
           pi.significant_violation && fr.significant_violation;
    detail += fmt::format("{}: FW {:.2f}s, NS2 {:.2f}s, PI witness {:.1f}s, FR witness {:.1f}s; ",
                          to_string(kind), fw.sigma, ns2.sigma, pi.sigma, fr.sigma);
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome implication_checks() {
  std::mt19937_64 eng(1008);
  int exact_cases = 0, exact_bad = 0, exact_premises = 0;
  const auto exact = at::TolerancePolicy::exact(0.0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = at::testing::random_local_fixture(eng, rep % 3 == 0);
    const auto imp = at::verify_implication_fr(t, exact);
    const auto fc = at::derive_ns_from_free_choice(t, exact);
    ++exact_cases;
    if (imp.premises_hold) ++exact_premises;
    if (!imp.implication_holds || !fc.premises_hold || !fc.derivation_holds) {
      ++exact_bad;
    }
  }
  for (const char* name : {"local_rational.csv", "superdeterministic.csv"}) {
    std::ifstream in(std::filesystem::path(BELLSIM_FIXTURE_DIR) / name);
    const auto t = at::read_rational_table_csv(in);
    ++exact_cases;
    if (!at::verify_implication_fr(t, exact).implication_holds ||
        !at::derive_ns_from_free_choice(t, exact).derivation_holds) {
      ++exact_bad;
    }
  }

  int sampled = 0, premises = 0, sampled_bad = 0;
  const auto pol = at::TolerancePolicy::statistical(kSigma, kWitnessSigma);
  for (int variant = 0; variant < 4; ++variant) {
    auto cfg = at::default_singlet_audit(200000, 2000 + variant);
    cfg.workers = workers();
    if (variant == 0) cfg.channel.kind = at::DisclosureChannel::Kind::constant;
    if (variant == 1) cfg.channel.menu = {0, 1};
    if (variant == 2) {
      cfg.model = ModelKind::epistemic;
      cfg.psi = StateVector::from_amplitudes({Complex{std::cos(0.3)}, Complex{}, Complex{std::sin(0.3)}, Complex{}});
      cfg.channel.kind = at::DisclosureChannel::Kind::e0;
    }
    const auto t = at::run_experiment(cfg);
    const auto imp = at::verify_implication_fr(t, pol);
    const auto fc = at::derive_ns_from_free_choice(t, pol);
    ++sampled;
    if (imp.premises_hold) ++premises;
    if (!imp.implication_holds || !fc.derivation_holds) ++sampled_bad;
  }
  return {exact_bad == 0 && sampled_bad == 0 && premises > 0 && exact_premises > 0,
          fmt::format("exact fixtures: {} of {} hold at zero tolerance ({} with premises passing); sampled tables: {} of {} hold "
                      "within derived tolerance ({} with premises passing)",
                      exact_cases - exact_bad, exact_cases, exact_premises, sampled - sampled_bad, sampled, premises)};
}

std::string cli_stdout(std::vector<std::string> args) {
  args.insert(args.begin(), "bellsim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return fmt::format("exit={}\n{}", code, out.str());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome reproducibility() {
  const std::filesystem::path fx = BELLSIM_FIXTURE_DIR;
  const std::pair<const char*, const char*> runs[] = {
      {"born-check", "born_singlet.json"},     {"born-check", "born_epistemic.json"},
      {"born-check", "born_forced_failure.json"}, {"chsh", "chsh_singlet_epistemic.json"},
      {"overlap", "overlap_pair.json"},        {"audit", "audit_singlet.json"},
      {"audit", "audit_local_rational.json"},  {"zmap", ""}};
  const auto root = std::filesystem::temp_directory_path() / "bellsim_acceptance_repro";
  int identical = 0, total = 0;
  for (const auto& [cmd, manifest] : runs) {
    std::vector<std::string> outputs;
    std::vector<std::string> files;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / std::to_string(rep);
      std::filesystem::remove_all(dir);
      std::vector<std::string> args{cmd, "--out", dir.string(), "--workers", rep == 0 ? "1" : "8"};
      if (*manifest != '\0') {
        args.push_back("--manifest");
        args.push_back((fx / manifest).string());
      }
      outputs.push_back(cli_stdout(args));
      std::string all;
      for (const auto& e : std::filesystem::directory_iterator(dir)) {
        all += e.path().filename().string() + "\n" + slurp(e.path());
      }
      files.push_back(all);
    }
    ++total;
    if (outputs[0] == outputs[1] && files[0] == files[1] && !files[0].empty()) ++identical;
  }
  std::filesystem::remove_all(root);
  return {identical == total,
          fmt::format("{} of {} commands byte-identical across reruns (reports and artifacts)",
                      identical, total)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact Born identity", 10, born_identity},
      {2, "epistemic Born consistency", 120, epistemic_born},
      {3, "z closed form vs numerical minimizer", 30, z_closed_form},
      {4, "E0 outcome invariance", 60, e0_invariance},
      {5, "psi-epistemic overlap certificate", 1, overlap_certificate_check},
      {6, "CHSH at optimal settings", 60, chsh_check},
      {7, "condition suite: FW holds while FR fails", 300, condition_suite},
      {8, "implication checks", 10, implication_checks},
      {9, "reproducibility", 600, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
