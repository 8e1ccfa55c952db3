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

#include "bellsim/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bellsim/audit/io.hpp"
#include "bellsim/serialize.hpp"

namespace bellsim::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string num(double v) { return fmt::format("{:.17g}", v); }

json array4(const std::array<double, 4>& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json report_header(std::string_view command, const ExperimentManifest& m, std::uint64_t seed) {
  json r;
  r["command"] = command;
  r["tool"] = fmt::format("bellsim {}", BELLSIM_VERSION);
  r["manifest_digest"] = manifest_digest(m.raw);
  r["seed"] = seed;
  return r;
}

std::uint64_t effective_seed(const ExperimentManifest& m, const RunOptions& opt) {
  return opt.seed.value_or(m.seed);
}

void finish(CommandResult& res, bool pass, const RunOptions& opt, Clock::time_point start) {
  res.report["pass"] = pass;
  res.exit_code = pass ? kExitPass : kExitCheckFailed;
  if (opt.timing) {
    res.report["timing"]["seconds"] =
        std::chrono::duration<double>(Clock::now() - start).count();
  }
}

// ---------------------------------------------------------------- audit

struct CheckOutcome {
  json verdict;
  bool met = false;
};

bool verdict_met(const audit::ConditionVerdict& v, const std::string& expected) {
  if (expected == "fail") return v.significant_violation;
  return v.pass && !v.inconclusive;
}

template <class S>
CheckOutcome run_check(const std::string& name, const audit::ProbabilityTable<S>& t,
                       const audit::TolerancePolicy& pol, const std::string& expected) {
  CheckOutcome out;
  if (name == "implication") {
    const auto r = audit::verify_implication_fr(t, pol);
    out.verdict = audit::to_json(r);
    out.met = expected == "fail" ? !r.implication_holds
                                 : r.implication_holds && (!r.converse_applicable || r.converse_holds);
  } else if (name == "free_choice") {
    const auto r = audit::derive_ns_from_free_choice(t, pol);
    out.verdict = audit::to_json(r);
    out.met = expected == "fail" ? !r.derivation_holds : r.derivation_holds;
  } else {
    const auto v = audit::check(*audit::parse_condition(name), t, pol);
    out.verdict = audit::to_json(v);
    out.met = verdict_met(v, expected);
  }
  out.verdict["expected"] = expected;
  out.verdict["met"] = out.met;
  return out;
}

template <class S>
bool audit_table(const ExperimentManifest& m, const audit::ProbabilityTable<S>& t,
                 CommandResult& res) {
  std::vector<std::string> checks = m.checks;
  if (checks.empty()) {
    checks = {"FW", "NS2", "FR"};
    if (audit::has_lambda(t)) checks.push_back("PI");
  }
  for (const auto& [name, _] : m.expect) {
    if (std::find(checks.begin(), checks.end(), name) == checks.end()) {
      throw ManifestError("expect", "expectation for " + name + " which is not in checks");
    }
  }
  if (m.tolerance.mode == audit::TolerancePolicy::Mode::statistical && !t.has_counts()) {
    throw ManifestError("tolerance", "statistical tolerance needs a table with counts");
  }
  bool all_met = true;
  std::string csv = "check,expected,met,pass,significant_violation,max_deviation,tolerance,sigma\n";
  for (const auto& name : checks) {
    const auto it = m.expect.find(name);
    const std::string expected = it == m.expect.end() ? "pass" : it->second;
    CheckOutcome o = run_check(name, t, m.tolerance, expected);
    all_met = all_met && o.met;
    const json& v = o.verdict;
    if (v.contains("max_deviation")) {
      csv += fmt::format("{},{},{},{},{},{},{},{}\n", name, expected, o.met, v["pass"].get<bool>(),
                         v["significant_violation"].get<bool>(),
                         num(v["max_deviation"].get<double>()), num(v["tolerance"].get<double>()),
                         num(v["sigma"].get<double>()));
    } else {
      csv += fmt::format("{},{},{},,,,,\n", name, expected, o.met);
    }
    res.report["checks"][name] = std::move(o.verdict);
  }
  res.summary_csv = std::move(csv);

  json vars = json::array();
  for (const auto& v : t.variables()) vars.push_back({{"name", v.name}, {"size", v.size()}});
  res.report["table"]["variables"] = vars;
  res.report["table"]["samples"] = t.total();
  res.report["tolerance"] = audit::to_json(m.tolerance);

  std::ostringstream table_csv;
  audit::write_table_csv(table_csv, t);
  res.artifacts["audit_table.csv"] = table_csv.str();
  return all_met;
}

bool looks_rational(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    if (line.find('/') != std::string::npos) return true;
  }
  return false;
}

// --------------------------------------------------------------- overlap

std::array<std::uint64_t, 2> e0_hits(const StateVector& psi, const StateVector& ref,
                                     std::uint64_t n, std::uint64_t seed, unsigned workers) {
  std::uint64_t hits = 0;
  std::mutex merge;
  for_each_chunk(n, seed, workers, [&](Rng& rng, std::uint64_t, std::uint64_t count, std::uint64_t) {
    std::uint64_t local = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (in_E0(sample_epistemic(psi, ref, rng), ref)) ++local;
    }
    std::lock_guard lock(merge);
    hits += local;
  });
  return {hits, n};
}

// -------------------------------------------------------------------- cli

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string diagnostic(std::string_view error, std::string_view field, std::string_view message) {
  json d;
  d["error"] = error;
  d["field"] = field;
  d["message"] = message;
  return canonical_json(d);
}

}  // namespace

CommandResult cmd_born_check(const ExperimentManifest& m, const RunOptions& opt) {
  const auto start = Clock::now();
  const std::uint64_t seed = effective_seed(m, opt);
  CommandResult res;
  res.report = report_header("born-check", m, seed);
  res.report["model"] = to_string(m.model);
  res.report["psi"] = state_to_json(m.psi);
  res.report["reference"] = state_to_json(m.reference);

  const bool ontic = m.model == ModelKind::ontic;
  bool pass = true;
  double worst = 0.0;
  json cases = json::array();
  std::string csv = "a,b,j,observed,reference,deviation,tolerance\n";
  std::size_t pair = 0;
  for (std::size_t ia = 0; ia < m.menu_a.size(); ++ia) {
    for (std::size_t ib = 0; ib < m.menu_b.size(); ++ib, ++pair) {
      const Setting& a = m.menu_a[ia];
      const Setting& b = m.menu_b[ib];
      std::array<double, 4> observed{}, born{}, tol{};
      json c;
      if (ontic) {
        const ExactBornCheck e = exact_born_check(m.psi, a, b, m.reference);
        observed = e.interval_lengths;
        born = e.born;
        tol.fill(kExactBornTolerance);
      } else {
        const StatisticalBornCheck e = epistemic_born_check(m.psi, a, b, m.reference, m.samples,
                                                            stream_seed(seed, pair), opt.workers);
        observed = e.frequency;
        born = e.born;
        c["samples"] = e.samples;
      }
      const std::array<double, 4> target = m.expected_born ? (*m.expected_born)[pair] : born;
      if (!ontic) {
        const double n = static_cast<double>(m.samples);
        for (int j = 0; j < 4; ++j) {
          tol[j] = kMonteCarloSigma * std::sqrt(std::max(target[j] * (1.0 - target[j]), 0.0) / n);
        }
      }
      bool case_pass = true;
      double case_dev = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double dev = std::abs(observed[j] - target[j]);
        case_dev = std::max(case_dev, dev);
        if (!(dev <= tol[j])) case_pass = false;
        csv += fmt::format("{},{},{},{},{},{},{}\n", ia, ib, j, num(observed[j]), num(target[j]),
                           num(dev), num(tol[j]));
      }
      c["a"] = setting_to_json(a);
      c["b"] = setting_to_json(b);
      c["observed"] = array4(observed);
      c["born"] = array4(born);
      c["reference_probabilities"] = array4(target);
      c["tolerance"] = array4(tol);
      c["max_deviation"] = case_dev;
      c["pass"] = case_pass;
      cases.push_back(std::move(c));
      pass = pass && case_pass;
      worst = std::max(worst, case_dev);
    }
  }
  res.report["cases"] = std::move(cases);
  res.report["max_deviation"] = worst;
  res.report["expected_override"] = m.expected_born.has_value();
  if (!ontic) res.report["samples_per_case"] = m.samples;
  res.summary_csv = std::move(csv);

  if (m.dump_samples > 0) {
    std::ostringstream s;
    if (ontic) {
      write_ontic_samples_csv(s, m.psi, m.menu_a[0], m.menu_b[0], m.reference, m.dump_samples, seed);
    } else {
      write_epistemic_samples_csv(s, m.psi, m.menu_a[0], m.menu_b[0], m.reference, m.dump_samples,
                                  seed);
    }
    res.artifacts["born_check_samples.csv"] = s.str();
  }
  finish(res, pass, opt, start);
  return res;
}

CommandResult cmd_chsh(const ExperimentManifest& m, const RunOptions& opt) {
  const auto start = Clock::now();
  const std::uint64_t seed = effective_seed(m, opt);
  CommandResult res;
  res.report = report_header("chsh", m, seed);
  res.report["model"] = to_string(m.model);
  res.report["psi"] = state_to_json(m.psi);
  res.report["reference"] = state_to_json(m.reference);
  res.report["settings"] = {{"a", setting_to_json(m.chsh.a)},
                            {"a_prime", setting_to_json(m.chsh.a_prime)},
                            {"b", setting_to_json(m.chsh.b)},
                            {"b_prime", setting_to_json(m.chsh.b_prime)}};

  const OnticSampler model(m.model, m.psi, m.reference);
  const ChshEstimate est = estimate_chsh(model, m.chsh, m.samples, seed, opt.workers);
  const double oracle = chsh(m.psi, m.chsh, m.reference);
  const std::array<double, 4> oracle_terms{
      correlation(m.psi, m.chsh.a, m.chsh.b, m.reference),
      correlation(m.psi, m.chsh.a, m.chsh.b_prime, m.reference),
      correlation(m.psi, m.chsh.a_prime, m.chsh.b, m.reference),
      correlation(m.psi, m.chsh.a_prime, m.chsh.b_prime, m.reference)};
  const double dev = std::abs(est.value - oracle);
  const bool pass = dev <= kMonteCarloSigma * est.sigma;

  res.report["monte_carlo"] = {{"value", est.value},
                               {"sigma", est.sigma},
                               {"correlations", array4(est.correlations)},
                               {"samples_per_term", est.samples_per_term}};
  res.report["oracle"] = {{"value", oracle}, {"correlations", array4(oracle_terms)}};
  res.report["deviation"] = dev;
  res.report["deviation_sigma"] = est.sigma > 0.0 ? dev / est.sigma : 0.0;
  res.report["tolerance"] = kMonteCarloSigma * est.sigma;
  res.report["classical_bound"] = 2.0;
  res.report["exceeds_classical_bound"] = std::abs(est.value) > 2.0 + kMonteCarloSigma * est.sigma;

  static constexpr const char* kTerms[] = {"E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"};
  std::string csv = "term,monte_carlo,oracle\n";
  for (int t = 0; t < 4; ++t) {
    csv += fmt::format("{},{},{}\n", kTerms[t], num(est.correlations[t]), num(oracle_terms[t]));
  }
  csv += fmt::format("S,{},{}\n", num(est.value), num(oracle));
  res.summary_csv = std::move(csv);
  finish(res, pass, opt, start);
  return res;
}

CommandResult cmd_overlap(const ExperimentManifest& m, const RunOptions& opt) {
  const auto start = Clock::now();
  if (!m.psi2) throw ManifestError("psi2", "overlap needs a second state psi2");
  if (ray_equal(m.psi, *m.psi2)) throw ManifestError("psi2", "psi and psi2 are the same ray");
  const std::uint64_t seed = effective_seed(m, opt);
  CommandResult res;
  res.report = report_header("overlap", m, seed);

  const OverlapCertificate cert = overlap_certificate(m.psi, *m.psi2, m.reference);
  res.report["certificate"] = {{"psi1", state_to_json(cert.psi1)},
                               {"psi2", state_to_json(cert.psi2)},
                               {"z1", cert.z1},
                               {"z2", cert.z2},
                               {"lower_bound", cert.lower_bound},
                               {"witness", cert.witness}};
  res.report["reference"] = state_to_json(m.reference);
  res.report["quantum_overlap"] = overlap(m.psi, *m.psi2);
  // The ontic model is supported on {psi} x [0, 1), so ray-distinct
  // preparations never share an ontic state.
  res.report["ontic_baseline"] = {{"shared_mass", 0.0}, {"supports_disjoint", true}};

  bool pass = true;
  json empirical = json::array();
  std::string csv = "state,z,e0_fraction,tolerance\n";
  const StateVector* states[] = {&m.psi, &*m.psi2};
  const double zs[] = {cert.z1, cert.z2};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto [hits, n] = e0_hits(*states[k], m.reference, m.samples, stream_seed(seed, k), opt.workers);
    const double frac = static_cast<double>(hits) / static_cast<double>(n);
    const double tol = kMonteCarloSigma * std::sqrt(zs[k] * (1.0 - zs[k]) / static_cast<double>(n));
    const bool ok = std::abs(frac - zs[k]) <= tol;
    pass = pass && ok;
    empirical.push_back({{"z", zs[k]}, {"e0_fraction", frac}, {"tolerance", tol},
                         {"samples", n}, {"pass", ok}});
    csv += fmt::format("psi{},{},{},{}\n", k + 1, num(zs[k]), num(frac), num(tol));
  }
  res.report["e0_mass"] = std::move(empirical);
  res.summary_csv = std::move(csv);

  std::ostringstream profile;
  write_z_profile_csv(profile, m.zmap_points);
  res.artifacts["z_profile.csv"] = profile.str();
  finish(res, pass, opt, start);
  return res;
}

CommandResult cmd_audit(const ExperimentManifest& m, const RunOptions& opt) {
  const auto start = Clock::now();
  const std::uint64_t seed = effective_seed(m, opt);
  CommandResult res;
  res.report = report_header("audit", m, seed);
  bool pass = false;
  if (m.table_csv) {
    std::ifstream in(*m.table_csv, std::ios::binary);
    if (!in) throw ManifestError("table", "cannot open table " + m.table_csv->string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::istringstream s(text);
    res.report["source"] = {{"kind", "csv"}, {"file", m.table_csv->filename().string()}};
    try {
      if (looks_rational(text)) {
        res.report["source"]["arithmetic"] = "rational";
        pass = audit_table(m, audit::read_rational_table_csv(s), res);
      } else {
        res.report["source"]["arithmetic"] = "double";
        pass = audit_table(m, audit::read_table_csv(s), res);
      }
    } catch (const std::invalid_argument& e) {
      throw ManifestError("table", e.what());
    }
  } else {
    audit::ExperimentConfig cfg = m.experiment(opt.workers);
    cfg.seed = seed;
    res.report["source"] = {{"kind", "experiment"},
                            {"model", to_string(m.model)},
                            {"channel", to_string(m.channel.kind)},
                            {"channel_bits", m.channel.menu},
                            {"lambda_bits", m.lambda.enabled ? m.lambda.bits : -1},
                            {"lambda_e0", m.lambda.with_e0},
                            {"samples", m.samples}};
    pass = audit_table(m, audit::run_experiment(cfg), res);
  }
  finish(res, pass, opt, start);
  return res;
}

CommandResult cmd_zmap(const ExperimentManifest& m, const RunOptions& opt) {
  const auto start = Clock::now();
  CommandResult res;
  res.report = report_header("zmap", m, effective_seed(m, opt));
  const std::size_t n = m.zmap_points;
  std::string csv = "c2,z\n";
  bool pass = true;
  double prev = 0.0;
  double max_z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c2 = static_cast<double>(i) / static_cast<double>(n - 1);
    const double z = z_from_overlap(c2);
    if (z < prev || z < 0.0 || z > EpistemicParams::kMaxZ) pass = false;
    if (c2 <= EpistemicParams::kCapThreshold && z != 0.0) pass = false;
    prev = z;
    max_z = std::max(max_z, z);
    csv += fmt::format("{},{}\n", num(c2), num(z));
  }
  const double z_ref = z(m.reference, m.reference);
  if (z_ref != EpistemicParams::kMaxZ) pass = false;
  res.report["points"] = n;
  res.report["cap_threshold"] = EpistemicParams::kCapThreshold;
  res.report["max_z"] = max_z;
  res.report["z_at_reference"] = z_ref;
  res.report["monotone"] = pass;
  res.summary_csv = csv;
  res.artifacts["zmap.csv"] = std::move(csv);
  finish(res, pass, opt, start);
  return res;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ontological-model Bell experiment driver", "bellsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("bellsim ") + BELLSIM_VERSION);

  std::string manifest_path;
  std::uint64_t seed = 0;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir;
  std::string format = "json";
  bool timing = false;

  using Handler = CommandResult (*)(const ExperimentManifest&, const RunOptions&);
  const std::pair<const char*, Handler> commands[] = {
      {"born-check", cmd_born_check}, {"chsh", cmd_chsh}, {"overlap", cmd_overlap},
      {"audit", cmd_audit},           {"zmap", cmd_zmap}};
  const char* descriptions[] = {"Born-rule check of the ontic or epistemic model",
                                "Monte Carlo CHSH value against the quantum oracle",
                                "Overlap certificate for two preparations",
                                "Run the condition audit on a sampled or fixture table",
                                "Tabulate z against the reference overlap"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].first, descriptions[k]);
    auto* mopt = sub->add_option("--manifest", manifest_path, "Experiment manifest (JSON)");
    if (std::string_view(commands[k].first) != "zmap") mopt->required();
    sub->add_option("--seed", seed, "Root seed, overrides the manifest");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv + ")");
    sub->add_option("--format", format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", timing, "Record wall-clock time in the report");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << diagnostic("usage", "", e.what());
    return kExitInvalid;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  RunOptions opt;
  opt.workers = workers;
  opt.timing = timing;
  if (subs[which]->count("--seed") > 0) opt.seed = seed;
  if (out_dir.empty()) {
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr) out_dir = env;
  }

  CommandResult res;
  try {
    const ExperimentManifest m = manifest_path.empty()
                                     ? parse_manifest(json::object())
                                     : load_manifest(manifest_path);
    res = commands[which].second(m, opt);
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      const std::string stem = commands[which].first;
      write_file(dir / (stem + ".json"), canonical_json(res.report));
      write_file(dir / (stem + ".csv"), res.summary_csv);
      for (const auto& [name, content] : res.artifacts) write_file(dir / name, content);
    }
  } catch (const ManifestError& e) {
    err << diagnostic("invalid_manifest", e.field(), e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << diagnostic("invalid_input", "", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << diagnostic("runtime", "", e.what());
    return kExitInvalid;
  }

  out << (format == "csv" ? res.summary_csv : canonical_json(res.report));
  return res.exit_code;
}

}  // namespace bellsim::cli
