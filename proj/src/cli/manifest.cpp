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

#include "bellsim/cli/manifest.hpp"

#include <fstream>
#include <numbers>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "bellsim/serialize.hpp"

namespace bellsim::cli {
namespace {

const std::set<std::string> kKnownKeys{
    "model",  "psi",     "psi2",   "reference", "menuA",         "menuB",
    "priorA", "priorB",  "priorC", "channel",   "menuC",         "lambda",
    "samples", "seed",   "checks", "tolerance", "chsh",          "expect",
    "expected_born",     "table",  "zmap_points", "dump_samples", "description"};

const std::set<std::string> kKnownChecks{"FR", "FW", "NS", "NS2", "ST", "PI", "implication",
                                         "free_choice"};

template <class F>
auto field(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ManifestError&) {
    throw;
  } catch (const std::exception& e) {
    throw ManifestError(name, fmt::format("{}: {}", name, e.what()));
  }
}

std::vector<Setting> parse_menu(const nlohmann::json& j, const std::string& name) {
  return field(name, [&] {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("must be a nonempty array");
    std::vector<Setting> out;
    for (const auto& s : j) out.push_back(setting_from_json(s));
    return out;
  });
}

std::vector<double> parse_prior(const nlohmann::json& j, const std::string& name) {
  return field(name, [&] {
    if (!j.is_array()) throw std::invalid_argument("must be an array of probabilities");
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw std::invalid_argument("entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  });
}

std::vector<int> parse_bits(const nlohmann::json& j, const std::string& name) {
  return field(name, [&] {
    std::vector<int> out;
    if (j.is_number_integer()) {
      out.push_back(j.get<int>());
    } else if (j.is_array() && !j.empty()) {
      for (const auto& v : j) {
        if (!v.is_number_integer()) throw std::invalid_argument("entries must be integers");
        out.push_back(v.get<int>());
      }
    } else {
      throw std::invalid_argument("must be an integer or a nonempty integer array");
    }
    return out;
  });
}

std::uint64_t parse_u64(const nlohmann::json& j, const std::string& name) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ManifestError(name, name + ": must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

audit::TolerancePolicy parse_tolerance(const nlohmann::json& j) {
  return field("tolerance", [&] {
    if (!j.is_object()) throw std::invalid_argument("must be an object");
    const std::string mode = j.value("mode", "statistical");
    if (mode == "absolute") {
      const double v = j.value("value", 0.0);
      if (!(v >= 0.0)) throw std::invalid_argument("value must be >= 0");
      return audit::TolerancePolicy::exact(v);
    }
    if (mode != "statistical") throw std::invalid_argument("mode must be absolute or statistical");
    auto p = audit::TolerancePolicy::statistical(j.value("nsigma", 4.0), j.value("witness_sigma", 5.0),
                                                 j.value("min_cell_count", std::uint64_t{100}));
    if (!(p.nsigma > 0.0) || !(p.witness_sigma > 0.0)) {
      throw std::invalid_argument("nsigma and witness_sigma must be positive");
    }
    return p;
  });
}

}  // namespace

audit::ExperimentConfig ExperimentManifest::experiment(unsigned workers) const {
  audit::ExperimentConfig cfg;
  cfg.model = model;
  cfg.psi = psi;
  cfg.reference = reference;
  cfg.menu_a = menu_a;
  cfg.menu_b = menu_b;
  cfg.prior_a = prior_a;
  cfg.prior_b = prior_b;
  cfg.prior_c = prior_c;
  cfg.channel = channel;
  cfg.lambda = lambda;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.workers = workers;
  return cfg;
}

ExperimentManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ManifestError("", "manifest must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKnownKeys.contains(it.key())) throw ManifestError(it.key(), "unknown manifest key " + it.key());
  }
  ExperimentManifest m;
  m.raw = j;
  m.base_dir = base_dir;
  if (j.contains("model")) {
    const auto kind = j["model"].is_string() ? parse_model_kind(j["model"].get<std::string>())
                                             : std::nullopt;
    if (!kind) throw ManifestError("model", "model must be \"ontic\" or \"epistemic\"");
    m.model = *kind;
  }
  if (j.contains("psi")) m.psi = field("psi", [&] { return state_from_json(j["psi"]); });
  if (j.contains("psi2")) m.psi2 = field("psi2", [&] { return state_from_json(j["psi2"]); });
  if (j.contains("reference")) {
    m.reference = field("reference", [&] { return state_from_json(j["reference"]); });
  }
  const std::vector<Setting> default_menu{Setting::in_xz_plane(0.0),
                                          Setting::in_xz_plane(std::numbers::pi / 2)};
  m.menu_a = j.contains("menuA") ? parse_menu(j["menuA"], "menuA") : default_menu;
  m.menu_b = j.contains("menuB") ? parse_menu(j["menuB"], "menuB") : default_menu;
  if (j.contains("priorA")) m.prior_a = parse_prior(j["priorA"], "priorA");
  if (j.contains("priorB")) m.prior_b = parse_prior(j["priorB"], "priorB");
  if (j.contains("priorC")) m.prior_c = parse_prior(j["priorC"], "priorC");

  if (j.contains("channel")) {
    const auto& c = j["channel"];
    if (!c.is_object()) throw ManifestError("channel", "channel must be an object");
    if (c.contains("kind")) {
      const auto kind = c["kind"].is_string()
                            ? audit::parse_channel_kind(c["kind"].get<std::string>())
                            : std::nullopt;
      if (!kind) throw ManifestError("channel.kind", "channel.kind must be constant, tau, e0 or composite");
      m.channel.kind = *kind;
    }
    if (c.contains("bits")) m.channel.menu = parse_bits(c["bits"], "channel.bits");
  }
  if (j.contains("menuC")) m.channel.menu = parse_bits(j["menuC"], "menuC");
  if (j.contains("lambda")) {
    const auto& l = j["lambda"];
    if (!l.is_object()) throw ManifestError("lambda", "lambda must be an object");
    field("lambda", [&] {
      m.lambda.enabled = l.value("enabled", true);
      m.lambda.bits = l.value("bits", 6);
      m.lambda.with_e0 = l.value("e0", false);
      return 0;
    });
  }
  if (j.contains("samples")) m.samples = parse_u64(j["samples"], "samples");
  if (j.contains("seed")) m.seed = parse_u64(j["seed"], "seed");
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) throw ManifestError("checks", "checks must be an array of names");
    std::set<std::string> seen;
    for (const auto& c : j["checks"]) {
      if (!c.is_string() || !kKnownChecks.contains(c.get<std::string>())) {
        throw ManifestError("checks", "unknown check " + c.dump());
      }
      if (!seen.insert(c.get<std::string>()).second) {
        throw ManifestError("checks", "duplicate check " + c.dump());
      }
      m.checks.push_back(c.get<std::string>());
    }
  }
  if (j.contains("tolerance")) m.tolerance = parse_tolerance(j["tolerance"]);
  if (j.contains("chsh")) {
    const auto& c = j["chsh"];
    if (!c.is_object()) throw ManifestError("chsh", "chsh must be an object");
    for (const char* key : {"a", "a_prime", "b", "b_prime"}) {
      if (!c.contains(key)) throw ManifestError("chsh", fmt::format("chsh.{} is missing", key));
    }
    m.chsh = ChshSettings{parse_menu({c["a"]}, "chsh.a")[0], parse_menu({c["a_prime"]}, "chsh.a_prime")[0],
                          parse_menu({c["b"]}, "chsh.b")[0], parse_menu({c["b_prime"]}, "chsh.b_prime")[0]};
  }
  if (j.contains("expect")) {
    if (!j["expect"].is_object()) throw ManifestError("expect", "expect must be an object");
    for (auto it = j["expect"].begin(); it != j["expect"].end(); ++it) {
      if (!kKnownChecks.contains(it.key())) throw ManifestError("expect", "unknown check " + it.key());
      const auto v = it.value().is_string() ? it.value().get<std::string>() : std::string();
      if (v != "pass" && v != "fail") throw ManifestError("expect", "expectations are \"pass\" or \"fail\"");
      m.expect[it.key()] = v;
    }
  }
  if (j.contains("expected_born")) {
    m.expected_born = field("expected_born", [&] {
      const auto& e = j["expected_born"];
      if (!e.is_array()) throw std::invalid_argument("must be an array of 4-entry rows");
      std::vector<std::array<double, 4>> rows;
      for (const auto& r : e) {
        if (!r.is_array() || r.size() != 4) throw std::invalid_argument("rows need 4 entries");
        rows.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
      }
      if (rows.size() != m.menu_a.size() * m.menu_b.size()) {
        throw std::invalid_argument("one row per (a, b) menu pair is required");
      }
      return rows;
    });
  }
  if (j.contains("table")) {
    if (!j["table"].is_string()) throw ManifestError("table", "table must be a path string");
    std::filesystem::path p = j["table"].get<std::string>();
    m.table_csv = p.is_absolute() ? p : base_dir / p;
  }
  if (j.contains("zmap_points")) {
    m.zmap_points = parse_u64(j["zmap_points"], "zmap_points");
    if (m.zmap_points < 2) throw ManifestError("zmap_points", "zmap_points must be at least 2");
  }
  if (j.contains("dump_samples")) m.dump_samples = parse_u64(j["dump_samples"], "dump_samples");

  if (!m.table_csv) {
    try {
      audit::validate(m.experiment(1));
    } catch (const std::invalid_argument& e) {
      throw ManifestError("experiment", e.what());
    }
  }
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("manifest", "cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError("manifest", std::string("manifest is not valid JSON: ") + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

std::string manifest_digest(const nlohmann::json& raw) {
  const std::string text = canonical_json(raw);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace bellsim::cli
