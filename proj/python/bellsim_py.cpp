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

#include <optional>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellsim/audit/conditions.hpp"
#include "bellsim/audit/experiment.hpp"
#include "bellsim/audit/io.hpp"
#include "bellsim/bell_ontic.hpp"
#include "bellsim/cli/commands.hpp"
#include "bellsim/epistemic.hpp"
#include "bellsim/model.hpp"
#include "bellsim/quantum_oracle.hpp"
#include "bellsim/serialize.hpp"

namespace py = pybind11;
using namespace bellsim;

namespace {

StateVector make_state(const std::array<Complex, 4>& amps) { return StateVector::from_amplitudes(amps); }

std::array<Complex, 4> amplitudes(const StateVector& s) {
  return {s[0], s[1], s[2], s[3]};
}

py::tuple ontic_tuple(const OnticState& l) { return py::make_tuple(amplitudes(l.phi), l.tau); }

ModelKind model_kind(const std::string& name) {
  const auto k = parse_model_kind(name);
  if (!k) throw py::value_error("model must be 'ontic' or 'epistemic'");
  return *k;
}

py::tuple run_command(const std::string& command, const std::string& manifest_json,
                      std::optional<std::uint64_t> seed, unsigned workers,
                      const std::string& base_dir) {
  const cli::ExperimentManifest m =
      cli::parse_manifest(nlohmann::json::parse(manifest_json), base_dir);
  const cli::RunOptions opt{seed, workers, false};
  cli::CommandResult r;
  py::gil_scoped_release release;
  if (command == "born-check") r = cli::cmd_born_check(m, opt);
  else if (command == "chsh") r = cli::cmd_chsh(m, opt);
  else if (command == "overlap") r = cli::cmd_overlap(m, opt);
  else if (command == "audit") r = cli::cmd_audit(m, opt);
  else if (command == "zmap") r = cli::cmd_zmap(m, opt);
  else throw py::value_error("unknown command " + command);
  std::string report = canonical_json(r.report);
  py::gil_scoped_acquire acquire;
  return py::make_tuple(r.exit_code, report, r.artifacts);
}

}  // namespace

PYBIND11_MODULE(_bellsim, m) {
  m.doc() = "Ontological models of two-qubit Bell experiments";

  py::register_exception<cli::ManifestError>(m, "ManifestError", PyExc_ValueError);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<>(), "The product state |00>.")
      .def(py::init(&make_state), py::arg("amplitudes"))
      .def_static("normalized", &StateVector::normalized)
      .def_static("basis", &StateVector::basis)
      .def_property_readonly("amplitudes", &amplitudes)
      .def("phase_fixed", &StateVector::phase_fixed)
      .def("__repr__", [](const StateVector& s) {
        return "StateVector(" + state_to_json(s).dump() + ")";
      });

  py::class_<Setting>(m, "Setting")
      .def(py::init([](const std::array<double, 3>& n) { return Setting::from_vector(n); }), py::arg("n"))
      .def_static("in_xz_plane", &Setting::in_xz_plane, py::arg("theta_rad"))
      .def_property_readonly("vector", &Setting::vector);

  m.def("singlet", &singlet);
  m.def("overlap", &overlap);
  m.def("ray_equal", &ray_equal, py::arg("u"), py::arg("v"), py::arg("tol") = 1e-12);

  m.def("joint_eigenbasis", [](const Setting& a, const Setting& b, const StateVector& ref) {
        const JointEigenbasis jb = joint_eigenbasis(a, b, ref);
        py::list out;
        for (std::size_t j = 0; j < 4; ++j) {
          out.append(py::make_tuple(amplitudes(jb.vectors[j]), jb.outcomes[j].x, jb.outcomes[j].y));
        }
        return out;
      }, py::arg("a"), py::arg("b"), py::arg("ref") = StateVector{});

  m.def("born_distribution", [](const StateVector& psi, const Setting& a, const Setting& b,
                                const StateVector& ref) { return born_distribution(psi, a, b, ref).p; },
        py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("ref") = StateVector{},
        "Probabilities of (+,+), (+,-), (-,+), (-,-).");
  m.def("correlation", &correlation, py::arg("psi"), py::arg("a"), py::arg("b"),
        py::arg("ref") = StateVector{});
  m.def("chsh", [](const StateVector& psi, const Setting& a, const Setting& ap, const Setting& b,
                   const Setting& bp) { return chsh(psi, {a, ap, b, bp}); },
        py::arg("psi"), py::arg("a"), py::arg("a_prime"), py::arg("b"), py::arg("b_prime"));

  m.def("z", &bellsim::z, py::arg("phi"), py::arg("ref") = StateVector{});
  m.def("z_from_overlap", &z_from_overlap, py::arg("c2"));
  m.def("in_E0", [](const StateVector& phi, double tau, const StateVector& ref) {
        return in_E0({phi, tau}, ref);
      }, py::arg("phi"), py::arg("tau"), py::arg("ref") = StateVector{});

  m.def("exact_born_check", [](const StateVector& psi, const Setting& a, const Setting& b,
                               const StateVector& ref) {
        const ExactBornCheck e = exact_born_check(psi, a, b, ref);
        py::dict d;
        d["interval_lengths"] = e.interval_lengths;
        d["born"] = e.born;
        d["max_deviation"] = e.max_deviation;
        return d;
      }, py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("ref") = StateVector{});

  m.def("epistemic_born_check", [](const StateVector& psi, const Setting& a, const Setting& b,
                                   std::uint64_t n, std::uint64_t seed, unsigned workers,
                                   const StateVector& ref) {
        StatisticalBornCheck e;
        {
          py::gil_scoped_release release;
          e = epistemic_born_check(psi, a, b, ref, n, seed, workers);
        }
        py::dict d;
        d["frequency"] = e.frequency;
        d["born"] = e.born;
        d["tolerance"] = e.tolerance;
        d["max_deviation"] = e.max_deviation;
        d["max_sigma"] = e.max_sigma;
        d["pass"] = e.pass;
        return d;
      }, py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("seed"),
      py::arg("workers") = 1, py::arg("ref") = StateVector{});

  m.def("sample", [](const std::string& model, const StateVector& psi, std::size_t count,
                     std::uint64_t seed, const StateVector& ref) {
        const OnticSampler sampler(model_kind(model), psi, ref);
        Rng rng(seed);
        py::list out;
        for (std::size_t i = 0; i < count; ++i) out.append(ontic_tuple(sampler(rng)));
        return out;
      }, py::arg("model"), py::arg("psi"), py::arg("count"), py::arg("seed"),
      py::arg("ref") = StateVector{}, "List of (amplitudes, tau) ontic states.");
  m.def("sample_E0_uniform", [](std::size_t count, std::uint64_t seed, const StateVector& ref) {
        Rng rng(seed);
        py::list out;
        for (std::size_t i = 0; i < count; ++i) out.append(ontic_tuple(sample_E0_uniform(ref, rng)));
        return out;
      }, py::arg("count"), py::arg("seed"), py::arg("ref") = StateVector{});
  m.def("assigned_index", [](const StateVector& phi, double tau, const Setting& a, const Setting& b,
                             const StateVector& ref) {
        return assigned_index({phi, tau}, joint_eigenbasis(a, b, ref));
      }, py::arg("phi"), py::arg("tau"), py::arg("a"), py::arg("b"), py::arg("ref") = StateVector{});

  m.def("overlap_certificate", [](const StateVector& p1, const StateVector& p2, const StateVector& ref) {
        const OverlapCertificate c = overlap_certificate(p1, p2, ref);
        py::dict d;
        d["z1"] = c.z1;
        d["z2"] = c.z2;
        d["lower_bound"] = c.lower_bound;
        d["witness"] = c.witness;
        return d;
      }, py::arg("psi1"), py::arg("psi2"), py::arg("ref") = StateVector{});

  m.def("estimate_chsh", [](const std::string& model, const StateVector& psi, std::uint64_t total,
                            std::uint64_t seed, unsigned workers) {
        ChshEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_chsh(OnticSampler(model_kind(model), psi), ChshSettings::optimal_singlet(),
                            total, seed, workers);
        }
        return py::make_tuple(e.value, e.sigma);
      }, py::arg("model"), py::arg("psi"), py::arg("total"), py::arg("seed"), py::arg("workers") = 1,
      "Monte Carlo CHSH value and standard error at the optimal singlet settings.");

  m.def("check_table_csv", [](const std::string& csv, const std::string& condition, double tol) {
        std::istringstream in(csv);
        const auto c = audit::parse_condition(condition);
        if (!c) throw py::value_error("unknown condition " + condition);
        const auto v = audit::check(*c, audit::read_rational_table_csv(in), audit::TolerancePolicy::exact(tol));
        return canonical_json(audit::to_json(v));
      }, py::arg("csv"), py::arg("condition"), py::arg("tolerance") = 0.0,
      "Checks one condition on an exact table given as CSV text; returns the verdict as JSON.");

  m.def("run_command", &run_command, py::arg("command"), py::arg("manifest_json"),
        py::arg("seed") = std::nullopt, py::arg("workers") = 1, py::arg("base_dir") = "",
        "Runs a driver command; returns (exit_code, report_json, artifacts).");
}
