// Copyright 2026 The adiaerr Authors
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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "adiaerr/errors.hpp"
#include "adiaerr/exact.hpp"
#include "adiaerr/experiment.hpp"
#include "adiaerr/freefermion.hpp"
#include "adiaerr/io.hpp"
#include "adiaerr/models.hpp"
#include "adiaerr/mps.hpp"
#include "adiaerr/randomcircuit.hpp"

namespace py = pybind11;
using namespace adiaerr;

namespace {

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c = io::config_from_json(nlohmann::json::parse(text));
  require_valid(c);
  return c;
}

py::dict record_to_dict(const ResultRecord& r) {
  py::dict d;
  d["config_name"] = r.config_name;
  d["family"] = std::string(to_string(r.family));
  d["engine"] = r.info.engine;
  d["label"] = r.info.label;
  d["n"] = r.info.n;
  d["duration"] = r.info.duration;
  d["dt"] = r.info.dt;
  d["truncation_flagged"] = r.info.truncation_flagged;
  d["csv"] = io::to_csv(r);
  std::vector<double> t, e;
  std::vector<std::optional<double>> de;
  for (const Row& row : r.rows) {
    t.push_back(row.t);
    e.push_back(row.energy);
    de.push_back(row.delta_e);
  }
  d["t"] = t;
  d["energy"] = e;
  d["delta_e"] = de;
  const Row& f = r.final_row();
  d["final_populations"] = f.p;
  d["final_p_rest"] = f.p_rest;
  return d;
}

Family family_arg(const std::string& s) {
  auto f = family_from_string(s);
  if (!f) throw InputError("unknown family '" + s + "'");
  return *f;
}

Axis axis_arg(const std::string& s) {
  auto a = axis_from_string(s);
  if (!a) throw InputError("unknown axis '" + s + "'");
  return *a;
}

Params params_arg(Family family, double a, double b, double c) {
  Params p;
  if (family == Family::ZZXZ) {
    p.J = a, p.Bx = b, p.Bz = c;
  } else {
    p.J = a, p.Jz = b, p.Bx = c;
  }
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Error propagation in adiabatic sweeps on spin chains.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);

  m.def("version", &version);

  m.def(
      "validate_config",
      [](const std::string& text) {
        return validate(io::config_from_json(nlohmann::json::parse(text)));
      },
      py::arg("config_json"), "Problems found in a JSON config; empty when valid.");

  m.def(
      "run_experiment",
      [](const std::string& text) {
        const ExperimentConfig c = parse_config(text);
        std::vector<ResultRecord> records;
        {
          py::gil_scoped_release release;
          records = run_experiment(c);
        }
        py::list out;
        for (const auto& r : records) out.append(record_to_dict(r));
        return out;
      },
      py::arg("config_json"),
      "Clean and noisy runs for every size of a JSON config, as dicts.");

  m.def(
      "hamiltonian",
      [](const std::string& family, int n, double a, double b, double c) {
        const Family f = family_arg(family);
        return exact::build_dense(ModelSpec{f, n, params_arg(f, a, b, c)});
      },
      py::arg("family"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"),
      "Dense Hamiltonian. zzxz takes (J, Bx, Bz); heisenberg_x takes (J, Jz, Bx).");

  m.def(
      "ground_energy_exact",
      [](const std::string& family, int n, double a, double b, double c) {
        const Family f = family_arg(family);
        return exact::diagonalize(ModelSpec{f, n, params_arg(f, a, b, c)}).values(0);
      },
      py::arg("family"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"));

  m.def(
      "ground_energy_freefermion",
      [](int n, double J, double Bx) {
        return freefermion::ground_covariance(
                   freefermion::jw_tfim(ModelSpec{Family::ZZXZ, n, Params{J, Bx, 0.0, 0.0}}))
            .energy;
      },
      py::arg("n"), py::arg("J"), py::arg("Bx"));

  m.def(
      "mode_energies",
      [](int n, double J, double Bx) {
        return freefermion::single_particle_energies(
            freefermion::jw_tfim(ModelSpec{Family::ZZXZ, n, Params{J, Bx, 0.0, 0.0}}));
      },
      py::arg("n"), py::arg("J"), py::arg("Bx"),
      "Single-particle energies of the transverse-field chain, ascending.");

  m.def(
      "ground_energy_mps",
      [](const std::string& family, int n, double a, double b, double c, double cutoff, double tol) {
        const Family f = family_arg(family);
        py::gil_scoped_release release;
        return mps::ground_state_imaginary_tebd(ModelSpec{f, n, params_arg(f, a, b, c)}, cutoff, tol)
            .energy;
      },
      py::arg("family"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"),
      py::arg("cutoff") = 1e-10, py::arg("tol") = 1e-9);

  m.def(
      "energy_jump",
      [](const std::string& family, int n, double a, double b, double c, int site,
         const std::string& axis) {
        const Family f = family_arg(family);
        const ModelSpec model{f, n, params_arg(f, a, b, c)};
        const exact::Diagonalization d = exact::diagonalize(model);
        exact::DenseState ground{n, d.vectors.col(0).cast<std::complex<double>>()};
        return exact::energy(exact::apply_pauli(ground, site, axis_arg(axis)), model) - d.values(0);
      },
      py::arg("family"), py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("site"),
      py::arg("axis"), "Energy added by one Pauli error on the exact ground state.");

  m.def(
      "concentration_bound",
      [](double lambda, double c, double f, int D, double sigma, double mterms) {
        const BoundResult r = concentration_bound({lambda, c, f, D, sigma, mterms});
        return py::make_tuple(r.bound, r.valid);
      },
      py::arg("lam"), py::arg("c"), py::arg("f"), py::arg("D") = 1, py::arg("sigma") = 1.0,
      py::arg("m") = 1.0, "(bound, gap condition holds).");

  m.def(
      "markov",
      [](int n, int t_layers, long samples, std::uint64_t seed, unsigned threads) {
        randomcircuit::MarkovQuery q;
        q.n = n;
        q.t_layers = t_layers;
        q.samples = samples;
        q.seed = seed;
        q.threads = threads;
        randomcircuit::MarkovStats st;
        {
          py::gil_scoped_release release;
          st = randomcircuit::simulate(q);
        }
        py::dict d;
        std::vector<double> mean, se, p0;
        for (int t = 0; t <= t_layers; ++t) {
          mean.push_back(st.mean(t));
          se.push_back(st.standard_error(t));
          p0.push_back(st.fraction_zero(t));
        }
        d["mean"] = mean;
        d["standard_error"] = se;
        d["return_probability"] = p0;
        return d;
      },
      py::arg("n"), py::arg("t_layers"), py::arg("samples"), py::arg("seed") = 1,
      py::arg("threads") = 1, "Sampled weight of a Pauli string under random brick-wall layers.");

  m.def(
      "cross_validate",
      [](int n) {
        std::vector<py::dict> out;
        for (const CrossCheck& c : cross_validate(n)) {
          py::dict d;
          d["name"] = c.name;
          d["reference"] = c.reference;
          d["value"] = c.value;
          d["tolerance"] = c.tolerance;
          d["passed"] = c.passed();
          out.push_back(d);
        }
        return out;
      },
      py::arg("n"));
}
