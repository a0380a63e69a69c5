// Copyright 2026 The kacs Authors
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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kacs/analysis.hpp"
#include "kacs/circuit.hpp"
#include "kacs/cli.hpp"
#include "kacs/coupling.hpp"
#include "kacs/errors.hpp"
#include "kacs/haar.hpp"
#include "kacs/keyed.hpp"
#include "kacs/walk.hpp"

namespace py = pybind11;
using namespace kacs;

namespace {

Seed256 to_seed(const py::object& seed) {
  if (py::isinstance<py::str>(seed)) return Seed256::from_hex(seed.cast<std::string>());
  return Seed256::from_u64(seed.cast<uint64_t>());
}

StateVector to_state(const py::array& a) {
  if (a.ndim() != 1) throw DimensionError("state must be a 1-D array");
  if (py::isinstance<py::array_t<std::complex<double>>>(a) || a.dtype().kind() == 'c') {
    auto c = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>::ensure(a);
    return StateVector::from_complex({c.data(), c.data() + c.size()});
  }
  auto r = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
  return StateVector::from_real({r.data(), r.data() + r.size()});
}

template <class T>
py::array copy_out(std::span<const T> v) {
  py::array_t<T> out(py::ssize_t(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array to_numpy(const StateVector& s) {
  return s.is_real() ? copy_out(s.real()) : copy_out(s.complex());
}

py::dict report_dict(const EstimateReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["estimate"] = r.estimate;
  d["stderr"] = r.std_error;
  d["trials"] = r.trials;
  d["bound"] = r.bound ? py::object(py::float_(*r.bound)) : py::none();
  d["verdict"] = std::string(to_string(r.verdict));
  return d;
}

py::list report_list(const std::vector<EstimateReport>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(report_dict(r));
  return out;
}

ScrambleConfig make_config(int n, size_t steps, Field field, int d) {
  return ScrambleConfig{n, steps, field, d == 0 ? AngleMode::Continuous : AngleMode::Discrete, d == 0 ? 20 : d};
}

PrssKey make_key(const std::string& master_hex, const std::string& mode, size_t steps, Field field) {
  PrssKey key{parse_encryption_mode(mode), key_from_hex(master_hex), std::nullopt};
  if (key.mode == EncryptionMode::Direct) key.full = ScramblerKey::expand(key.master, steps, field);
  return key;
}

// Optional-valued experiment options, keyed by their command-line names.
template <class T>
void set_opt(const py::dict& kw, const char* name, std::optional<T>& slot) {
  if (kw.contains(name)) slot = kw[name].cast<T>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parallel Kac walks, their couplings, and the Kac-walk state scrambler";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FeasibilityError>(m, "FeasibilityError", PyExc_RuntimeError);

  py::enum_<Field>(m, "Field").value("REAL", Field::Real).value("COMPLEX", Field::Complex);

  py::class_<RngStream>(m, "Rng")
      .def(py::init([](const py::object& seed, uint64_t stream) { return RngStream(to_seed(seed), stream); }),
           py::arg("seed"), py::arg("stream") = 0)
      .def("fork", &RngStream::fork, py::arg("lane"))
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal);

  m.def("philox4x64_10", &philox4x64_10, py::arg("counter"), py::arg("key"));

  m.def(
      "haar_state", [](size_t dim, Field field, RngStream& rng) { return to_numpy(haar_sphere_sample(dim, field, rng)); },
      py::arg("dim"), py::arg("field"), py::arg("rng"));

  m.def(
      "run_walk",
      [](const py::array& state, size_t steps, const RngStream& rng) {
        return to_numpy(run_walk(to_state(state), steps, rng).state);
      },
      py::arg("state"), py::arg("steps"), py::arg("rng"), "Parallel Kac walk; step t uses rng.fork(t).");

  m.def(
      "walk_trace",
      [](const py::array& state, size_t steps, const RngStream& rng) {
        const auto res = run_walk(to_state(state), steps, rng, true);
        py::list out;
        for (const auto& rec : res.trace) {
          py::list angles;
          for (const auto& a : rec.angles) angles.append(py::make_tuple(a.alpha, a.beta, a.theta));
          out.append(py::make_tuple(rec.matching.pairs(), angles));
        }
        return out;
      },
      py::arg("state"), py::arg("steps"), py::arg("rng"));

  m.def(
      "proportional_coupling",
      [](const py::array& x, const py::array& y, size_t steps, const RngStream& rng) {
        CoupledPair pair{to_state(x), to_state(y)};
        std::vector<double> stats;
        run_proportional(pair, steps, rng, &stats);
        return py::make_tuple(to_numpy(pair.x), to_numpy(pair.y), stats);
      },
      py::arg("x"), py::arg("y"), py::arg("steps"), py::arg("rng"),
      "Returns (X_T, Y_T, contraction statistic after each step).");

  m.def(
      "good_dist_couple",
      [](Field field, double a, double b, double c, double d, RngStream& rng) {
        const auto r = field == Field::Real ? good_dist_couple_real(a, b, c, d, rng)
                                            : good_dist_couple_complex(a, b, c, d, rng);
        return py::make_tuple(r.first, r.second, r.coalesced);
      },
      py::arg("field"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("rng"));

  m.def(
      "steer",
      [](const py::array& eta, const py::array& xi, int d) {
        const StateVector e = to_state(eta);
        StateVector out = e;
        apply_gates(out, steer_to_target(e, to_state(xi), d == 0 ? AngleMode::Continuous : AngleMode::Discrete, d));
        return to_numpy(out);
      },
      py::arg("eta"), py::arg("xi"), py::arg("d") = 0,
      "Applies the steering gates for (eta -> xi) to eta; d = 0 uses continuous angles.");

  m.def("random_key", [](RngStream& rng) { return to_hex(random_key(rng)); }, py::arg("rng"));

  m.def(
      "scramble",
      [](const py::array& state, const std::string& master_hex, size_t steps, int d) {
        const StateVector s = to_state(state);
        const ScrambleConfig sc = make_config(exact_log2(s.dim()), steps, s.field(), d);
        const auto key = ScramblerKey::expand(key_from_hex(master_hex), steps, s.field());
        return to_numpy(scramble(s, sc, ParamSource::keyed(key), false).state);
      },
      py::arg("state"), py::arg("key"), py::arg("steps"), py::arg("d") = 20,
      "Keyed scrambler with subkeys expanded from a 64-hex-digit master key.");

  m.def(
      "encrypt",
      [](const py::array& state, const std::string& key_hex, const std::string& mode, size_t steps, int d,
         std::optional<RngStream> rng) {
        const StateVector s = to_state(state);
        const ScrambleConfig sc = make_config(exact_log2(s.dim()), steps, s.field(), d);
        const Ciphertext c = prss_encrypt(s, make_key(key_hex, mode, steps, s.field()), sc, rng ? &*rng : nullptr);
        return py::make_tuple(to_numpy(c.state), c.nonce ? py::object(py::str(to_hex(*c.nonce))) : py::none());
      },
      py::arg("state"), py::arg("key"), py::arg("mode") = "prg_expanded", py::arg("steps") = 50, py::arg("d") = 20,
      py::arg("rng") = py::none(), "Returns (ciphertext state, nonce hex or None).");

  m.def(
      "decrypt",
      [](const py::array& state, const std::string& key_hex, const std::string& mode, size_t steps, int d,
         std::optional<std::string> nonce) {
        const StateVector s = to_state(state);
        const ScrambleConfig sc = make_config(exact_log2(s.dim()), steps, s.field(), d);
        Ciphertext c{s, std::nullopt};
        if (nonce) c.nonce = key_from_hex(*nonce);
        return to_numpy(prss_decrypt(c, make_key(key_hex, mode, steps, s.field()), sc));
      },
      py::arg("state"), py::arg("key"), py::arg("mode") = "prg_expanded", py::arg("steps") = 50, py::arg("d") = 20,
      py::arg("nonce") = py::none());

  m.def(
      "contraction_curve",
      [](size_t dim, Field field, size_t l_max, size_t trials, const RngStream& rng) {
        return report_list(contraction_curve(dim, field, l_max, trials, rng));
      },
      py::arg("dim"), py::arg("field"), py::arg("l_max"), py::arg("trials"), py::arg("rng"));

  m.def("experiment_names", &cli::experiment_names);

  m.def(
      "run_experiment",
      [](const std::string& experiment, const py::object& seed, const py::kwargs& kw) {
        cli::ExperimentConfig c;
        c.experiment = experiment;
        c.seed = py::str(seed).cast<std::string>();
        set_opt(kw, "W", c.W);
        set_opt(kw, "n", c.n);
        set_opt(kw, "T", c.T);
        set_opt(kw, "T0", c.T0);
        set_opt(kw, "T1", c.T1);
        set_opt(kw, "l", c.l);
        set_opt(kw, "l_max", c.l_max);
        set_opt(kw, "d", c.d);
        set_opt(kw, "c", c.c);
        set_opt(kw, "trials", c.trials);
        if (kw.contains("field")) c.field = kw["field"].cast<std::string>();
        if (kw.contains("p")) c.p = kw["p"].cast<double>();
        if (kw.contains("q")) c.q = kw["q"].cast<double>();
        if (kw.contains("q_prime")) c.q_prime = kw["q_prime"].cast<double>();
        if (kw.contains("source")) c.source = kw["source"].cast<std::string>();
        if (kw.contains("key")) c.key = kw["key"].cast<std::string>();
        if (kw.contains("mode")) c.mode = kw["mode"].cast<std::string>();
        if (kw.contains("max_failure")) c.max_failure = kw["max_failure"].cast<double>();
        std::vector<EstimateReport> reports;
        {
          py::gil_scoped_release release;
          reports = cli::run_experiment(c);
        }
        return report_list(reports);
      },
      py::arg("experiment"), py::arg("seed"),
      "Runs a command-line experiment and returns its reports as dicts.");
}
