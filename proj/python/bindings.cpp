#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tcyl/errors.hpp"
#include "tcyl/lattice.hpp"
#include "tcyl/manifest.hpp"
#include "tcyl/pipeline.hpp"
#include "tcyl/spectral.hpp"
#include "tcyl/wick.hpp"

namespace py = pybind11;
using namespace tcyl;

namespace {

py::array_t<double> grid_array(const std::vector<double>& values, int rows, int cols) {
  py::array_t<double> out({rows, cols});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::dict reports_entry(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["verdict"] = to_string(r.verdict);
  d["statistic"] = r.statistic;
  d["threshold"] = r.threshold;
  d["message"] = r.message;
  py::dict values;
  for (const auto& [k, v] : r.values) values[py::str(k)] = v;
  d["values"] = values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_thermal_cylinder, m) {
  m.doc() = "Thermal P(phi)_2 numerical lab";
  m.attr("__version__") = TCYL_VERSION;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<NumericalError>(m, "NumericalError", error);
  py::register_exception<BasisError>(m, "BasisError", error);
  py::register_exception<FormatError>(m, "FormatError", error);

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init<>())
      .def(py::init<std::vector<double>>(), py::arg("coeffs"))
      .def_static("zero", &Polynomial::zero)
      .def_static("quartic", &Polynomial::quartic, py::arg("coupling"))
      .def_property_readonly("coeffs", &Polynomial::coeffs)
      .def_property_readonly("degree", &Polynomial::degree)
      .def("is_zero", &Polynomial::is_zero)
      .def("__call__", &Polynomial::operator(), py::arg("phi"))
      .def("__repr__", [](const Polynomial& p) { return "Polynomial(" + p.to_string() + ")"; });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double mass, double beta, double circumference, Polynomial poly) {
             ModelParams p{mass, beta, std::move(poly), circumference};
             p.validate();
             return p;
           }),
           py::arg("mass"), py::arg("beta"), py::arg("circumference"), py::arg("poly") = Polynomial{})
      .def_readwrite("mass", &ModelParams::mass)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("circumference", &ModelParams::circumference)
      .def_readwrite("poly", &ModelParams::poly)
      .def("validate", &ModelParams::validate);

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init([](int n_t, int n_x, double a_t, double a_x) {
             LatticeSpec s{n_t, n_x, a_t, a_x};
             s.validate();
             return s;
           }),
           py::arg("n_t"), py::arg("n_x"), py::arg("a_t") = 1.0, py::arg("a_x") = 1.0)
      .def_static("for_model", &LatticeSpec::for_model, py::arg("params"), py::arg("n_t"), py::arg("n_x"))
      .def_readonly("n_t", &LatticeSpec::n_t)
      .def_readonly("n_x", &LatticeSpec::n_x)
      .def_readonly("a_t", &LatticeSpec::a_t)
      .def_readonly("a_x", &LatticeSpec::a_x)
      .def_property_readonly("beta", &LatticeSpec::beta)
      .def_property_readonly("length", &LatticeSpec::length)
      .def("transposed", &LatticeSpec::transposed)
      .def(py::self == py::self)
      .def("__repr__", [](const LatticeSpec& s) {
        return "LatticeSpec(n_t=" + std::to_string(s.n_t) + ", n_x=" + std::to_string(s.n_x) + ")";
      });

  py::enum_<Verdict>(m, "Verdict")
      .value("PASS", Verdict::Pass)
      .value("FAIL", Verdict::Fail)
      .value("INCONCLUSIVE", Verdict::Inconclusive);

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("verdict", &CheckReport::verdict)
      .def_readonly("statistic", &CheckReport::statistic)
      .def_readonly("threshold", &CheckReport::threshold)
      .def_readonly("values", &CheckReport::values)
      .def_readonly("message", &CheckReport::message)
      .def("passed", &CheckReport::passed);

  m.def("dispersion", &dispersion, py::arg("k"), py::arg("mass"));
  m.def("thermal_covariance_kernel", &thermal_covariance_kernel, py::arg("k"), py::arg("params"));
  m.def("matsubara_covariance", &matsubara_covariance, py::arg("k"), py::arg("tau"), py::arg("params"),
        py::arg("n_cut"));
  m.def("free_euclidean_propagator", &free_euclidean_propagator, py::arg("tau"), py::arg("x"), py::arg("params"));
  m.def("free_wightman", &free_wightman, py::arg("t"), py::arg("x"), py::arg("params"));
  m.def("bessel_k0", &bessel_k0, py::arg("z"));

  m.def(
      "lattice_eigenvalues",
      [](const LatticeSpec& spec, double mass) {
        return grid_array(lattice_eigenvalues(spec, mass), spec.n_t, spec.n_x);
      },
      py::arg("spec"), py::arg("mass"));
  m.def(
      "exact_lattice_covariance",
      [](const LatticeSpec& spec, double mass) {
        return grid_array(exact_lattice_covariance(spec, mass).position_kernel, spec.n_t, spec.n_x);
      },
      py::arg("spec"), py::arg("mass"));
  m.def(
      "sample_gff",
      [](const LatticeSpec& spec, double mass, std::uint64_t seed) {
        return grid_array(sample_gff(spec, mass, seed).values, spec.n_t, spec.n_x);
      },
      py::arg("spec"), py::arg("mass"), py::arg("seed"));
  m.def("wick_constant", &wick_constant, py::arg("spec"), py::arg("mass"));
  m.def(
      "wick_order", [](const Polynomial& p, double c) { return wick_order(p, c).coeffs; }, py::arg("poly"),
      py::arg("c"));

  py::class_<RunManifest>(m, "RunManifest")
      .def_readonly("manifest_hash", &RunManifest::manifest_hash)
      .def_readonly("model", &RunManifest::model)
      .def_readonly("n_t", &RunManifest::n_t)
      .def_readonly("n_x", &RunManifest::n_x)
      .def("lattice", &RunManifest::lattice)
      .def("to_text", &RunManifest::to_text);
  m.def("parse_manifest", &parse_manifest, py::arg("text"));

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("basis_size", &OracleResult::basis_size)
      .def_readonly("e_c", &OracleResult::e_c)
      .def_readonly("gap", &OracleResult::gap)
      .def_readonly("drift", &OracleResult::drift)
      .def_readonly("reports", &OracleResult::reports)
      .def_readonly("warnings", &OracleResult::warnings)
      .def_readonly("two_point_csv", &OracleResult::two_point_csv);
  m.def("run_oracle", &run_oracle, py::arg("manifest"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_simulation",
      [](const RunManifest& manifest, int threads) {
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(manifest, threads);
        }
        const auto spec = r.raw.spec;
        py::dict out;
        out["manifest_hash"] = r.manifest.manifest_hash;
        out["correlator"] = grid_array(r.symmetric.s, spec.n_t, spec.n_x);
        out["correlator_error"] = grid_array(r.symmetric.err, spec.n_t, spec.n_x);
        py::dict observables;
        for (const auto& o : r.observables) {
          observables[py::str(o.name)] =
              py::make_tuple(o.estimate.mean, o.estimate.std_error, o.estimate.tau_int, o.estimate.n_eff);
        }
        out["observables"] = observables;
        py::list reports;
        for (const auto& rep : r.reports) reports.append(reports_entry(rep));
        out["reports"] = reports;
        out["warnings"] = r.warnings;
        out["n_samples"] = r.samples.size();
        return out;
      },
      py::arg("manifest"), py::arg("threads") = 1);
}
