#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfsplateau/cli.hpp"
#include "mfsplateau/io.hpp"
#include "mfsplateau/optimizer.hpp"
#include "mfsplateau/search.hpp"

namespace py = pybind11;
using namespace mfsplateau;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["initial_config"] = to_vector(r.initial_config.angles());
  d["final_config"] = to_vector(r.final_config.angles());
  d["final_energy"] = r.final_energy;
  d["dilatation_sup_interior"] = r.dilatation_sup_interior;
  d["dilatation_sup_rho"] = r.dilatation_sup_rho;
  d["dirichlet_energy"] = r.dirichlet_energy;
  d["mean_curvature_sup"] = r.mean_curvature_sup;
  d["iters_run"] = r.iters_run;
  d["eta_final"] = r.eta_final;
  d["stop_reason"] = r.stop_reason;
  d["energy_trace"] = r.energy_trace;
  d["fingerprint"] = r.fingerprint;
  d["monotone"] = r.monotone;
  d["wall_time"] = r.wall_time;
  return d;
}

BoundaryCurve curve_from(const std::string& name, const std::map<std::string, double>& params,
                         const std::vector<Vec3>& control) {
  return make_curve(CurveDescriptor{name, params, control});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimal surfaces via the method of fundamental solutions";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<MfsBasis>(m, "MfsBasis")
      .def(py::init<int, double>(), py::arg("n"), py::arg("radius"))
      .def_property_readonly("size", &MfsBasis::size)
      .def_property_readonly("radius", &MfsBasis::radius)
      .def_property_readonly("collocation",
                             [](const MfsBasis& b) { return std::vector<Complex>(b.collocation().begin(), b.collocation().end()); })
      .def_property_readonly("singular",
                             [](const MfsBasis& b) { return std::vector<Complex>(b.singular().begin(), b.singular().end()); })
      .def_property_readonly("spectrum", [](const MfsBasis& b) { return to_vector(b.spectrum()); })
      .def("solve", [](const MfsBasis& b, const std::vector<double>& f) { return to_vector(b.solve(f).values()); })
      .def("evaluate", [](const MfsBasis& b, const std::vector<double>& q, Complex z) {
        return b.evaluate(Coefficients(q), z);
      })
      .def("evaluate_dz", [](const MfsBasis& b, const std::vector<double>& q, Complex z) {
        return b.evaluate_dz(Coefficients(q), z);
      });

  py::class_<BoundaryCurve>(m, "BoundaryCurve")
      .def(py::init(&curve_from), py::arg("name"), py::arg("params") = std::map<std::string, double>{},
           py::arg("control") = std::vector<Vec3>{})
      .def("__call__", &BoundaryCurve::operator())
      .def("derivative", &BoundaryCurve::derivative)
      .def_property_readonly("name", [](const BoundaryCurve& c) { return c.descriptor().name; })
      .def_property_readonly("params", [](const BoundaryCurve& c) { return c.descriptor().params; });

  py::class_<ApproximateSurface>(m, "ApproximateSurface")
      .def("position", &ApproximateSurface::position)
      .def("dz", &ApproximateSurface::dz)
      .def("dilatation", [](const ApproximateSurface& s, Complex z) { return dilatation(s, z); })
      .def("mean_curvature", [](const ApproximateSurface& s, Complex z) { return mean_curvature(s, z); })
      .def("dirichlet_energy", [](const ApproximateSurface& s, int n_r, int n_theta) {
        return dirichlet_energy(s, QuadratureSpec{n_r, n_theta});
      }, py::arg("n_r") = 64, py::arg("n_theta") = 256);

  m.def("build_surface", [](const MfsBasis& b, const BoundaryCurve& c, const std::vector<double>& angles) {
    return build_surface(b, c, Configuration(angles));
  });
  m.def("energy", [](const MfsBasis& b, const BoundaryCurve& c, const std::vector<double>& angles, double rho) {
    return energy(b, c, Configuration(angles), rho);
  });
  m.def("gradient", [](const MfsBasis& b, const BoundaryCurve& c, const std::vector<double>& angles, double rho) {
    return gradient(b, c, Configuration(angles), rho);
  });
  m.def(
      "nesterov_run",
      [](const MfsBasis& b, const BoundaryCurve& c, const std::vector<double>& angles, double eta, int max_iters,
         double rho, double grad_tolerance, bool adaptive_step) {
        OptimizerSettings s;
        s.eta = eta;
        s.max_iters = max_iters;
        s.rho = rho;
        s.grad_tolerance = grad_tolerance;
        s.adaptive_step = adaptive_step;
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = nesterov_run(b, c, Configuration(angles), s);
        }
        return report_dict(r);
      },
      py::arg("basis"), py::arg("curve"), py::arg("initial"), py::arg("eta") = 1e-2, py::arg("max_iters") = 10000,
      py::arg("rho") = 0.87, py::arg("grad_tolerance") = 0.0, py::arg("adaptive_step") = false);

  m.def("equidistant", [](int n, double offset) { return to_vector(Configuration::equidistant(n, offset).angles()); },
        py::arg("n"), py::arg("offset") = 0.0);
  m.def("fourier_initial", [](int n, double s, int mode) { return to_vector(fourier_initial(n, s, mode).angles()); });
  m.def("random_initial", [](int n, std::uint64_t seed, int knots) {
    return to_vector(random_initial(n, seed, knots).angles());
  });
  m.def("classify_energies", [](const std::vector<double>& energies, int digits) {
    std::vector<SolveReport> reports(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) reports[i].dirichlet_energy = energies[i];
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : classify(reports, digits)) out.push_back(c.members);
    return out;
  });
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"mfsplateau"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
