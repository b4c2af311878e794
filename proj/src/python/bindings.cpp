// Python bindings: qbm._core
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbm/decoherence.hpp"
#include "qbm/errors.hpp"
#include "qbm/validation.hpp"

namespace py = pybind11;
using namespace qbm;

namespace {

py::dict curve_dict(const CurveSeries& c) {
    py::dict d;
    d["t"] = c.times;
    d["magnitude"] = c.magnitude;
    d["phase"] = c.phase;
    d["log_magnitude"] = c.log_magnitude;
    d["lambda1"] = c.lambda1;
    d["lambda2"] = c.lambda2;
    d["d1"] = c.d1;
    d["d2"] = c.d2;
    d["method"] = c.method;
    d["failed"] = std::vector<bool>(c.failed.begin(), c.failed.end());
    d["clamped"] = std::vector<bool>(c.clamped.begin(), c.clamped.end());
    d["message"] = c.message;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decoherence of a charged oscillator in a magnetic field coupled to a bosonic bath";

    auto base = py::register_exception<Error>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NotAvailableError>(m, "NotAvailableError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Cutoff>(m, "Cutoff")
        .value("Abrupt", Cutoff::Abrupt)
        .value("DrudeLorentz", Cutoff::DrudeLorentz)
        .value("Exponential", Cutoff::Exponential);
    py::enum_<Regime>(m, "Regime")
        .value("Exact", Regime::Exact)
        .value("HighTemperature", Regime::HighTemperature)
        .value("LowTemperature", Regime::LowTemperature);
    py::enum_<CurveMethod>(m, "CurveMethod")
        .value("Quadrature", CurveMethod::Quadrature)
        .value("ClosedFormWhereValid", CurveMethod::ClosedFormWhereValid);
    py::enum_<FormVariant>(m, "FormVariant")
        .value("AsPrinted", FormVariant::AsPrinted)
        .value("Corrected", FormVariant::Corrected);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double m_, double omega0, double omega_c, double gamma, double hbar, double omega_th) {
                 SystemParams s{m_, omega0, omega_c, gamma, hbar, omega_th};
                 s.validate();
                 return s;
             }),
             py::arg("m") = 1.0, py::arg("omega0") = 10.0, py::arg("omega_c") = 1.0, py::arg("gamma") = 1.0,
             py::arg("hbar") = 1.0, py::arg("omega_th") = 0.0)
        .def_readwrite("m", &SystemParams::m)
        .def_readwrite("omega0", &SystemParams::omega0)
        .def_readwrite("omega_c", &SystemParams::omega_c)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("hbar", &SystemParams::hbar)
        .def_readwrite("omega_th", &SystemParams::omega_th);

    py::class_<SpectralDensity>(m, "SpectralDensity")
        .def(py::init([](double s, Cutoff c, double lambda, double gamma) {
                 SpectralDensity sd{s, c, lambda, gamma};
                 sd.validate();
                 return sd;
             }),
             py::arg("s") = 1.0, py::arg("cutoff") = Cutoff::Exponential, py::arg("cutoff_frequency") = 1e3,
             py::arg("gamma") = 1.0)
        .def_readwrite("s", &SpectralDensity::s)
        .def_readwrite("cutoff", &SpectralDensity::cutoff)
        .def_readwrite("cutoff_frequency", &SpectralDensity::lambda)
        .def_readwrite("gamma", &SpectralDensity::gamma)
        .def("__call__", [](const SpectralDensity& sd, double w) { return spectral_density(sd, w); });

    py::class_<ThermalRegime>(m, "ThermalRegime")
        .def(py::init([](Regime k, double omega_th) {
                 ThermalRegime r{k, omega_th};
                 r.validate();
                 return r;
             }),
             py::arg("kind") = Regime::LowTemperature, py::arg("omega_th") = 0.0)
        .def_readwrite("kind", &ThermalRegime::kind)
        .def_readwrite("omega_th", &ThermalRegime::omega_th);

    py::class_<ModeConstants>(m, "ModeConstants")
        .def_readonly("a_prime", &ModeConstants::a_prime)
        .def_readonly("b_prime", &ModeConstants::b_prime)
        .def_readonly("m_coef", &ModeConstants::m_coef)
        .def_readonly("p_coef", &ModeConstants::p_coef)
        .def_readonly("g_coef", &ModeConstants::g_coef)
        .def_readonly("root", &ModeConstants::root);

    m.def("mode_constants", &mode_constants, py::arg("sys"));
    m.def("noise_kernel", &noise_kernel_quadrature, py::arg("sd"), py::arg("regime"), py::arg("tau"),
          "nu(tau) by quadrature of its defining integral");
    m.def("noise_kernel_closed", &noise_kernel_closed_value, py::arg("sd"), py::arg("regime"), py::arg("tau"));
    m.def("dissipation_kernel", &dissipation_kernel_quadrature, py::arg("sd"), py::arg("tau"));

    m.def(
        "lambdas",
        [](const SystemParams& s, const SpectralDensity& sd, const ThermalRegime& r, double t, double rel) {
            const LambdaPair p = lambda_quadrature(s, sd, r, t, rel);
            return py::make_tuple(p.lambda1, p.lambda2);
        },
        py::arg("sys"), py::arg("sd"), py::arg("regime"), py::arg("t"), py::arg("rel") = 1e-7,
        "(lambda1, lambda2) at time t by quadrature");
    m.def(
        "lambdas_closed",
        [](const SystemParams& s, const SpectralDensity& sd, const ThermalRegime& r, double t, FormVariant v) {
            const LambdaPair p = lambda_closed(s, sd, r, t, v);
            return py::make_tuple(p.lambda1, p.lambda2);
        },
        py::arg("sys"), py::arg("sd"), py::arg("regime"), py::arg("t"), py::arg("variant") = FormVariant::AsPrinted);

    m.def(
        "curve",
        [](const SystemParams& s, const SpectralDensity& sd, const ThermalRegime& r, double dx, double dy,
           const std::vector<double>& grid, CurveMethod method, double rel) {
            CurveSeries c;
            {
                py::gil_scoped_release release;
                c = curve(s, sd, r, {dx, dy}, grid, method, CumulativeOptions{rel});
            }
            return curve_dict(c);
        },
        py::arg("sys"), py::arg("sd"), py::arg("regime"), py::arg("dx") = 1.0, py::arg("dy") = 1.0, py::arg("grid"),
        py::arg("method") = CurveMethod::Quadrature, py::arg("rel") = 1e-8);
    m.def("default_grid", &default_grid, py::arg("sd"), py::arg("points") = 200);
    m.def("log_grid", &log_grid, py::arg("t_min"), py::arg("t_max"), py::arg("points"));

    m.def(
        "hightemp_rate", [](const SystemParams& s, double dx, double dy) { return hightemp_rate(s, {dx, dy}); },
        py::arg("sys"), py::arg("dx") = 1.0, py::arg("dy") = 1.0);
    m.def(
        "lowtemp_powerlaw",
        [](const SystemParams& s, const SpectralDensity& sd, double dx, double dy) {
            const PowerLaw p = lowtemp_powerlaw(s, sd, {dx, dy});
            return py::make_tuple(p.exponent, p.log_c);
        },
        py::arg("sys"), py::arg("sd"), py::arg("dx") = 1.0, py::arg("dy") = 1.0, "(exponent, log c)");

    m.def("findings", [] {
        py::list out;
        for (const Finding& f : documented_findings()) {
            py::dict d;
            d["id"] = f.id;
            d["cutoff"] = f.cutoff;
            d["regime"] = f.regime;
            d["component"] = f.component;
            d["description"] = f.description;
            out.append(d);
        }
        return out;
    });

    m.def(
        "validation_report",
        [](const std::string& level) {
            const ValidationLevel l = validation_level_from_string(level);
            ValidationReport r;
            {
                py::gil_scoped_release release;
                r = run_validation(l);
            }
            return r.to_json().dump();
        },
        py::arg("level") = "fast", "JSON text of the validation report");
}
