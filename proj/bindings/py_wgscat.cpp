#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wgscat/amplitudes.hpp"
#include "wgscat/field_map.hpp"
#include "wgscat/operators.hpp"

namespace py = pybind11;
using namespace wgscat;

PYBIND11_MODULE(wgscat, m) {
  m.doc() =
      "Scattering observables for a potential confined between two parallel "
      "lines with hard transverse walls";

  py::enum_<Side>(m, "Side")
      .value("left", Side::left)
      .value("right", Side::right);

  py::enum_<ModeKind>(m, "ModeKind")
      .value("propagating", ModeKind::propagating)
      .value("evanescent", ModeKind::evanescent)
      .value("exceptional", ModeKind::exceptional);

  py::enum_<Regime>(m, "Regime")
      .value("empty", Regime::empty)
      .value("exceptional", Regime::exceptional)
      .value("filter", Regime::filter)
      .value("large_a_propagating", Regime::large_a_propagating)
      .value("generic", Regime::generic);

  py::class_<WaveguideSpec>(m, "WaveguideSpec")
      .def(py::init([](double b, cdouble V0, double a_minus, double a_plus) {
             WaveguideSpec s{b, V0, a_minus, a_plus};
             s.validate();
             return s;
           }),
           py::arg("b") = 1.0, py::arg("V0") = cdouble(0.0),
           py::arg("a_minus") = 0.0, py::arg("a_plus") = 1.0)
      .def_readwrite("b", &WaveguideSpec::b)
      .def_readwrite("V0", &WaveguideSpec::V0)
      .def_readwrite("a_minus", &WaveguideSpec::a_minus)
      .def_readwrite("a_plus", &WaveguideSpec::a_plus)
      .def("a", &WaveguideSpec::a)
      .def("validate", &WaveguideSpec::validate)
      .def("__repr__", [](const WaveguideSpec& s) {
        std::ostringstream os;
        os << "WaveguideSpec(b=" << s.b << ", V0=(" << s.V0.real() << "+"
           << s.V0.imag() << "j), a_minus=" << s.a_minus
           << ", a_plus=" << s.a_plus << ")";
        return os.str();
      });

  py::class_<Incidence>(m, "Incidence")
      .def(py::init(&Incidence::make), py::arg("k"), py::arg("theta0"),
           py::arg("side") = Side::left)
      .def_readonly("k", &Incidence::k)
      .def_readonly("theta0", &Incidence::theta0)
      .def_readonly("side", &Incidence::side)
      .def("p0", &Incidence::p0)
      .def("varpi0", &Incidence::varpi0)
      .def("cos_theta0_signed", &Incidence::cos_theta0_signed);

  // dispersion ---------------------------------------------------------------
  m.def("branched_root", &branched_root, py::arg("z"),
        "Principal branch: Im >= 0, and Re >= 0 on the real axis");
  m.def("varpi", &varpi, py::arg("p"), py::arg("k"),
        "Longitudinal wavenumber sqrt(k^2 - p^2) on the principal branch");
  m.def("mode_energy", &mode_energy, py::arg("n"), py::arg("spec"));
  m.def("w_mode", &w_mode, py::arg("n"), py::arg("spec"), py::arg("k"));
  m.def("varpi_mode", &varpi_mode, py::arg("n"), py::arg("spec"),
        py::arg("k"));
  m.def("n_star", &n_star, py::arg("k"), py::arg("spec"),
        "Number of channel modes propagating inside the filled segment");
  m.def("exceptional_wavenumbers", &exceptional_wavenumbers, py::arg("spec"),
        py::arg("k_min"), py::arg("k_max"),
        "(k_n, n) pairs where the per-mode generator becomes defective");
  m.def("is_exceptional", &is_exceptional, py::arg("k"), py::arg("spec"),
        py::arg("rel_tol") = 1e-9);

  // transverse modes ---------------------------------------------------------
  m.def("phi_tilde", &phi_tilde, py::arg("n"), py::arg("b"), py::arg("p"),
        "Momentum profile of channel mode n over [0, b]");
  m.def("lambda_kernel", &lambda_kernel, py::arg("p"), py::arg("p0"),
        py::arg("b"), "Strip overlap kernel: integral_0^b e^{i(p0-p)y} dy");

  py::class_<BoundCheck>(m, "BoundCheck")
      .def_readonly("lhs", &BoundCheck::lhs)
      .def_readonly("rhs", &BoundCheck::rhs)
      .def_readonly("holds", &BoundCheck::holds);
  m.def("evanescent_bound_check", &evanescent_bound_check, py::arg("n"),
        py::arg("spec"), py::arg("k"));

  py::class_<EvanescentGap>(m, "EvanescentGap")
      .def_readonly("n_star", &EvanescentGap::n_star)
      .def_readonly("eta", &EvanescentGap::eta)
      .def_readonly("bound", &EvanescentGap::bound)
      .def_readonly("min_awn", &EvanescentGap::min_awn)
      .def_readonly("holds", &EvanescentGap::holds);
  m.def("evanescent_gap", &evanescent_gap, py::arg("spec"), py::arg("k"));

  // per-mode machinery -------------------------------------------------------
  py::class_<PerModeCoefficients>(m, "PerModeCoefficients")
      .def_readonly("n", &PerModeCoefficients::n)
      .def_readonly("c_plus", &PerModeCoefficients::c_plus)
      .def_readonly("c_minus", &PerModeCoefficients::c_minus)
      .def_readonly("t_n", &PerModeCoefficients::t_n)
      .def_readonly("w_n", &PerModeCoefficients::w_n)
      .def_readonly("varpi_n", &PerModeCoefficients::varpi_n)
      .def_readonly("kind", &PerModeCoefficients::kind);
  m.def("per_mode_coefficients", &per_mode_coefficients, py::arg("n"),
        py::arg("spec"), py::arg("k"), py::arg("ep_window") = 1e-4);
  m.def("coefficient_set", &coefficient_set, py::arg("spec"), py::arg("k"),
        py::arg("N"));
  m.def("default_truncation", &default_truncation, py::arg("spec"),
        py::arg("k"));

  m.def(
      "mode_generator",
      [](int n, const WaveguideSpec& s, double k) -> Eigen::Matrix2cd {
        return mode_generator(n, s, k);
      },
      py::arg("n"), py::arg("spec"), py::arg("k"),
      "Two-component evolution generator of mode n (2x2, traceless)");
  m.def(
      "propagator_mode",
      [](int n, const WaveguideSpec& s, double k, double x) -> Eigen::Matrix2cd {
        return propagator_mode(n, s, k, x);
      },
      py::arg("n"), py::arg("spec"), py::arg("k"), py::arg("x"),
      "Closed-form exp(-i x H_n), entire in w_n^2");
  m.def(
      "transfer_entries_mode",
      [](int n, const WaveguideSpec& s, double k) -> Eigen::Matrix2cd {
        return transfer_entries_mode(n, s, k);
      },
      py::arg("n"), py::arg("spec"), py::arg("k"),
      "Unimodular transfer map across the filled segment, referenced to x=0");
  m.def(
      "interior_s_matrix",
      [](int n, const WaveguideSpec& s, double k) -> Eigen::Matrix2cd {
        return interior_s_matrix(n, s, k);
      },
      py::arg("n"), py::arg("spec"), py::arg("k"));

  py::class_<InjectionResult>(m, "InjectionResult")
      .def_readonly("transmitted", &InjectionResult::transmitted)
      .def_readonly("reflected", &InjectionResult::reflected)
      .def_readonly("exceptional", &InjectionResult::exceptional);
  m.def("mode_injection", &mode_injection, py::arg("n"), py::arg("spec"),
        py::arg("k"));

  // kernels and far field ----------------------------------------------------
  py::class_<TruncationInfo>(m, "TruncationInfo")
      .def_readonly("used", &TruncationInfo::used)
      .def_readonly("tail", &TruncationInfo::tail)
      .def_readonly("adaptive", &TruncationInfo::adaptive);

  m.def(
      "gamma_kernel",
      [](double p, double p0, const WaveguideSpec& s, double k, int n_modes) {
        const KernelPoint kp = gamma_kernel(p, p0, s, k, n_modes);
        return std::make_pair(kp.gamma_plus, kp.gamma_minus);
      },
      py::arg("p"), py::arg("p0"), py::arg("spec"), py::arg("k"),
      py::arg("n_modes") = 0,
      "(Gamma_+, Gamma_-) at one momentum pair; |p|, |p0| < k");

  py::class_<KernelEvaluator>(m, "KernelEvaluator")
      .def(py::init<const WaveguideSpec&, double, int>(), py::arg("spec"),
           py::arg("k"), py::arg("n_override") = 0)
      .def(
          "eval",
          [](KernelEvaluator& ev, double p, double p0) {
            const KernelPoint kp = ev.eval(p, p0);
            return std::make_pair(kp.gamma_plus, kp.gamma_minus);
          },
          py::arg("p"), py::arg("p0"))
      .def("max_used", &KernelEvaluator::max_used);

  py::class_<DeltaTerm>(m, "DeltaTerm")
      .def_readonly("theta_sing", &DeltaTerm::theta_sing)
      .def_readonly("coeff", &DeltaTerm::coeff);

  py::class_<AmplitudeWithDelta>(m, "AmplitudeWithDelta")
      .def_readonly("smooth", &AmplitudeWithDelta::smooth)
      .def_readonly("delta", &AmplitudeWithDelta::delta)
      .def_readonly("theta", &AmplitudeWithDelta::theta);

  py::class_<AmplitudePair>(m, "AmplitudePair")
      .def_readonly("R", &AmplitudePair::R)
      .def_readonly("T", &AmplitudePair::T)
      .def_readonly("trunc", &AmplitudePair::trunc);

  m.def("amplitudes", &amplitudes, py::arg("incidence"), py::arg("spec"),
        py::arg("theta_fwd_grid"), py::arg("n_modes") = 0,
        "Smooth R and T plus delta descriptors over forward-sector angles");

  py::class_<FarFieldPoint>(m, "FarFieldPoint")
      .def_readonly("reflection_smooth", &FarFieldPoint::reflection_smooth)
      .def_readonly("transmission_smooth", &FarFieldPoint::transmission_smooth)
      .def_readonly("theta_reflect", &FarFieldPoint::theta_reflect)
      .def_readonly("theta_transmit", &FarFieldPoint::theta_transmit);
  m.def("far_field", &far_field, py::arg("theta_fwd"), py::arg("incidence"),
        py::arg("spec"), py::arg("kernel"));

  m.def("delta_descriptors", &delta_descriptors, py::arg("incidence"),
        py::arg("spec"));

  // regimes ------------------------------------------------------------------
  py::class_<RegimeReport>(m, "RegimeReport")
      .def_readonly("regime", &RegimeReport::regime)
      .def_readonly("n_star", &RegimeReport::n_star)
      .def_readonly("exceptional", &RegimeReport::exceptional)
      .def_readonly("eta", &RegimeReport::eta)
      .def_readonly("a_eta_over_b", &RegimeReport::a_eta_over_b)
      .def_readonly("min_evanescent_awn", &RegimeReport::min_evanescent_awn)
      .def_property_readonly("name", [](const RegimeReport& r) {
        return std::string(regime_name(r.regime));
      });
  m.def("classify_regime", &classify_regime, py::arg("spec"), py::arg("k"));

  // field maps ---------------------------------------------------------------
  py::class_<FieldRequest>(m, "FieldRequest")
      .def(py::init([](double x_min, double x_max, int nx, double y_min,
                       double y_max, int ny) {
             return FieldRequest{x_min, x_max, nx, y_min, y_max, ny};
           }),
           py::arg("x_min") = -1.0, py::arg("x_max") = 1.0,
           py::arg("nx") = 41, py::arg("y_min") = 0.0, py::arg("y_max") = 1.0,
           py::arg("ny") = 41)
      .def_readwrite("x_min", &FieldRequest::x_min)
      .def_readwrite("x_max", &FieldRequest::x_max)
      .def_readwrite("nx", &FieldRequest::nx)
      .def_readwrite("y_min", &FieldRequest::y_min)
      .def_readwrite("y_max", &FieldRequest::y_max)
      .def_readwrite("ny", &FieldRequest::ny);

  py::class_<FieldMapResult>(m, "FieldMapResult")
      .def_readonly("xs", &FieldMapResult::xs)
      .def_readonly("ys", &FieldMapResult::ys)
      .def_readonly("trunc", &FieldMapResult::trunc)
      .def_property_readonly(
          "values",
          [](const FieldMapResult& r) {
            // (nx, ny) complex array, y on the inner axis
            const py::ssize_t nx = static_cast<py::ssize_t>(r.xs.size());
            const py::ssize_t ny = static_cast<py::ssize_t>(r.ys.size());
            py::array_t<cdouble> out({nx, ny});
            std::copy(r.values.begin(), r.values.end(),
                      out.mutable_data());
            return out;
          })
      .def("at", &FieldMapResult::at, py::arg("ix"), py::arg("iy"));

  m.def("field_map", &field_map, py::arg("incidence"), py::arg("spec"),
        py::arg("request"), py::arg("n_modes") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("field_at", &field_at, py::arg("x"), py::arg("y"),
        py::arg("incidence"), py::arg("spec"), py::arg("n_modes") = 0);
}
