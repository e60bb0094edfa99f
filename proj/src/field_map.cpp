#include "wgscat/field_map.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "wgscat/amplitudes.hpp"
#include "wgscat/reference.hpp"

namespace wgscat {

namespace {

// Per-mode interior solutions and face values in the shifted frame where the
// segment occupies [0, a] and the wave comes in from the left.  Right
// incidence is handled by mirroring the evaluation point, so only this one
// orientation is ever solved.
struct FaceData {
  double k = 0.0, b = 0.0, a = 0.0;
  double p0 = 0.0, varpi0 = 0.0;
  std::vector<int> n;
  std::vector<cdouble> w;
  std::vector<cdouble> ca, cb;  // interior coefficients, incidence included
  std::vector<bool> linear;     // degenerate interior: chi = ca + cb * x
  std::vector<cdouble> chi0, chia;
};

FaceData build_face_data(const Incidence& inc, const WaveguideSpec& spec,
                         int n_modes) {
  spec.validate();
  FaceData d;
  d.k = inc.k;
  d.b = spec.b;
  d.a = spec.a();
  d.p0 = inc.p0();
  d.varpi0 = inc.varpi0();
  const int N = n_modes > 0 ? n_modes : default_truncation(spec, inc.k);
  for (int n = 1; n <= N; ++n) {
    const cdouble cn = std::conj(phi_tilde(n, spec.b, d.p0));
    const cdouble wn = w_mode(n, spec, inc.k);
    const cdouble vpn = varpi_mode(n, spec, inc.k);
    d.n.push_back(n);
    d.w.push_back(wn);
    if (std::abs(vpn) < 1e-14 * inc.k) {
      // Grazing outside: the channel reflects totally and carries nothing.
      d.ca.push_back(0.0);
      d.cb.push_back(0.0);
      d.linear.push_back(false);
      d.chi0.push_back(0.0);
      d.chia.push_back(0.0);
      continue;
    }
    ref::Slab1D s;
    s.x_left = 0.0;
    s.x_right = d.a;
    s.wavevector_inside = wn;
    s.wavevector_outside = vpn;
    const ref::SlabScatter sol = ref::slab_scatter(s);
    const bool lin = std::abs(wn * d.a) <= 1e-8;  // matches the solver branch
    d.ca.push_back(cn * sol.alpha);
    d.cb.push_back(cn * sol.beta);
    d.linear.push_back(lin);
    if (lin) {
      d.chi0.push_back(cn * sol.alpha);
      d.chia.push_back(cn * (sol.alpha + sol.beta * d.a));
    } else {
      const cdouble E = std::exp(cdouble(0.0, 1.0) * wn * d.a);
      d.chi0.push_back(cn * (sol.alpha + sol.beta * E));
      d.chia.push_back(cn * (sol.alpha * E + sol.beta));
    }
  }
  return d;
}

cdouble face_density(const FaceData& d, const std::vector<cdouble>& face,
                     double p) {
  cdouble s = 0.0;
  for (std::size_t j = 0; j < face.size(); ++j)
    s += face[j] * phi_tilde(d.n[j], d.b, p);
  return s;
}

// Outgoing half-space field radiated by the face values.  The momentum-space
// form (1/2pi) int dp rho(p) e^{i varpi(p) dist + i p y} converges too slowly
// near the face, so it is folded into the equivalent boundary integral
//
//   psi(dist, y) = int_0^b f(y') (i k dist / 2r) H1(kr) dy',
//   r = sqrt(dist^2 + (y - y')^2),  H1 = Hankel of the first kind,
//
// whose kernel is the outgoing half-plane propagator of the face profile
// f(y') (it tends to the Poisson kernel as dist -> 0).  `dist` is the
// distance from the face, > 0 off the face.
cdouble smooth_radiation(const FaceData& d, const std::vector<cdouble>& face,
                         double dist, double y) {
  const double k = d.k;
  const double norm = std::sqrt(2.0 / d.b);
  auto kernel = [&](double yp) {
    cdouble f = 0.0;
    for (std::size_t j = 0; j < face.size(); ++j)
      f += face[j] * norm * std::sin(pi * d.n[j] * yp / d.b);
    const double r = std::hypot(dist, y - yp);
    const double z = k * r;
    const cdouble h1(std::cyl_bessel_j(1, z), std::cyl_neumann(1, z));
    return f * cdouble(0.0, 0.5 * k * dist / r) * h1;
  };
  // The kernel peaks (width ~ dist) where the face is closest.
  std::vector<double> splits;
  if (y > 0.0 && y < d.b) splits.push_back(y);
  return ref::integrate_split(kernel, 0.0, d.b, splits, 1e-10);
}

// Total field in the shifted frame.  Left of the segment: incident wave, its
// wall mirror, and the smooth reflected continuum; inside: the matched channel
// expansion (zero in the wall); right: the transmitted continuum.
cdouble psi_shifted(const FaceData& d, double X, double y) {
  if (X >= 0.0 && X <= d.a) {
    if (y <= 0.0 || y >= d.b) return 0.0;
    const cdouble i1(0.0, 1.0);
    cdouble sum = 0.0;
    const double norm = std::sqrt(2.0 / d.b);
    for (std::size_t j = 0; j < d.n.size(); ++j) {
      cdouble chi;
      if (d.linear[j])
        chi = d.ca[j] + d.cb[j] * X;
      else
        chi = d.ca[j] * std::exp(i1 * d.w[j] * X) +
              d.cb[j] * std::exp(-i1 * d.w[j] * (X - d.a));
      sum += chi * norm * std::sin(pi * d.n[j] * y / d.b);
    }
    return sum;
  }
  if (X < 0.0) {
    cdouble val = std::exp(cdouble(0.0, d.varpi0 * X + d.p0 * y)) -
                  std::exp(cdouble(0.0, -d.varpi0 * X + d.p0 * y));
    return val + smooth_radiation(d, d.chi0, -X, y);
  }
  return smooth_radiation(d, d.chia, X - d.a, y);
}

struct Frame {
  double a_face = 0.0;
  double sgn = 1.0;
  cdouble pre = 1.0;
};

Frame make_frame(const Incidence& inc, const WaveguideSpec& spec) {
  Frame f;
  if (inc.side == Side::left) {
    f.a_face = spec.a_minus;
    f.sgn = 1.0;
    f.pre = std::exp(cdouble(0.0, inc.varpi0() * spec.a_minus));
  } else {
    f.a_face = spec.a_plus;
    f.sgn = -1.0;
    f.pre = std::exp(cdouble(0.0, -inc.varpi0() * spec.a_plus));
  }
  return f;
}

}  // namespace

FieldMapResult field_map(const Incidence& inc, const WaveguideSpec& spec,
                         const FieldRequest& req, int n_modes) {
  if (req.nx < 1 || req.ny < 1)
    throw std::invalid_argument("field_map: grid must have at least one point");
  if (req.x_max < req.x_min || req.y_max < req.y_min)
    throw std::invalid_argument("field_map: box extents reversed");
  const FaceData data = build_face_data(inc, spec, n_modes);
  const Frame fr = make_frame(inc, spec);
  FieldMapResult out;
  out.xs.resize(req.nx);
  out.ys.resize(req.ny);
  for (int i = 0; i < req.nx; ++i)
    out.xs[i] = req.nx == 1 ? req.x_min
                            : req.x_min + (req.x_max - req.x_min) * i /
                                              (req.nx - 1);
  for (int j = 0; j < req.ny; ++j)
    out.ys[j] = req.ny == 1 ? req.y_min
                            : req.y_min + (req.y_max - req.y_min) * j /
                                              (req.ny - 1);
  out.values.resize(static_cast<std::size_t>(req.nx) * req.ny);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < req.nx; ++i) {
    const double X = fr.sgn * (out.xs[i] - fr.a_face);
    for (int j = 0; j < req.ny; ++j) {
      cdouble v;
      try {
        v = fr.pre * psi_shifted(data, X, out.ys[j]);
      } catch (const std::exception&) {
        v = cdouble(nan, nan);
      }
      out.values[static_cast<std::size_t>(i) * req.ny + j] = v;
    }
  }
  out.trunc.used = static_cast<int>(data.n.size());
  out.trunc.adaptive = n_modes == 0;
  return out;
}

cdouble field_at(double x, double y, const Incidence& inc,
                 const WaveguideSpec& spec, int n_modes) {
  const FaceData data = build_face_data(inc, spec, n_modes);
  const Frame fr = make_frame(inc, spec);
  return fr.pre * psi_shifted(data, fr.sgn * (x - fr.a_face), y);
}

CoefficientSet coefficient_functions(const Incidence& inc,
                                     const WaveguideSpec& spec, int n_modes) {
  auto data = std::make_shared<const FaceData>(
      build_face_data(inc, spec, n_modes));
  const cdouble i1(0.0, 1.0);
  const double k = inc.k;
  const double vp0 = inc.varpi0();
  const double p0 = inc.p0();

  // Smooth plane-wave density referenced to x = 0:
  //   pre * e^{i sign_exp varpi(p) a_face} * sum_n chi_n(face) phi_tilde_n(p) / 2pi
  auto make_smooth = [data, k](cdouble pre, double sign_exp, double a_face,
                               bool from_entry_face, bool project) {
    return [data, k, pre, sign_exp, a_face, from_entry_face,
            project](double p) -> cdouble {
      if (project && std::abs(p) >= k) return 0.0;
      const cdouble vp = varpi(p, k);
      const auto& face = from_entry_face ? data->chi0 : data->chia;
      return pre * std::exp(cdouble(0.0, 1.0) * sign_exp * vp * a_face) *
             face_density(*data, face, p) / (2.0 * pi);
    };
  };
  auto zero = [](double) -> cdouble { return 0.0; };

  CoefficientSet out;
  if (inc.side == Side::left) {
    const cdouble pre = std::exp(i1 * vp0 * spec.a_minus);
    out.A_minus.delta = {p0, 1.0};
    out.A_minus.smooth = zero;
    out.B_minus.delta = {p0, -std::exp(2.0 * i1 * vp0 * spec.a_minus)};
    out.B_minus.smooth = make_smooth(pre, 1.0, spec.a_minus, true, true);
    out.A_plus.smooth = make_smooth(pre, -1.0, spec.a_plus, false, true);
    out.B_plus.smooth = zero;
    out.script_B_minus.delta = out.B_minus.delta;
    out.script_B_minus.smooth = make_smooth(pre, 1.0, spec.a_minus, true, false);
    out.script_A_plus.smooth = make_smooth(pre, -1.0, spec.a_plus, false, false);
  } else {
    const cdouble pre = std::exp(-i1 * vp0 * spec.a_plus);
    out.B_plus.delta = {p0, 1.0};
    out.B_plus.smooth = zero;
    out.A_plus.delta = {p0, -std::exp(-2.0 * i1 * vp0 * spec.a_plus)};
    out.A_plus.smooth = make_smooth(pre, -1.0, spec.a_plus, true, true);
    out.B_minus.smooth = make_smooth(pre, 1.0, spec.a_minus, false, true);
    out.A_minus.smooth = zero;
    out.script_A_plus.delta = out.A_plus.delta;
    out.script_A_plus.smooth = make_smooth(pre, -1.0, spec.a_plus, true, false);
    out.script_B_minus.smooth = make_smooth(pre, 1.0, spec.a_minus, false, false);
  }
  return out;
}

}  // namespace wgscat
