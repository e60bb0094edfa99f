#include "wgscat/mode_block.hpp"

#include <cmath>
#include <stdexcept>

namespace wgscat {

Matrix2 kmat() {
  Matrix2 m;
  m << 1.0, 1.0, -1.0, -1.0;
  return m;
}

Matrix2 kmat_t() {
  Matrix2 m;
  m << 1.0, -1.0, 1.0, -1.0;
  return m;
}

Matrix2 sigma1() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2 sigma3() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

namespace {

cdouble checked_varpi(int n, const WaveguideSpec& spec, double k) {
  const cdouble vp = varpi_mode(n, spec, k);
  if (std::abs(vp) < grazing_rel_tol * k)
    throw std::domain_error("grazing mode: |varpi_n| < 1e-12 k");
  return vp;
}

// sin(w x)/w, safe at w = 0.
cdouble sinc_factor(double x, cdouble w) {
  const cdouble arg = w * x;
  if (std::abs(arg) < 1e-4) {
    const cdouble a2 = arg * arg;
    return x * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
  }
  return std::sin(arg) / w;
}

}  // namespace

Matrix2 mode_generator(int n, const WaveguideSpec& spec, double k) {
  const cdouble vp = checked_varpi(n, spec, k);
  return (spec.V0 / (2.0 * vp)) * kmat() - vp * sigma3();
}

BiorthoPair biortho_eigensystem(int n, const WaveguideSpec& spec, double k) {
  const cdouble vp = checked_varpi(n, spec, k);
  const cdouble w = w_mode(n, spec, k);
  if (std::abs(w) * spec.a() < 1e-8)
    throw std::domain_error(
        "exceptional point: eigensystem defective, use jordan_block_system");
  BiorthoPair out;
  out.w = w;
  out.psi_plus << (vp - w) / (2.0 * k), (vp + w) / (2.0 * k);
  out.psi_minus << (vp + w) / (2.0 * k), (vp - w) / (2.0 * k);
  const cdouble iv = std::conj(1.0 / vp);
  const cdouble iw = std::conj(1.0 / w);
  out.phi_plus << (k / 2.0) * (iv - iw), (k / 2.0) * (iv + iw);
  out.phi_minus << (k / 2.0) * (iv + iw), (k / 2.0) * (iv - iw);
  return out;
}

JordanSystem jordan_block_system(int n, const WaveguideSpec& spec, double k,
                                 double ep_window) {
  const cdouble vp = checked_varpi(n, spec, k);
  const cdouble w = w_mode(n, spec, k);
  if (!(std::abs(spec.a() * w) < ep_window))
    throw std::domain_error("jordan_block_system: mode is not at a degeneracy");
  JordanSystem out;
  out.psi_plus << vp / (2.0 * k), vp / (2.0 * k);
  out.psi_minus << -0.5, 0.5;
  const cdouble iv = std::conj(1.0 / vp);
  out.phi_plus << k * iv, k * iv;
  out.phi_minus << -1.0, 1.0;
  return out;
}

Matrix2 propagator_mode(double x, cdouble varpi_n, cdouble w_n) {
  const cdouble C = std::cos(w_n * x);
  const cdouble S = sinc_factor(x, w_n);
  const cdouble ih(0.0, 0.5);
  return C * Matrix2::Identity() +
         ih * ((w_n * w_n * S / varpi_n) * kmat() + (varpi_n * S) * kmat_t());
}

Matrix2 propagator_mode(int n, const WaveguideSpec& spec, double k, double x) {
  return propagator_mode(x, checked_varpi(n, spec, k), w_mode(n, spec, k));
}

Matrix2 transfer_entries_mode(int n, const WaveguideSpec& spec, double k) {
  const cdouble vp = checked_varpi(n, spec, k);
  const cdouble w = w_mode(n, spec, k);
  const double a = spec.a();
  const double sig = spec.a_plus + spec.a_minus;
  const cdouble C = std::cos(w * a);
  const cdouble S = sinc_factor(a, w);
  const cdouble f = w * w * S / vp;  // K coefficient
  const cdouble g = vp * S;         // K^T coefficient
  const cdouble ih(0.0, 0.5);
  const cdouble i1(0.0, 1.0);
  Matrix2 m;
  m(0, 0) = std::exp(-i1 * a * vp) * (C + ih * (f + g));
  m(0, 1) = std::exp(-i1 * sig * vp) * ih * (f - g);
  m(1, 0) = -std::exp(i1 * sig * vp) * ih * (f - g);
  m(1, 1) = std::exp(i1 * a * vp) * (C - ih * (f + g));
  return m;
}

Matrix2 q_intertwiner(cdouble varpi_n, cdouble w_n) {
  Matrix2 m;
  m << w_n - varpi_n, w_n + varpi_n, w_n + varpi_n, w_n - varpi_n;
  return m;
}

QIntertwiner q_intertwiner_mode(int n, const WaveguideSpec& spec, double k) {
  const cdouble vp = checked_varpi(n, spec, k);
  const cdouble w = w_mode(n, spec, k);
  QIntertwiner out;
  out.Q = q_intertwiner(vp, w);
  const double qn = out.Q.norm();
  for (double x : {0.1 * spec.a(), spec.a(), 3.0 * spec.a()}) {
    const Matrix2 P = propagator_mode(x, vp, w);
    Matrix2 diag;
    const cdouble i1(0.0, 1.0);
    diag << std::exp(-i1 * x * w), 0.0, 0.0, std::exp(i1 * x * w);
    // Normalize by the size of the products being compared; for evanescent
    // modes at large x both sides grow like e^{|w|x} and the absolute
    // difference saturates at rounding of that scale.
    const double r = (out.Q * P - diag * out.Q).norm() / (qn * P.norm());
    if (r > out.residual) out.residual = r;
  }
  return out;
}

}  // namespace wgscat
