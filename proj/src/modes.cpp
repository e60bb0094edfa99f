#include "wgscat/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace wgscat {

namespace {

// (e^{-iu} - 1) / (-iu), series for small |u|.
cdouble expm1_ratio(double u) {
  if (std::abs(u) < 1e-4) {
    const cdouble iu(0.0, u);
    return 1.0 - iu / 2.0 - u * u / 6.0 + iu * u * u / 24.0 +
           u * u * u * u / 120.0;
  }
  return (std::exp(cdouble(0.0, -u)) - 1.0) / cdouble(0.0, -u);
}

}  // namespace

ModeRecord mode_record(int n, const WaveguideSpec& spec, double k,
                       double ep_window) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  ModeRecord rec;
  rec.n = n;
  rec.E_n = mode_energy(n, spec);
  rec.w_n = w_from_energy(rec.E_n, k);
  rec.varpi_n = varpi_mode(n, spec, k);
  if (std::abs(spec.a() * rec.w_n) < ep_window)
    rec.kind = ModeKind::exceptional;
  else if (k * k - rec.E_n.real() > 0.0)
    rec.kind = ModeKind::propagating;
  else
    rec.kind = ModeKind::evanescent;
  return rec;
}

cdouble phi_tilde(int n, double b, double p) {
  const double c = pi * n;
  const double u = b * p - c;  // removable zero at p = +pi n / b
  const double v = b * p + c;  // removable zero at p = -pi n / b
  const double amp = c * std::sqrt(2.0 * b);
  if (std::abs(u) < 1e-4) return amp * cdouble(0.0, -1.0) * expm1_ratio(u) / v;
  if (std::abs(v) < 1e-4)
    // e^{-i(bp - pi n)} = e^{-iv} e^{2 pi i n} = e^{-iv}
    return amp * cdouble(0.0, -1.0) * expm1_ratio(v) / (v - 2.0 * c);
  return amp * (std::exp(cdouble(0.0, -u)) - 1.0) / (u * v);
}

cdouble lambda_kernel(double p, double p0, double b) {
  const double u = (p0 - p) * b;
  // integral_0^b e^{i(p0-p)y} dy = b (e^{iu}-1)/(iu); reuse the series via
  // conjugation symmetry.
  return b * std::conj(expm1_ratio(u));
}

BoundCheck evanescent_bound_check(int n, const WaveguideSpec& spec, double k) {
  if (spec.V0.imag() != 0.0)
    throw std::domain_error("evanescent bound is stated for real V0");
  const double v0 = spec.V0.real();
  const double pb = pi / spec.b;
  if (!(k * k >= pb * pb + v0))
    throw std::domain_error("evanescent bound requires k^2 >= (pi/b)^2 + V0");
  const int ns = n_star(k, spec);
  if (n <= ns) throw std::domain_error("evanescent bound requires n > n_star");
  const double xi = (spec.b / pi) * std::sqrt(k * k - v0);
  double eta_sq = ns + 1 - xi;
  if (eta_sq > 1.0) eta_sq = 1.0;
  if (!(eta_sq > 0.0))
    throw std::domain_error("eta must be positive; inconsistent n_star");
  const double eta = std::sqrt(eta_sq);
  BoundCheck out;
  out.lhs = spec.a() * std::abs(w_mode(n, spec, k));
  out.rhs = std::sqrt(2.0) * pi * spec.a() * eta / spec.b;
  out.holds = out.lhs > out.rhs;
  return out;
}

EvanescentGap evanescent_gap(const WaveguideSpec& spec, double k) {
  EvanescentGap gap;
  gap.n_star = n_star(k, spec);
  const double v0 = spec.V0.real();
  const double disc = k * k - v0;
  double eta_sq = 1.0;
  if (disc > 0.0) {
    eta_sq = gap.n_star + 1 - (spec.b / pi) * std::sqrt(disc);
    if (eta_sq > 1.0) eta_sq = 1.0;
    if (eta_sq < 0.0) eta_sq = 0.0;
  }
  gap.eta = std::sqrt(eta_sq);
  gap.bound = std::sqrt(2.0) * pi * spec.a() * gap.eta / spec.b;
  gap.min_awn = spec.a() * std::abs(w_mode(gap.n_star + 1, spec, k));
  gap.holds = gap.min_awn > gap.bound;
  return gap;
}

}  // namespace wgscat
