#include "wgscat/dispersion.hpp"

#include <cmath>
#include <stdexcept>

namespace wgscat {

cdouble branched_root(cdouble z) {
  cdouble w = std::sqrt(z);
  if (w.imag() < 0.0) w = -w;
  if (w.imag() == 0.0 && w.real() < 0.0) w = -w;
  return w;
}

cdouble varpi(double p, double k) {
  return branched_root(cdouble(k * k - p * p, 0.0));
}

void WaveguideSpec::validate() const {
  if (!(b > 0.0)) throw std::invalid_argument("waveguide width b must be positive");
  if (!(a_plus > a_minus))
    throw std::invalid_argument("interface order requires a_plus > a_minus");
  if (!std::isfinite(b) || !std::isfinite(a_minus) || !std::isfinite(a_plus) ||
      !std::isfinite(V0.real()) || !std::isfinite(V0.imag()))
    throw std::invalid_argument("waveguide parameters must be finite");
}

double Incidence::p0() const { return k * std::sin(theta0); }
double Incidence::varpi0() const { return k * std::cos(theta0); }

double Incidence::cos_theta0_signed() const {
  const double c = std::cos(theta0);
  return side == Side::left ? c : -c;
}

Incidence Incidence::make(double k, double theta0, Side side) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("incident wavenumber k must be positive");
  if (!(std::abs(std::cos(theta0)) >= 1e-6))
    throw std::invalid_argument("grazing incidence: |cos(theta0)| < 1e-6");
  return Incidence{k, theta0, side};
}

cdouble mode_energy(int n, const WaveguideSpec& spec) {
  const double t = pi * n / spec.b;
  return cdouble(t * t, 0.0) + spec.V0;
}

cdouble w_from_energy(cdouble E_n, double k) {
  return branched_root(cdouble(k * k, 0.0) - E_n);
}

cdouble w_mode(int n, const WaveguideSpec& spec, double k) {
  return w_from_energy(mode_energy(n, spec), k);
}

cdouble varpi_mode(int n, const WaveguideSpec& spec, double k) {
  return varpi(pi * n / spec.b, k);
}

int n_star(double k, const WaveguideSpec& spec) {
  const double disc = k * k - spec.V0.real();
  if (disc <= 0.0) return 0;
  double x = (spec.b / pi) * std::sqrt(disc);
  // Snap to the degeneracy boundary so k exactly at an exceptional value
  // counts its zero mode as open.
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) x = r;
  return static_cast<int>(std::floor(x));
}

std::vector<std::pair<double, int>> exceptional_wavenumbers(
    const WaveguideSpec& spec, double k_min, double k_max) {
  std::vector<std::pair<double, int>> out;
  // w_n never vanishes at real k when V0 has an imaginary part.
  if (!(k_max > 0.0) || spec.V0.imag() != 0.0) return out;
  const double v0 = spec.V0.real();
  for (int n = 1;; ++n) {
    const double t = pi * n / spec.b;
    const double s = v0 + t * t;
    if (s > k_max * k_max) break;
    if (s <= 0.0) continue;
    const double kn = std::sqrt(s);
    if (kn >= k_min && kn <= k_max) out.emplace_back(kn, n);
    if (n > 100000000) break;  // unreachable for sane inputs
  }
  return out;
}

std::optional<int> is_exceptional(double k, const WaveguideSpec& spec,
                                  double rel_tol) {
  if (spec.V0.imag() != 0.0) return std::nullopt;
  const double v0 = spec.V0.real();
  const double disc = k * k - v0;
  if (disc <= 0.0) return std::nullopt;
  const int guess = static_cast<int>(std::round((spec.b / pi) * std::sqrt(disc)));
  for (int n = std::max(1, guess - 1); n <= guess + 1; ++n) {
    const double t = pi * n / spec.b;
    const double s = v0 + t * t;
    if (s <= 0.0) continue;
    if (std::abs(k - std::sqrt(s)) <= rel_tol * k) return n;
  }
  return std::nullopt;
}

}  // namespace wgscat
