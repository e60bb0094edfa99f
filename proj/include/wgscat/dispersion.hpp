#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wgscat/types.hpp"

namespace wgscat {

enum class Side { left, right };

// Principal branch used throughout: Im(root) >= 0, and Re(root) >= 0 when the
// root is real.  Propagating channels get a positive real wavenumber,
// evanescent ones +i * decay rate.
cdouble branched_root(cdouble z);

// Longitudinal wavenumber of the transverse-momentum component p at total
// wavenumber k:  sqrt(k^2 - p^2) for |p| < k, i*sqrt(p^2 - k^2) beyond.
cdouble varpi(double p, double k);

// Rectangular guide segment: potential V0 on y in [0, b] between the lines
// x = a_minus and x = a_plus, hard walls at y = 0 and y = b.
struct WaveguideSpec {
  double b = 1.0;
  cdouble V0 = 0.0;
  double a_minus = 0.0;
  double a_plus = 1.0;

  double a() const { return a_plus - a_minus; }
  void validate() const;  // throws std::invalid_argument
};

// Incident plane wave.  theta0 is measured from the x axis and restricted to
// (-pi/2, pi/2); `side` selects whether the wave travels toward +x (left
// incidence) or -x (right incidence).
struct Incidence {
  double k = 1.0;
  double theta0 = 0.0;
  Side side = Side::left;

  double p0() const;                 // transverse momentum k sin(theta0)
  double varpi0() const;             // longitudinal wavenumber k cos(theta0)
  double cos_theta0_signed() const;  // +cos for left incidence, -cos for right

  static Incidence make(double k, double theta0, Side side = Side::left);
};

// Channel-mode dispersion data.  Mode n has threshold energy
// E_n = (pi n / b)^2 + V0; w_n is the longitudinal wavenumber inside the
// filled segment, varpi_n the one outside.
cdouble mode_energy(int n, const WaveguideSpec& spec);
cdouble w_from_energy(cdouble E_n, double k);
cdouble w_mode(int n, const WaveguideSpec& spec, double k);
cdouble varpi_mode(int n, const WaveguideSpec& spec, double k);

// Number of channel modes that propagate inside the filled segment.
int n_star(double k, const WaveguideSpec& spec);

// Wavenumbers k_n = sqrt(V0 + (pi n / b)^2) where w_n crosses zero and the
// per-mode evolution generator becomes defective (real V0 only).  Returns
// (k_n, n) pairs in ascending k within [k_min, k_max].
std::vector<std::pair<double, int>> exceptional_wavenumbers(
    const WaveguideSpec& spec, double k_min, double k_max);

// Index of the mode whose degeneracy wavenumber matches k to rel_tol, if any.
std::optional<int> is_exceptional(double k, const WaveguideSpec& spec,
                                  double rel_tol = 1e-9);

}  // namespace wgscat
