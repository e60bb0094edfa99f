#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wgscat/coefficients.hpp"
#include "wgscat/mode_block.hpp"

namespace wgscat {

// Singular part of a far-field amplitude: coefficient of
// sqrt(2pi) delta(theta - theta_sing).  theta_sing is the actual scattering
// angle (radians).
struct DeltaTerm {
  double theta_sing = 0.0;
  cdouble coeff;
};

// Contribution of the hard walls alone, in kernel normalization (the
// amplitude assembly multiplies the smooth part by -i sqrt(2pi) and the delta
// phase by -i).  `theta` must lie in the reflection sector of the incidence
// side: cos(theta) < 0 for left incidence, > 0 for right.
struct WallTerm {
  cdouble smooth;   // -+ k cos(theta0) lambda(k sin theta, k sin theta0)/2pi
                    // times the interface phase
  DeltaTerm delta;  // specular direction, coeff = interface phase (|coeff|=1)
};
WallTerm wall_terms(double theta, const Incidence& inc,
                    const WaveguideSpec& spec);

// Far-field pair at one observation momentum.  theta_fwd in (-pi/2, pi/2)
// parameterizes both sectors through p = k sin(theta_fwd): transmission at
// the forward-sector angle, reflection at its mirror image.
struct FarFieldPoint {
  cdouble reflection_smooth;
  cdouble transmission_smooth;
  double theta_reflect = 0.0;   // actual angle of the reflected direction
  double theta_transmit = 0.0;  // actual angle of the transmitted direction
};
FarFieldPoint far_field(double theta_fwd, const Incidence& inc,
                        const WaveguideSpec& spec, KernelEvaluator& kernel);

// Amplitude sampled over a theta grid, plus its delta descriptor.
struct AmplitudeWithDelta {
  std::vector<cdouble> smooth;  // one entry per grid angle
  DeltaTerm delta;
  std::vector<double> theta;  // actual angles matching `smooth`
};

struct AmplitudePair {
  AmplitudeWithDelta R, T;
  TruncationInfo trunc;
};

// R and T over a grid of forward-sector angles (radians).  The reflection
// delta carries the wall mirror phase times -i; the transmission delta is
// always +i at the incident direction (cancelling the blocked plane wave).
AmplitudePair amplitudes(const Incidence& inc, const WaveguideSpec& spec,
                         const std::vector<double>& theta_fwd_grid,
                         int n_modes = 0);

// The (R, T) delta descriptors alone; they depend only on the incidence and
// the interface positions, never on the interior kernel.
std::pair<DeltaTerm, DeltaTerm> delta_descriptors(const Incidence& inc,
                                                  const WaveguideSpec& spec);

// Spectral coefficient function: optional plane-wave (delta) part at p_sing
// plus a smooth density over transverse momentum p.
struct SpectralAmplitude {
  std::optional<std::pair<double, cdouble>> delta;  // (p_sing, coefficient)
  std::function<cdouble(double)> smooth;
};

// Coefficient functions of the full solution for one incidence, in the
// representation psi = integral dp [A(p) e^{i varpi x} + B(p) e^{-i varpi x}]
// e^{i p y}.  The script_ members keep the evanescent content (|p| >= k);
// A_/B_ are their restrictions to the propagating window.
struct CoefficientSet {
  SpectralAmplitude A_minus, B_minus;  // x < a_minus
  SpectralAmplitude A_plus, B_plus;    // x > a_plus
  SpectralAmplitude script_A_plus, script_B_minus;
};
CoefficientSet coefficient_functions(const Incidence& inc,
                                     const WaveguideSpec& spec,
                                     int n_modes = 0);

// Scattering matrix of mode n restricted to the segment interior, acting on
// the (left, right) incoming pair with phases referenced to x = 0:
//   [ e^{-i a vp} c+           e^{-2 i a_plus vp} c- ]
//   [ e^{2 i a_minus vp} c-    e^{-i a vp} c+        ]
Matrix2 interior_s_matrix(int n, const WaveguideSpec& spec, double k);

// Response to feeding mode n from the left with unit amplitude: transmitted
// and returned multipliers at the interface planes.
struct InjectionResult {
  cdouble transmitted;  // e^{-i a vp} c+
  cdouble reflected;    // e^{2 i a_minus vp} c-
  bool exceptional = false;
};
InjectionResult mode_injection(int n, const WaveguideSpec& spec, double k);

enum class Regime { empty, exceptional, filter, large_a_propagating, generic };
const char* regime_name(Regime r);

struct RegimeReport {
  Regime regime = Regime::generic;
  int n_star = 0;
  bool exceptional = false;  // carried independently of the regime label
  double eta = 1.0;
  double a_eta_over_b = 0.0;
  double min_evanescent_awn = 0.0;  // a |w_{n_star+1}|
};
RegimeReport classify_regime(const WaveguideSpec& spec, double k);

}  // namespace wgscat
