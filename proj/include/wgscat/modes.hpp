#pragma once

#include "wgscat/dispersion.hpp"

namespace wgscat {

enum class ModeKind { propagating, evanescent, exceptional };

struct ModeRecord {
  int n = 0;
  cdouble E_n;
  cdouble w_n;
  cdouble varpi_n;
  ModeKind kind = ModeKind::evanescent;
};

// `ep_window` is the dimensionless threshold on |a * w_n| below which the mode
// is treated as sitting on its degeneracy point.
ModeRecord mode_record(int n, const WaveguideSpec& spec, double k,
                       double ep_window = 1e-4);

// Momentum profile of channel mode n: the Fourier transform over [0, b] of
// sqrt(2/b) sin(pi n y / b) with the e^{-i p y} convention,
//
//   phi_tilde_n(p) = pi n sqrt(2 b) (e^{-i(bp - pi n)} - 1) / ((bp)^2 - (pi n)^2),
//
// with the removable singularities at b p = +-pi n filled in.
cdouble phi_tilde(int n, double b, double p);

// Overlap kernel of the strip indicator: integral_0^b e^{i(p0 - p)y} dy.
// Equals sum_n phi_tilde_n(p0)^* phi_tilde_n(p) over all channel modes.
cdouble lambda_kernel(double p, double p0, double b);

// Decay floor of one closed mode: lhs = a |w_n| must exceed
// rhs = sqrt(2) pi a eta / b with eta = sqrt(n_star + 1 - (b/pi) sqrt(k^2 - V0)),
// 0 < eta <= 1.  Preconditions: real V0, k^2 >= (pi/b)^2 + V0, n > n_star.
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
BoundCheck evanescent_bound_check(int n, const WaveguideSpec& spec, double k);

// Aggregate form over the first closed mode; certifies truncation tails and
// feeds regime classification.  Valid for any real V0 (eta defaults to 1 when
// all modes are closed).
struct EvanescentGap {
  int n_star = 0;
  double eta = 1.0;      // in (0, 1]
  double bound = 0.0;    // sqrt(2) pi a eta / b
  double min_awn = 0.0;  // a |w_{n_star + 1}|
  bool holds = false;
};
EvanescentGap evanescent_gap(const WaveguideSpec& spec, double k);

}  // namespace wgscat
