#pragma once

// Independent reference routes used to cross-check the closed-form
// implementation: dense matrix exponential, adaptive quadrature, textbook 1D
// slab matching, and a quadrature-based dispersion compression.  Nothing here
// reuses the closed forms it is meant to validate.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wgscat/types.hpp"

namespace wgscat::ref {

using MatrixX = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

// exp(scale * M) by Pade (13,13) scaling and squaring.  Throws
// std::range_error when the scaled norm is too extreme to square down.
MatrixX dense_expm(const MatrixX& M, cdouble scale = 1.0);

// Adaptive Gauss-Kronrod (G7, K15) integration of a complex integrand.
cdouble integrate(const std::function<cdouble(double)>& f, double lo,
                  double hi, double abs_tol = 1e-12, int max_depth = 48);

// Same, with mandatory subdivision points (branch points, kinks) inside
// [lo, hi]; points outside the interval are ignored.
cdouble integrate_split(const std::function<cdouble(double)>& f, double lo,
                        double hi, std::vector<double> splits,
                        double abs_tol = 1e-12);

// Momentum integral over [lo, hi] with panels split at the propagation edges
// p = +-k, where integrands typically have square-root kinks.
cdouble branch_split_quadrature(const std::function<cdouble(double)>& f,
                                double k, double lo, double hi,
                                double abs_tol = 1e-10);

// Uniform 1D slab between x_left and x_right embedded in a uniform exterior.
struct Slab1D {
  double x_left = 0.0, x_right = 1.0;
  cdouble wavevector_inside = 1.0;
  cdouble wavevector_outside = 1.0;
};

// Transfer matrix (A_-, B_-) -> (A_+, B_+) built from psi/psi' continuity at
// the two interfaces, in the plane-wave convention with phases referenced to
// x = 0 on both sides.  Unit determinant.  Throws std::domain_error for a
// zero wavevector (singular matching).
Matrix2 interface_transfer(const Slab1D& s);

// Unit wave incident from the left, solved as one bounded linear system (no
// closed forms, stable for strongly evanescent interiors):
//   x < x_left :  e^{i q_out (x - x_left)} + r e^{-i q_out (x - x_left)}
//   inside     :  alpha e^{i q_in (x - x_left)} + beta e^{-i q_in (x - x_right)}
//   x > x_right:  t e^{i q_out (x - x_right)}
// Falls back to a constant-plus-linear interior basis when |q_in * d| is tiny.
struct SlabScatter {
  cdouble r, t, alpha, beta;
};
SlabScatter slab_scatter(const Slab1D& s);

// Dispersion operator compressed to the span of the first N hard-wall channel
// modes: branched square root applied after compression, i.e. to k^2 I - G
// with G[m][n] = <phi_m' | phi_n'> evaluated by position-space quadrature.
MatrixX well_varpi_matrix(int N, double b, double k);

}  // namespace wgscat::ref
