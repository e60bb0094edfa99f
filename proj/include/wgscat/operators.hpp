#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "wgscat/mode_block.hpp"

namespace wgscat {

using MatrixX = Eigen::MatrixXcd;
using VectorX = Eigen::VectorXcd;

// Abstract truncated transverse basis for the dense operator build: mode
// energies E_n, momentum profiles phi_tilde_n(p), and optionally closed-form
// dispersion matrix elements <phi_m| varpi(p_hat) |phi_n>.  When the latter
// are absent they are computed by adaptive momentum quadrature (reference
// quality: the window cutoff limits the achievable absolute accuracy).
struct ModeBasisSpec {
  int N = 0;
  double b = 1.0;  // transverse support [0, b] of the basis functions
  std::function<cdouble(int)> energy;               // E_n, n in 1..N
  std::function<cdouble(int, double)> phi_tilde_fn;  // (n, p)
  std::optional<std::function<cdouble(int, int, double)>> varpi_element;
};

// First N hard-wall channel modes; dispersion elements are diagonal here.
ModeBasisSpec well_basis(const WaveguideSpec& spec, int N);

// Diagonal of branched w_n = sqrt(k^2 - E_n).
VectorX w_diagonal(const ModeBasisSpec& basis, double k);

// Dense dispersion compression <phi_m| varpi(p_hat) |phi_n>.
MatrixX varpi_matrix(const ModeBasisSpec& basis, double k);

// Potential matrix recovered from the truncated operator identity
// V = varpi^2 - W^2.
MatrixX v_matrix(const ModeBasisSpec& basis, double k);

// 2N x 2N operators act on mode-major stacks: component (s, n) with s in
// {up, down} sits at index 2(n-1) + s, i.e. blocks of 2 per mode.
struct TruncatedOperator {
  int N = 0;
  MatrixX mat;
};

// Two-component generator: block(m, n) = (varpi^{-1} V / 2)_{mn} K
// - varpi_{mn} sigma3.
TruncatedOperator dense_generator(const ModeBasisSpec& basis, double k);

// exp(-i x H) assembled from the same entire functions as the per-mode
// closed form, with W diagonal in the basis energies.
TruncatedOperator dense_propagator(const ModeBasisSpec& basis, double k,
                                   double x);

// Interface operators of the filled segment of length a (ordering verbatim):
//   Omega1_+- = W cos(aW/2) +- i sin(aW/2) varpi,
//   Omega2_+- = cos(aW/2) varpi +- i W sin(aW/2).
struct OmegaOperators {
  MatrixX omega1_plus, omega1_minus;
  MatrixX omega2_plus, omega2_minus;
};
OmegaOperators omega_operators(const ModeBasisSpec& basis, double k, double a);

// Gamma_+- = (Omega1_-^{-1} Omega1_+ +- Omega2_-^{-1} Omega2_+) / 2 as N x N
// matrices; diagonal for the well basis where [W, varpi] = 0.
std::pair<MatrixX, MatrixX> assemble_gamma_general(const ModeBasisSpec& basis,
                                                   double k, double a);

// Q = (W - varpi) (x) I + (W + varpi) (x) sigma1 in the stacked layout.
TruncatedOperator dense_intertwiner(const ModeBasisSpec& basis, double k);

}  // namespace wgscat
