#pragma once

#include <Eigen/Dense>

#include "wgscat/dispersion.hpp"

namespace wgscat {

using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

// Constant 2x2 blocks of the two-component reduction.  K is rank one and
// nilpotent (K^2 = 0), KT is its transpose.
Matrix2 kmat();     // [[1, 1], [-1, -1]]
Matrix2 kmat_t();   // [[1, -1], [1, -1]]
Matrix2 sigma1();
Matrix2 sigma3();

// Minimum |varpi_n| / k tolerated before a mode counts as grazing; the
// two-component reduction divides by varpi_n.
inline constexpr double grazing_rel_tol = 1e-12;

// Effective 2x2 evolution generator of mode n inside the filled segment:
//   H_n = (V0 / (2 varpi_n)) K - varpi_n sigma3,
// traceless with eigenvalues +-w_n.  Throws for grazing modes.
Matrix2 mode_generator(int n, const WaveguideSpec& spec, double k);

// Right/left eigenvector system of H_n away from a degeneracy, normalized so
// that <phi_s | psi_s'> = delta_{s s'} (conjugated inner product).
struct BiorthoPair {
  Vector2 psi_plus, psi_minus;  // H psi_+- = +-w psi_+-
  Vector2 phi_plus, phi_minus;  // H^dag phi_+- = +-conj(w) phi_+-
  cdouble w;
};
BiorthoPair biortho_eigensystem(int n, const WaveguideSpec& spec, double k);

// Defective system at w_n = 0: psi_plus spans the kernel, psi_minus is the
// Jordan partner with H psi_minus = k psi_plus, and (phi_plus, phi_minus) is
// the biorthonormal left chain.  Requires |a w_n| below ep_window.
struct JordanSystem {
  Vector2 psi_plus, psi_minus;
  Vector2 phi_plus, phi_minus;
};
JordanSystem jordan_block_system(int n, const WaveguideSpec& spec, double k,
                                 double ep_window = 1e-4);

// Closed form of exp(-i x H) for a generator with parameters (varpi, w):
//   cos(wx) I + (i/2) (w^2 S(x) / varpi K + varpi S(x) KT),  S(x) = sin(wx)/w.
// Entire in w^2, so the degenerate limit w -> 0 needs no separate branch.
Matrix2 propagator_mode(double x, cdouble varpi_n, cdouble w_n);
Matrix2 propagator_mode(int n, const WaveguideSpec& spec, double k, double x);

// Transfer map of mode n across the filled segment, relating the plane-wave
// amplitude pairs (A_-, B_-) at x < a_minus to (A_+, B_+) at x > a_plus with
// phases referenced to x = 0.  Unimodular: det = 1.
Matrix2 transfer_entries_mode(int n, const WaveguideSpec& spec, double k);

// Q = (w - varpi) I + (w + varpi) sigma1 maps the dressed flow onto the
// diagonal one:  Q exp(-i x H) = exp(-i x w sigma3) Q.
Matrix2 q_intertwiner(cdouble varpi_n, cdouble w_n);

// Q for mode n together with the measured intertwining residual
// max_x ||Q P(x) - exp(-i x w sigma3) Q|| / (||Q|| ||P(x)||)
// over x in {0.1a, a, 3a}.
struct QIntertwiner {
  Matrix2 Q;
  double residual = 0.0;
};
QIntertwiner q_intertwiner_mode(int n, const WaveguideSpec& spec, double k);

}  // namespace wgscat
