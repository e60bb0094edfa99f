#include "wgscat/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "wgscat/modes.hpp"
#include "wgscat/reference.hpp"

namespace wgscat {

namespace {

void check_basis(const ModeBasisSpec& basis) {
  if (basis.N < 1) throw std::invalid_argument("basis needs at least one mode");
  if (!basis.energy || !basis.phi_tilde_fn)
    throw std::invalid_argument("basis must supply energies and profiles");
}

cdouble sinc_half(double a, cdouble w) {
  // sin(a w / 2) evaluated stably near w = 0 via the sinc form.
  const cdouble arg = 0.5 * a * w;
  if (std::abs(arg) < 1e-4) {
    const cdouble a2 = arg * arg;
    return arg * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
  }
  return std::sin(arg);
}

}  // namespace

ModeBasisSpec well_basis(const WaveguideSpec& spec, int N) {
  spec.validate();
  ModeBasisSpec basis;
  basis.N = N;
  basis.b = spec.b;
  basis.energy = [spec](int n) { return mode_energy(n, spec); };
  basis.phi_tilde_fn = [b = spec.b](int n, double p) {
    return phi_tilde(n, b, p);
  };
  basis.varpi_element = [b = spec.b](int m, int n, double k) {
    return m == n ? varpi(pi * n / b, k) : cdouble(0.0, 0.0);
  };
  return basis;
}

VectorX w_diagonal(const ModeBasisSpec& basis, double k) {
  check_basis(basis);
  VectorX w(basis.N);
  for (int n = 1; n <= basis.N; ++n)
    w(n - 1) = w_from_energy(basis.energy(n), k);
  return w;
}

MatrixX varpi_matrix(const ModeBasisSpec& basis, double k) {
  check_basis(basis);
  MatrixX vp(basis.N, basis.N);
  if (basis.varpi_element) {
    const auto& elem = *basis.varpi_element;
    for (int m = 1; m <= basis.N; ++m)
      for (int n = 1; n <= basis.N; ++n) vp(m - 1, n - 1) = elem(m, n, k);
    return vp;
  }
  // Quadrature fallback: (1/2pi) integral phi_m(p)^* varpi(p) phi_n(p) dp,
  // split at the branch points p = +-k.  The oscillatory tail is cut at a
  // finite window, so this route is reference quality only; supply
  // closed-form elements where available.
  const double P = std::max(64.0 * pi * basis.N / basis.b, 16.0 * k);
  for (int m = 1; m <= basis.N; ++m) {
    for (int n = m; n <= basis.N; ++n) {
      auto f = [&](double p) {
        return std::conj(basis.phi_tilde_fn(m, p)) * varpi(p, k) *
               basis.phi_tilde_fn(n, p);
      };
      const cdouble val =
          ref::branch_split_quadrature(f, k, -P, P, 1e-9) / (2.0 * pi);
      vp(m - 1, n - 1) = val;
      // real profiles and an even symbol make the sandwich symmetric, not
      // hermitian: varpi(p) turns imaginary beyond |p| = k
      if (m != n) vp(n - 1, m - 1) = val;
    }
  }
  return vp;
}

MatrixX v_matrix(const ModeBasisSpec& basis, double k) {
  const MatrixX vp = varpi_matrix(basis, k);
  const VectorX w = w_diagonal(basis, k);
  MatrixX out = vp * vp;
  for (int j = 0; j < basis.N; ++j) out(j, j) -= w(j) * w(j);
  return out;
}

TruncatedOperator dense_generator(const ModeBasisSpec& basis, double k) {
  const int N = basis.N;
  const MatrixX vp = varpi_matrix(basis, k);
  {
    Eigen::JacobiSVD<MatrixX> svd(vp);
    const double smin = svd.singularValues()(N - 1);
    if (smin < 1e-12 * k)
      throw std::domain_error("grazing mode: dispersion matrix singular");
  }
  const MatrixX D = 0.5 * vp.fullPivLu().solve(v_matrix(basis, k));
  TruncatedOperator op;
  op.N = N;
  op.mat = MatrixX::Zero(2 * N, 2 * N);
  const Matrix2 K = kmat();
  const Matrix2 s3 = sigma3();
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      op.mat.block<2, 2>(2 * m, 2 * n) = D(m, n) * K - vp(m, n) * s3;
  return op;
}

TruncatedOperator dense_propagator(const ModeBasisSpec& basis, double k,
                                   double x) {
  const int N = basis.N;
  const MatrixX vp = varpi_matrix(basis, k);
  const VectorX w = w_diagonal(basis, k);
  VectorX C(N), S(N);
  for (int j = 0; j < N; ++j) {
    C(j) = std::cos(w(j) * x);
    const cdouble arg = w(j) * x;
    if (std::abs(arg) < 1e-4) {
      const cdouble a2 = arg * arg;
      S(j) = x * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
    } else {
      S(j) = std::sin(arg) / w(j);
    }
  }
  // F = varpi^{-1} W^2 S, G = varpi S; same ordering as the generator.
  const MatrixX W2S = (w.array().square() * S.array()).matrix().asDiagonal();
  const MatrixX F = vp.fullPivLu().solve(W2S);
  const MatrixX G = vp * MatrixX(S.asDiagonal());
  TruncatedOperator op;
  op.N = N;
  op.mat = MatrixX::Zero(2 * N, 2 * N);
  const Matrix2 K = kmat();
  const Matrix2 KT = kmat_t();
  const cdouble ih(0.0, 0.5);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      Matrix2 blk = ih * (F(m, n) * K + G(m, n) * KT);
      if (m == n) blk += C(m) * Matrix2::Identity();
      op.mat.block<2, 2>(2 * m, 2 * n) = blk;
    }
  }
  return op;
}

OmegaOperators omega_operators(const ModeBasisSpec& basis, double k,
                               double a) {
  const int N = basis.N;
  const MatrixX vp = varpi_matrix(basis, k);
  const VectorX w = w_diagonal(basis, k);
  VectorX c2(N), s2(N), wc2(N);
  for (int j = 0; j < N; ++j) {
    c2(j) = std::cos(0.5 * a * w(j));
    s2(j) = sinc_half(a, w(j));
    wc2(j) = w(j) * c2(j);
  }
  const cdouble i1(0.0, 1.0);
  OmegaOperators out;
  const MatrixX S2vp = MatrixX(s2.asDiagonal()) * vp;
  const MatrixX C2vp = MatrixX(c2.asDiagonal()) * vp;
  const MatrixX WC2 = MatrixX(wc2.asDiagonal());
  const MatrixX WS2 =
      MatrixX((w.array() * s2.array()).matrix().asDiagonal());
  out.omega1_plus = WC2 + i1 * S2vp;
  out.omega1_minus = WC2 - i1 * S2vp;
  out.omega2_plus = C2vp + i1 * WS2;
  out.omega2_minus = C2vp - i1 * WS2;
  return out;
}

std::pair<MatrixX, MatrixX> assemble_gamma_general(const ModeBasisSpec& basis,
                                                   double k, double a) {
  const OmegaOperators om = omega_operators(basis, k, a);
  const auto lu1 = om.omega1_minus.fullPivLu();
  const auto lu2 = om.omega2_minus.fullPivLu();
  if (!lu1.isInvertible() || !lu2.isInvertible())
    throw std::runtime_error(
        "internal resonance of truncated operator; refine N or perturb k");
  const MatrixX r1 = lu1.solve(om.omega1_plus);
  const MatrixX r2 = lu2.solve(om.omega2_plus);
  return {0.5 * (r1 + r2), 0.5 * (r1 - r2)};
}

TruncatedOperator dense_intertwiner(const ModeBasisSpec& basis, double k) {
  const int N = basis.N;
  const MatrixX vp = varpi_matrix(basis, k);
  const VectorX w = w_diagonal(basis, k);
  MatrixX Wm = MatrixX(w.asDiagonal()) - vp;
  MatrixX Wp = MatrixX(w.asDiagonal()) + vp;
  TruncatedOperator op;
  op.N = N;
  op.mat = MatrixX::Zero(2 * N, 2 * N);
  const Matrix2 s1 = sigma1();
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      op.mat.block<2, 2>(2 * m, 2 * n) =
          Wm(m, n) * Matrix2::Identity() + Wp(m, n) * s1;
  return op;
}

}  // namespace wgscat
