#include "doctest.h"
#include "wgscat/mode_block.hpp"
#include "wgscat/reference.hpp"

using namespace wgscat;

namespace {
const WaveguideSpec kSpec = [] {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = -0.7;
  s.a_plus = 1.3;
  return s;
}();
}  // namespace

TEST_CASE("constant blocks: K is nilpotent, sigma3 squares to one") {
  CHECK(kmat().squaredNorm() == 4.0);
  CHECK((kmat() * kmat()).norm() == 0.0);
  CHECK((kmat_t() * kmat_t()).norm() == 0.0);
  CHECK((sigma3() * sigma3() - Matrix2::Identity()).norm() == 0.0);
  CHECK((sigma1() * sigma1() - Matrix2::Identity()).norm() == 0.0);
  CHECK(kmat_t().isApprox(kmat().transpose()));
}

TEST_CASE("mode generator is traceless with eigenvalues +-w_n") {
  for (int n : {1, 2, 4}) {
    const Matrix2 H = mode_generator(n, kSpec, 2.5);
    const cdouble w = w_mode(n, kSpec, 2.5);
    CHECK(std::abs(H.trace()) < 1e-14);
    CHECK(std::abs(H.determinant() + w * w) < 1e-12);  // det = -w^2
  }
}

TEST_CASE("grazing guard refuses ill-posed blocks") {
  WaveguideSpec s = kSpec;
  // k = 3, b = pi puts mode 3 exactly on the exterior threshold
  CHECK_THROWS_AS(mode_generator(3, s, 3.0), std::domain_error);
}

TEST_CASE("closed-form propagator equals the dense exponential") {
  for (int n : {1, 2, 3, 5}) {
    const Matrix2 H = mode_generator(n, kSpec, 2.5);
    for (double x : {0.3, 2.0, 7.5}) {
      const Matrix2 P = propagator_mode(n, kSpec, 2.5, x);
      const Matrix2 E = ref::dense_expm(H, cdouble(0.0, -x));
      CHECK((P - E).norm() < 1e-11 * E.norm());
      // det = 1 analytically; in floats the cancellation noise scales with
      // the squared entry size (large for evanescent modes at big x).
      CHECK(std::abs(P.determinant() - 1.0) <
            1e-13 * std::max(1.0, P.squaredNorm()));
    }
  }
}

TEST_CASE("propagator composes: P(x + y) = P(x) P(y)") {
  for (int n : {1, 4}) {
    const Matrix2 a = propagator_mode(n, kSpec, 2.5, 0.8);
    const Matrix2 b = propagator_mode(n, kSpec, 2.5, 1.9);
    const Matrix2 c = propagator_mode(n, kSpec, 2.5, 2.7);
    CHECK((a * b - c).norm() < 1e-12 * c.norm());
  }
}

TEST_CASE("propagator is entire in w^2: w -> 0 matches the defective form") {
  const cdouble vp(1.3, 0.0);
  const double x = 2.1;
  const Matrix2 tiny = propagator_mode(x, vp, cdouble(1e-9, 0.0));
  const Matrix2 limit =
      Matrix2::Identity() + cdouble(0.0, 0.5 * x) * vp * kmat_t();
  CHECK((tiny - limit).norm() < 1e-12);
  // purely imaginary w on the other side of the degeneracy
  const Matrix2 tiny_i = propagator_mode(x, vp, cdouble(0.0, 1e-9));
  CHECK((tiny_i - limit).norm() < 1e-12);
}

TEST_CASE("biorthonormal eigensystem of a generic block") {
  for (int n : {1, 2, 4}) {
    const BiorthoPair bp = biortho_eigensystem(n, kSpec, 2.5);
    const Matrix2 H = mode_generator(n, kSpec, 2.5);
    CHECK((H * bp.psi_plus - bp.w * bp.psi_plus).norm() < 1e-12);
    CHECK((H * bp.psi_minus + bp.w * bp.psi_minus).norm() < 1e-12);
    CHECK(std::abs(bp.phi_plus.dot(bp.psi_plus) - 1.0) < 1e-12);
    CHECK(std::abs(bp.phi_minus.dot(bp.psi_minus) - 1.0) < 1e-12);
    CHECK(std::abs(bp.phi_plus.dot(bp.psi_minus)) < 1e-12);
    CHECK(std::abs(bp.phi_minus.dot(bp.psi_plus)) < 1e-12);
    // completeness of the pair
    const Matrix2 resolved = bp.psi_plus * bp.phi_plus.adjoint() +
                             bp.psi_minus * bp.phi_minus.adjoint();
    CHECK((resolved - Matrix2::Identity()).norm() < 1e-12);
    // spectral reconstruction of H
    const Matrix2 rebuilt = bp.w * bp.psi_plus * bp.phi_plus.adjoint() -
                            bp.w * bp.psi_minus * bp.phi_minus.adjoint();
    CHECK((rebuilt - H).norm() < 1e-12 * H.norm());
  }
}

TEST_CASE("Jordan chain at a degeneracy point") {
  WaveguideSpec s = kSpec;
  const double k = std::sqrt(3.0);  // w_1 = 0 exactly
  const JordanSystem js = jordan_block_system(1, s, k);
  const Matrix2 H = mode_generator(1, s, k);
  CHECK((H * H).norm() < 1e-12 * H.norm() * H.norm());
  CHECK((H * js.psi_plus).norm() < 1e-12);
  CHECK((H * js.psi_minus - k * js.psi_plus).norm() < 1e-12);
  CHECK(std::abs(js.phi_plus.dot(js.psi_plus) - 1.0) < 1e-12);
  CHECK(std::abs(js.phi_minus.dot(js.psi_minus) - 1.0) < 1e-12);
  CHECK(std::abs(js.phi_plus.dot(js.psi_minus)) < 1e-12);
  CHECK(std::abs(js.phi_minus.dot(js.psi_plus)) < 1e-12);
  const Matrix2 resolved = js.psi_plus * js.phi_plus.adjoint() +
                           js.psi_minus * js.phi_minus.adjoint();
  CHECK((resolved - Matrix2::Identity()).norm() < 1e-12);
  // away from the degeneracy the chain constructor refuses
  CHECK_THROWS_AS(jordan_block_system(1, s, 2.5), std::domain_error);
}

TEST_CASE("intertwiner flattens the dressed flow") {
  for (int n : {1, 2, 4}) {
    const QIntertwiner qi = q_intertwiner_mode(n, kSpec, 2.5);
    CHECK(qi.residual < 1e-12);
    const cdouble w = w_mode(n, kSpec, 2.5);
    const cdouble vp = varpi_mode(n, kSpec, 2.5);
    const Matrix2 Q = q_intertwiner(vp, w);
    for (double x : {0.4, 1.7}) {
      const Matrix2 lhs = Q * propagator_mode(x, vp, w);
      Matrix2 diag = Matrix2::Zero();
      diag(0, 0) = std::exp(cdouble(0.0, -x) * w);
      diag(1, 1) = std::exp(cdouble(0.0, x) * w);
      const Matrix2 rhs = diag * Q;
      CHECK((lhs - rhs).norm() < 1e-12 * Q.norm());
    }
  }
}

TEST_CASE("transfer map: unimodular and consistent with the interval response") {
  for (int n : {1, 2}) {
    const Matrix2 M = transfer_entries_mode(n, kSpec, 2.5);
    CHECK(std::abs(M.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("transfer map factors through the intermediate plane") {
  // splitting the interval at an interior plane must compose to the same map
  WaveguideSpec whole = kSpec;
  WaveguideSpec left = kSpec, right = kSpec;
  left.a_plus = 0.4;
  right.a_minus = 0.4;
  for (int n : {1, 2, 4}) {
    const Matrix2 M = transfer_entries_mode(n, whole, 2.5);
    const Matrix2 Ml = transfer_entries_mode(n, left, 2.5);
    const Matrix2 Mr = transfer_entries_mode(n, right, 2.5);
    CHECK((Mr * Ml - M).norm() < 1e-12 * M.norm());
  }
}
