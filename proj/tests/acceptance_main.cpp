// Acceptance gate: every numbered requirement prints exactly one line with
// the measured value against its threshold; the exit code is the number of
// failures.  All randomness is seeded, so reruns are bit-reproducible.

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wgscat/amplitudes.hpp"
#include "wgscat/operators.hpp"
#include "wgscat/reference.hpp"

namespace fs = std::filesystem;
using namespace wgscat;

namespace {

struct Line {
  bool ok = false;
  std::string text;
};
std::array<Line, 16> lines;  // 1-based

void set_line(int idx, bool ok, const std::string& name,
              const std::string& detail) {
  lines[idx] = {ok, name + ": " + detail};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double block_rel(const MatrixX& got, const MatrixX& want, int n) {
  const Matrix2 g = got.block<2, 2>(2 * n, 2 * n);
  const Matrix2 w = want.block<2, 2>(2 * n, 2 * n);
  return (g - w).norm() / w.norm();
}

// ---------------------------------------------------------------------------
// 1 + 6: interval coefficients vs the 1D interface-matching oracle, and flux
// conservation on the propagating real-V0 subset of the same draws.

void run_oracle_equivalence() {
  std::mt19937_64 rng(20250811);
  std::uniform_real_distribution<double> dk(0.3, 6.0), db(1.0, 5.0),
      da(0.5, 10.0), dv(-3.0, 8.0);
  std::uniform_int_distribution<int> dn(1, 12);
  double worst = 0.0, worst_flux = 0.0;
  int accepted = 0, flux_samples = 0;
  while (accepted < 200) {
    WaveguideSpec s;
    s.b = db(rng);
    s.V0 = dv(rng);
    s.a_minus = 0.0;
    s.a_plus = da(rng);
    const double k = dk(rng);
    const int n = dn(rng);
    const cdouble w = w_mode(n, s, k);
    const cdouble vp = varpi_mode(n, s, k);
    if (std::abs(s.a() * w) < 1e-3) continue;  // degeneracy window excluded
    if (std::abs(vp) < 1e-3 * k) continue;     // grazing excluded
    const PerModeCoefficients pm = per_mode_coefficients(n, s, k);
    ref::Slab1D slab;
    slab.x_left = 0.0;
    slab.x_right = s.a();
    slab.wavevector_inside = w;
    slab.wavevector_outside = vp;
    const ref::SlabScatter sc = ref::slab_scatter(slab);
    // both routes reference t to the right face and r to the left face; the
    // oracle's r carries the opposite sign convention
    const double rel_t = std::abs(pm.c_plus - sc.t) /
                         std::max({std::abs(pm.c_plus), std::abs(sc.t), 1e-300});
    const double rel_r = std::abs(pm.c_minus + sc.r) /
                         std::max({std::abs(pm.c_minus), std::abs(sc.r), 1e-300});
    worst = std::max({worst, rel_t, rel_r});
    // the flux identity lives in the exterior channels, so it needs the
    // outside wavevector real (open channel); the interior may tunnel.  V0 < 0
    // draws can leave the interior propagating with the exterior closed, and
    // no flux statement holds there.
    if (pm.varpi_n.imag() == 0.0) {
      ++flux_samples;
      worst_flux = std::max(worst_flux, std::abs(std::norm(pm.c_plus) +
                                                 std::norm(pm.c_minus) - 1.0));
    }
    ++accepted;
  }
  set_line(1, worst <= 1e-10, "interval coefficients vs slab oracle",
           "max rel " + fmt(worst) + " over 200 tuples (tol 1e-10)");
  set_line(6, worst_flux <= 1e-10, "flux conservation |c+|^2 + |c-|^2 = 1",
           "max dev " + fmt(worst_flux) + " over " +
               std::to_string(flux_samples) +
               " open-channel samples (tol 1e-10)");
}

// ---------------------------------------------------------------------------
// 2: closed-form propagator vs dense exponential, per mode (including the
// degenerate wavenumbers) and through the truncated N = 24 assembly.

void run_propagator_equivalence() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = 0.0;
  s.a_plus = 2.0;
  double worst_mode = 0.0;
  auto probe = [&](int n, double k, double x) {
    const Matrix2 H = mode_generator(n, s, k);
    const Matrix2 P = propagator_mode(n, s, k, x);
    const MatrixX E = ref::dense_expm(H, cdouble(0.0, -x));
    worst_mode = std::max(worst_mode, (P - E).norm() / E.norm());
  };
  for (int n : {1, 2, 3, 5})
    for (double x : {0.4, 2.0, 6.5})
      for (double k : {0.9, 2.5, 4.2}) probe(n, k, x);
  // degeneracy wavenumbers k_n = sqrt(V0 + n^2): nilpotent-branch propagator
  for (int n : {1, 2, 3})
    for (double x : {0.7, 3.0}) probe(n, std::sqrt(2.0 + n * n), x);

  const ModeBasisSpec basis = well_basis(s, 24);
  const double x = 0.8, k = 2.5;
  const TruncatedOperator P = dense_propagator(basis, k, x);
  const MatrixX E = ref::dense_expm(dense_generator(basis, k).mat,
                                    cdouble(0.0, -x));
  double worst_dense = 0.0;
  for (int n = 0; n < 24; ++n)
    worst_dense = std::max(worst_dense, block_rel(P.mat, E, n));
  const bool ok = worst_mode <= 1e-10 && worst_dense <= 1e-6;
  set_line(2, ok, "propagator vs dense exponential",
           "per-mode max rel " + fmt(worst_mode) +
               " (tol 1e-10), N=24 assembly max block rel " + fmt(worst_dense) +
               " (tol 1e-6)");
}

// ---------------------------------------------------------------------------
// 3: biorthonormality + completeness, generic and at the degeneracy.

void run_biortho() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = 0.0;
  s.a_plus = 2.0;
  double worst = 0.0;
  auto acc = [&](double r) { worst = std::max(worst, r); };
  for (double k : {1.1, 2.5, 4.7}) {
    for (int n = 1; n <= 5; ++n) {
      const BiorthoPair bp = biortho_eigensystem(n, s, k);
      const Matrix2 H = mode_generator(n, s, k);
      acc((H * bp.psi_plus - bp.w * bp.psi_plus).norm());
      acc((H * bp.psi_minus + bp.w * bp.psi_minus).norm());
      acc(std::abs(bp.phi_plus.dot(bp.psi_plus) - 1.0));
      acc(std::abs(bp.phi_minus.dot(bp.psi_minus) - 1.0));
      acc(std::abs(bp.phi_plus.dot(bp.psi_minus)));
      acc(std::abs(bp.phi_minus.dot(bp.psi_plus)));
      const Matrix2 resolved = bp.psi_plus * bp.phi_plus.adjoint() +
                               bp.psi_minus * bp.phi_minus.adjoint();
      acc((resolved - Matrix2::Identity()).norm());
    }
  }
  double worst_ep = 0.0;
  auto aep = [&](double r) { worst_ep = std::max(worst_ep, r); };
  for (int n : {1, 2}) {
    const double k = std::sqrt(2.0 + n * n);
    const JordanSystem js = jordan_block_system(n, s, k);
    const Matrix2 H = mode_generator(n, s, k);
    aep((H * js.psi_plus).norm());
    aep((H * js.psi_minus - k * js.psi_plus).norm());
    aep(std::abs(js.phi_plus.dot(js.psi_plus) - 1.0));
    aep(std::abs(js.phi_minus.dot(js.psi_minus) - 1.0));
    aep(std::abs(js.phi_plus.dot(js.psi_minus)));
    aep(std::abs(js.phi_minus.dot(js.psi_plus)));
    const Matrix2 resolved = js.psi_plus * js.phi_plus.adjoint() +
                             js.psi_minus * js.phi_minus.adjoint();
    aep((resolved - Matrix2::Identity()).norm());
  }
  const bool ok = worst <= 1e-10 && worst_ep <= 1e-10;
  set_line(3, ok, "biorthonormality and completeness",
           "generic max residual " + fmt(worst) + ", degenerate-pair max " +
               fmt(worst_ep) + " (tol 1e-10)");
}

// ---------------------------------------------------------------------------
// 4: nilpotency on the defective block and linear growth of the propagator.
// The empty guide at its degeneracy has an identically zero generator (the
// interaction term carries V0), so the linear-growth fit is run at a filled
// degeneracy where the slope is nonzero.

void run_ep_growth() {
  WaveguideSpec s2;
  s2.b = pi;
  s2.V0 = 2.0;
  s2.a_minus = 0.0;
  s2.a_plus = 2.0;
  WaveguideSpec s1 = s2;
  s1.V0 = 1.0;
  double worst_nil = 0.0;
  for (auto [spec, k] : {std::pair<WaveguideSpec, double>{s2, std::sqrt(3.0)},
                         {s1, std::sqrt(2.0)}}) {
    const Matrix2 H = mode_generator(1, spec, k);
    worst_nil = std::max(worst_nil, (H * H).norm() / (H.norm() * H.norm()));
  }
  // ||P(x) - I|| against x on the defective block of mode 1 at V0 = 1,
  // k = sqrt(2): the x-linear term i x varpi K^T / 2 dominates
  std::vector<double> xs, ys;
  for (double x = 1.0; x <= 100.0; x += 4.0) {
    xs.push_back(x);
    ys.push_back((propagator_mode(1, s1, std::sqrt(2.0), x) -
                  Matrix2::Identity())
                     .norm());
  }
  const std::size_t m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icept = (sy - slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ss_res += std::pow(ys[i] - slope * xs[i] - icept, 2);
    ss_tot += std::pow(ys[i] - sy / m, 2);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  const bool ok = worst_nil <= 1e-10 && r2 >= 0.999;
  set_line(4, ok, "defective-block nilpotency and linear growth",
           "max |H^2|/|H|^2 " + fmt(worst_nil) +
               " (tol 1e-10), |P(x)-I| fit R^2 " + fmt(r2) +
               " (>= 0.999; empty-guide case has H = 0 identically)");
}

// ---------------------------------------------------------------------------
// 5: intertwining, per mode and through the dense N = 24 assembly.

void run_intertwining() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = 0.0;
  s.a_plus = 2.0;
  double worst_mode = 0.0;
  for (double k : {1.3, 2.5, 4.1})
    for (int n = 1; n <= 6; ++n)
      worst_mode = std::max(worst_mode, q_intertwiner_mode(n, s, k).residual);

  const int N = 24;
  const double k = 2.5, x = 0.8;
  const ModeBasisSpec basis = well_basis(s, N);
  const MatrixX Q = dense_intertwiner(basis, k).mat;
  const MatrixX P = dense_propagator(basis, k, x).mat;
  const VectorX w = w_diagonal(basis, k);
  MatrixX D = MatrixX::Zero(2 * N, 2 * N);
  for (int n = 0; n < N; ++n) {
    D(2 * n, 2 * n) = std::exp(cdouble(0.0, -x) * w(n));
    D(2 * n + 1, 2 * n + 1) = std::exp(cdouble(0.0, x) * w(n));
  }
  const MatrixX lhs = Q * P, rhs = D * Q;
  double worst_dense = 0.0;
  for (int n = 0; n < N; ++n) {
    const Matrix2 l = lhs.block<2, 2>(2 * n, 2 * n);
    const Matrix2 r = rhs.block<2, 2>(2 * n, 2 * n);
    const Matrix2 qb = Q.block<2, 2>(2 * n, 2 * n);
    const Matrix2 pb = P.block<2, 2>(2 * n, 2 * n);
    worst_dense = std::max(worst_dense,
                           (l - r).norm() / (qb.norm() * pb.norm()));
  }
  const bool ok = worst_mode <= 1e-10 && worst_dense <= 1e-6;
  set_line(5, ok, "intertwining onto the diagonal flow",
           "per-mode max residual " + fmt(worst_mode) +
               " (tol 1e-10), dense N=24 max " + fmt(worst_dense) +
               " (tol 1e-6)");
}

// ---------------------------------------------------------------------------
// 7: empty guide kills the returned kernel.

void run_empty_guide() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 0.0;
  s.a_minus = 0.0;
  s.a_plus = 2.0;
  const double k = 2.5;
  KernelEvaluator ev(s, k);
  double worst = 0.0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const double p = -0.95 * k + 1.9 * k * i / 20.0;
      const double p0 = -0.95 * k + 1.9 * k * j / 20.0;
      worst = std::max(worst, std::abs(ev.eval(p, p0).gamma_minus));
    }
  set_line(7, worst <= 1e-12, "empty guide: returned kernel vanishes",
           "max |Gamma_-| " + fmt(worst) + " on a 21x21 grid (tol 1e-12)");
}

// ---------------------------------------------------------------------------
// 8: length invariance at the empty-guide degeneracy k = pi/b.

void run_ep_length_invariance() {
  const double b = pi, k = 1.0;  // k = pi / b
  const std::array<double, 3> lengths = {10.0 * b, 20.0 * b, 40.0 * b};
  double worst_mult = 0.0;
  std::array<std::vector<cdouble>, 3> gp;
  for (std::size_t ia = 0; ia < lengths.size(); ++ia) {
    WaveguideSpec s;
    s.b = b;
    s.V0 = 0.0;
    s.a_minus = 0.0;
    s.a_plus = lengths[ia];
    const InjectionResult inj = mode_injection(1, s, k);
    worst_mult = std::max(worst_mult, std::abs(inj.transmitted - 1.0) +
                                          std::abs(inj.reflected));
    KernelEvaluator ev(s, k);
    for (double p : {-0.3, 0.0, 0.3})
      for (double p0 : {-0.3, 0.0, 0.3})
        gp[ia].push_back(ev.eval(p, p0).gamma_plus);
  }
  double worst_gamma = 0.0;
  for (std::size_t i = 0; i < gp[0].size(); ++i)
    for (std::size_t ia = 1; ia < 3; ++ia)
      worst_gamma = std::max(worst_gamma, std::abs(gp[ia][i] - gp[0][i]));
  // residual a-dependence rides on the first closed mode, |w_2| = sqrt(3)/1
  const double tail = std::max(1e-12, 10.0 * std::exp(-lengths[0] *
                                                      std::sqrt(3.0)));
  const bool ok = worst_mult <= 1e-12 && worst_gamma <= tail;
  set_line(8, ok, "degenerate empty guide is length-invariant",
           "multiplier dev " + fmt(worst_mult) +
               " (tol 1e-12), kernel spread over a in {10b,20b,40b} " +
               fmt(worst_gamma) + " (tol " + fmt(tail) + ")");
}

// ---------------------------------------------------------------------------
// 9: the degenerate limit algebra and continuity across the degeneracy.

void run_ep_limit() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = -0.8;
  s.a_plus = 1.2;
  const double ks = std::sqrt(3.0);
  const PerModeCoefficients pm = per_mode_coefficients(1, s, ks);
  const double limit_dev = std::abs(pm.c_minus - (pm.c_plus - 1.0));

  const Incidence inc0 = Incidence::make(ks, 0.3);
  double worst_cont = 0.0;
  std::vector<FarFieldPoint> base;
  {
    KernelEvaluator ev(s, ks);
    for (double th : {-0.5, -0.2, 0.1, 0.4})
      base.push_back(far_field(th, inc0, s, ev));
  }
  for (double dk : {-1e-6, 1e-6}) {
    const Incidence inc = Incidence::make(ks + dk, 0.3);
    KernelEvaluator ev(s, ks + dk);
    std::size_t i = 0;
    for (double th : {-0.5, -0.2, 0.1, 0.4}) {
      const FarFieldPoint fp = far_field(th, inc, s, ev);
      worst_cont = std::max(
          {worst_cont,
           std::abs(fp.reflection_smooth - base[i].reflection_smooth),
           std::abs(fp.transmission_smooth - base[i].transmission_smooth)});
      ++i;
    }
  }
  const bool ok = limit_dev <= 1e-12 && worst_cont <= 1e-4;
  set_line(9, ok, "degenerate limit algebra and continuity",
           "|c- - (c+ - 1)| " + fmt(limit_dev) +
               " (tol 1e-12), amplitude jump across k* +- 1e-6: " +
               fmt(worst_cont) + " (tol 1e-4)");
}

// ---------------------------------------------------------------------------
// 10: decay-floor bound for every closed mode across random draws.

void run_evanescent_bound() {
  std::mt19937_64 rng(911);
  std::uniform_real_distribution<double> dk(0.3, 6.0), db(1.0, 5.0),
      da(0.5, 10.0), dv(-3.0, 8.0), du(0.0, 1.0);
  int violations = 0, checked = 0;
  double closest = 1e300;  // min lhs - rhs margin seen
  while (checked < 10000) {
    WaveguideSpec s;
    s.b = db(rng);
    s.V0 = dv(rng);
    s.a_minus = 0.0;
    s.a_plus = da(rng);
    const double k = dk(rng);
    const double pb = pi / s.b;
    if (!(k * k >= pb * pb + s.V0.real())) continue;  // bound hypothesis
    const int ns = n_star(k, s);
    const int n = ns + 1 + static_cast<int>(du(rng) * 8.0);
    const BoundCheck bc = evanescent_bound_check(n, s, k);
    if (!bc.holds) ++violations;
    closest = std::min(closest, bc.lhs - bc.rhs);
    ++checked;
  }
  set_line(10, violations == 0, "closed-mode decay floor",
           std::to_string(violations) +
               " violations in 10000 draws (required 0); smallest margin " +
               fmt(closest));
}

// ---------------------------------------------------------------------------
// 11: deep filter regime: transmission is dead across the whole sector.

void run_filter() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 10.0;
  s.a_minus = 0.0;
  s.a_plus = 20.0;
  const double k = 0.5;
  const RegimeReport rep = classify_regime(s, k);
  const Incidence inc = Incidence::make(k, 10.0 * pi / 180.0);
  std::vector<double> grid;
  for (int i = 0; i < 181; ++i)
    grid.push_back((-89.5 + 179.0 * i / 180.0) * pi / 180.0);
  const AmplitudePair amp = amplitudes(inc, s, grid);
  double worst = 0.0;
  for (const cdouble& t : amp.T.smooth) worst = std::max(worst, std::abs(t));
  const bool ok = worst <= 1e-4 && rep.regime == Regime::filter;
  set_line(11, ok, "filter regime suppresses transmission",
           "max |T| " + fmt(worst) + " over 181 angles (tol 1e-4), regime=" +
               regime_name(rep.regime));
}

// ---------------------------------------------------------------------------
// 12: transfer across two abutting segments composes to the full segment.

void run_composition() {
  WaveguideSpec full;
  full.b = pi;
  full.V0 = 2.0;
  full.a_minus = -0.4;
  full.a_plus = 1.6;
  WaveguideSpec left = full, right = full;
  left.a_plus = 0.3;
  right.a_minus = 0.3;
  const double k = 2.5;
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const Matrix2 whole = transfer_entries_mode(n, full, k);
    const Matrix2 prod = transfer_entries_mode(n, right, k) *
                         transfer_entries_mode(n, left, k);
    worst = std::max(worst, (prod - whole).norm() / whole.norm());
  }
  set_line(12, worst <= 1e-10, "segment transfer composes",
           "max rel " + fmt(worst) + " over modes 1..6 (tol 1e-10)");
}

// ---------------------------------------------------------------------------
// 13: the dense assembly restricted to the channel basis reproduces the
// per-mode formulas and stays diagonal.

void run_cross_path() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = 0.0;
  s.a_plus = 2.0;
  const double k = 2.5;
  const int N = 12;
  const auto [gp, gm] = assemble_gamma_general(well_basis(s, N), k, s.a());
  double worst_diag = 0.0, worst_off = 0.0;
  for (int n = 1; n <= N; ++n) {
    const PerModeCoefficients pm = per_mode_coefficients(n, s, k);
    worst_diag = std::max({worst_diag, std::abs(gp(n - 1, n - 1) - pm.c_plus),
                           std::abs(gm(n - 1, n - 1) - pm.c_minus)});
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j)
        worst_off = std::max({worst_off, std::abs(gp(i, j)),
                              std::abs(gm(i, j))});
  const bool ok = worst_diag <= 1e-8 && worst_off <= 1e-8;
  set_line(13, ok, "dense assembly matches the per-mode route",
           "diag dev " + fmt(worst_diag) + ", off-diag max " + fmt(worst_off) +
               " (tol 1e-8)");
}

// ---------------------------------------------------------------------------
// 14: feeding one mode through the interior scattering matrix.

void run_injection() {
  WaveguideSpec s;
  s.b = pi;
  s.V0 = 2.0;
  s.a_minus = -0.7;
  s.a_plus = 1.3;
  const double k = 2.5;
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const Matrix2 S = interior_s_matrix(n, s, k);
    const InjectionResult inj = mode_injection(n, s, k);
    worst = std::max({worst, std::abs(inj.transmitted - S(0, 0)),
                      std::abs(inj.reflected - S(1, 0))});
  }
  WaveguideSpec empty = s;
  empty.V0 = 0.0;
  double ep_dev = 0.0;
  for (int n : {1, 2}) {
    const InjectionResult inj = mode_injection(n, empty, double(n));
    ep_dev = std::max(ep_dev, std::abs(inj.transmitted - 1.0) +
                                  std::abs(inj.reflected));
  }
  const bool ok = worst <= 1e-12 && ep_dev == 0.0;
  set_line(14, ok, "mode injection through the interior S-matrix",
           "max block dev " + fmt(worst) +
               " (tol 1e-12), empty-guide degeneracy dev " + fmt(ep_dev) +
               " (required exact)");
}

// ---------------------------------------------------------------------------
// 15: CLI determinism and CSV <-> JSON agreement.

int ulp_gap(double a, double b) {
  if (a == b) return 0;
  if (!std::isfinite(a) || !std::isfinite(b)) return 1 << 30;
  long long ia, ib;
  std::memcpy(&ia, &a, 8);
  std::memcpy(&ib, &b, 8);
  if (ia < 0) ia = std::numeric_limits<long long>::min() - ia;
  if (ib < 0) ib = std::numeric_limits<long long>::min() - ib;
  const long long d = ia > ib ? ia - ib : ib - ia;
  return d > (1 << 30) ? (1 << 30) : static_cast<int>(d);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void run_cli_determinism() {
  const fs::path dir =
      fs::temp_directory_path() / ("wgscat_accept_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "geometry.a_minus = -0.7\n"
           "geometry.a_plus = 1.3\n"
           "geometry.b = 3.141592653589793\n"
           "medium.V0_real = 2\n"
           "incidence.k = 2.5\n"
           "incidence.theta0_deg = 12\n"
           "incidence.side = left\n"
           "grid.theta_points = 41\n";
  }
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(WGSCAT_CLI_PATH) + " " + args +
                            " > " + (dir / "stdout").string() + " 2> " +
                            (dir / "stderr").string();
    return std::system(cmd.c_str());
  };
  const fs::path c1 = dir / "a.csv", c2 = dir / "b.csv", js = dir / "a.json";
  bool ok = true;
  std::string detail;
  if (run("scatter --config " + cfg.string() + " --out " + c1.string()) != 0 ||
      run("scatter --config " + cfg.string() + " --out " + c2.string()) != 0 ||
      run("scatter --config " + cfg.string() + " --format json --out " +
          js.string()) != 0) {
    ok = false;
    detail = "CLI run failed";
  } else {
    const std::string t1 = slurp(c1), t2 = slurp(c2);
    const bool identical = t1 == t2 && !t1.empty();
    int worst_ulp = 0;
    std::size_t rows_compared = 0;
    const auto doc = nlohmann::json::parse(slurp(js));
    std::istringstream is(t1);
    std::string line;
    std::vector<std::array<double, 7>> rows;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
      std::array<double, 7> row{};
      std::size_t pos = 0;
      for (int c = 0; c < 7; ++c) {
        const std::size_t next = line.find(',', pos);
        row[c] = std::stod(line.substr(pos, next - pos));
        pos = next == std::string::npos ? line.size() : next + 1;
      }
      rows.push_back(row);
    }
    const auto& jrows = doc.at("rows");
    if (jrows.size() != rows.size()) {
      ok = false;
      detail = "row count mismatch";
    } else {
      static const char* keys[7] = {"theta_deg", "R_re", "R_im", "R_abs2",
                                    "T_re",      "T_im", "T_abs2"};
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < 7; ++c) {
          worst_ulp = std::max(
              worst_ulp, ulp_gap(rows[i][c], jrows[i].at(keys[c]).get<double>()));
          ++rows_compared;
        }
      ok = identical && worst_ulp <= 1;
      detail = std::string("rerun bytes ") +
               (identical ? "identical" : "DIFFER") + ", csv vs json worst " +
               std::to_string(worst_ulp) + " ulp over " +
               std::to_string(rows_compared) + " values (tol 1)";
    }
  }
  fs::remove_all(dir);
  set_line(15, ok, "CLI determinism and round-trip", detail);
}

}  // namespace

int main() {
  run_oracle_equivalence();
  run_propagator_equivalence();
  run_biortho();
  run_ep_growth();
  run_intertwining();
  run_empty_guide();
  run_ep_length_invariance();
  run_ep_limit();
  run_evanescent_bound();
  run_filter();
  run_composition();
  run_cross_path();
  run_injection();
  run_cli_determinism();
  int failures = 0;
  for (int i = 1; i <= 15; ++i) {
    std::printf("%s %2d %s\n", lines[i].ok ? "PASS" : "FAIL", i,
                lines[i].text.c_str());
    if (!lines[i].ok) ++failures;
  }
  return failures;
}
