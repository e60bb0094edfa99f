#include "wgscat/amplitudes.hpp"

#include <cmath>
#include <stdexcept>

namespace wgscat {

WallTerm wall_terms(double theta, const Incidence& inc,
                    const WaveguideSpec& spec) {
  const double ct = std::cos(theta);
  const bool left = inc.side == Side::left;
  if ((left && ct >= 0.0) || (!left && ct <= 0.0))
    throw std::domain_error("wall_terms: theta outside the reflection sector");
  const double k = inc.k;
  const double ct0 = inc.cos_theta0_signed();
  const double p = k * std::sin(theta);
  const double p0 = inc.p0();
  const double a_face = left ? spec.a_minus : spec.a_plus;
  const double sign = left ? -1.0 : 1.0;
  const cdouble phase = std::exp(cdouble(0.0, 2.0 * a_face * k * ct0));
  WallTerm out;
  out.smooth =
      sign * k * ct0 * lambda_kernel(p, p0, spec.b) / (2.0 * pi) * phase;
  // Specular direction: the unique solution of sin(theta) = sin(theta0) in
  // the reflection sector.
  out.delta.theta_sing = left ? pi - inc.theta0 : inc.theta0;
  out.delta.coeff = phase;
  return out;
}

FarFieldPoint far_field(double theta_fwd, const Incidence& inc,
                        const WaveguideSpec& spec, KernelEvaluator& kernel) {
  const double k = inc.k;
  const double ctf = std::cos(theta_fwd);
  if (!(ctf >= 1e-6))
    throw std::domain_error("far_field: |cos(theta)| below the sector guard");
  const bool left = inc.side == Side::left;
  FarFieldPoint out;
  out.theta_transmit = left ? theta_fwd : pi - theta_fwd;
  out.theta_reflect = left ? pi - theta_fwd : theta_fwd;
  const double ct_T = left ? ctf : -ctf;
  const double ct_R = left ? -ctf : ctf;
  const double ct0 = inc.cos_theta0_signed();
  const double p = k * std::sin(theta_fwd);
  const KernelPoint kp = kernel.eval(p, inc.p0());
  const cdouble i1(0.0, 1.0);
  const double root2pi = std::sqrt(2.0 * pi);
  const double a_in = left ? spec.a_minus : spec.a_plus;   // entry face
  const double a_out = left ? spec.a_plus : spec.a_minus;  // exit face
  const double rsign = left ? 1.0 : -1.0;
  // Interior reflection part plus the wall contribution (assembled with the
  // common -i sqrt(2pi) prefactor).
  const WallTerm wall = wall_terms(out.theta_reflect, inc, spec);
  out.reflection_smooth =
      rsign * i1 * root2pi * k * ct_R *
          std::exp(i1 * a_in * k * (ct0 - ct_R)) * kp.gamma_minus -
      i1 * root2pi * wall.smooth;
  out.transmission_smooth = -rsign * i1 * root2pi * k * ct_T *
                            std::exp(i1 * k * (a_in * ct0 - a_out * ct_T)) *
                            kp.gamma_plus;
  return out;
}

AmplitudePair amplitudes(const Incidence& inc, const WaveguideSpec& spec,
                         const std::vector<double>& theta_fwd_grid,
                         int n_modes) {
  KernelEvaluator kernel(spec, inc.k, n_modes);
  AmplitudePair out;
  out.R.smooth.reserve(theta_fwd_grid.size());
  out.T.smooth.reserve(theta_fwd_grid.size());
  for (double th : theta_fwd_grid) {
    const FarFieldPoint pt = far_field(th, inc, spec, kernel);
    out.R.smooth.push_back(pt.reflection_smooth);
    out.T.smooth.push_back(pt.transmission_smooth);
    out.R.theta.push_back(pt.theta_reflect);
    out.T.theta.push_back(pt.theta_transmit);
  }
  const auto [dR, dT] = delta_descriptors(inc, spec);
  out.R.delta = dR;
  out.T.delta = dT;
  out.trunc.used = kernel.max_used();
  out.trunc.adaptive = n_modes == 0;
  return out;
}

std::pair<DeltaTerm, DeltaTerm> delta_descriptors(const Incidence& inc,
                                                  const WaveguideSpec& spec) {
  const bool left = inc.side == Side::left;
  const cdouble i1(0.0, 1.0);
  // Wall mirror delta (assembled) and the forward delta cancelling the
  // blocked incident wave.
  const double specular = left ? pi - inc.theta0 : inc.theta0;
  const cdouble phase =
      std::exp(cdouble(0.0, 2.0 * (left ? spec.a_minus : spec.a_plus) *
                                inc.k * inc.cos_theta0_signed()));
  return {DeltaTerm{specular, -i1 * phase},
          DeltaTerm{left ? inc.theta0 : pi - inc.theta0, i1}};
}

Matrix2 interior_s_matrix(int n, const WaveguideSpec& spec, double k) {
  const PerModeCoefficients c = per_mode_coefficients(n, spec, k);
  const cdouble i1(0.0, 1.0);
  const cdouble vp = c.varpi_n;
  Matrix2 s;
  s(0, 0) = std::exp(-i1 * spec.a() * vp) * c.c_plus;
  s(1, 1) = s(0, 0);
  s(0, 1) = std::exp(-2.0 * i1 * spec.a_plus * vp) * c.c_minus;
  s(1, 0) = std::exp(2.0 * i1 * spec.a_minus * vp) * c.c_minus;
  return s;
}

InjectionResult mode_injection(int n, const WaveguideSpec& spec, double k) {
  const PerModeCoefficients c = per_mode_coefficients(n, spec, k);
  const cdouble i1(0.0, 1.0);
  InjectionResult out;
  out.transmitted = std::exp(-i1 * spec.a() * c.varpi_n) * c.c_plus;
  out.reflected = std::exp(2.0 * i1 * spec.a_minus * c.varpi_n) * c.c_minus;
  out.exceptional = c.kind == ModeKind::exceptional;
  if (out.exceptional && spec.V0 == 0.0) {
    // Degenerate empty guide: the injected wave passes unchanged.
    out.transmitted = 1.0;
    out.reflected = 0.0;
  }
  return out;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::empty: return "empty";
    case Regime::exceptional: return "exceptional";
    case Regime::filter: return "filter";
    case Regime::large_a_propagating: return "large_a_propagating";
    case Regime::generic: return "generic";
  }
  return "generic";
}

RegimeReport classify_regime(const WaveguideSpec& spec, double k) {
  spec.validate();
  RegimeReport rep;
  const EvanescentGap gap = evanescent_gap(spec, k);
  rep.n_star = gap.n_star;
  rep.eta = gap.eta;
  rep.a_eta_over_b = spec.a() * gap.eta / spec.b;
  rep.min_evanescent_awn = gap.min_awn;
  // A mode inside the degenerate window flags the run as exceptional.
  for (int n = std::max(1, gap.n_star - 1); n <= gap.n_star + 2; ++n) {
    if (std::abs(spec.a() * w_mode(n, spec, k)) < 1e-4) {
      rep.exceptional = true;
      break;
    }
  }
  const double v0 = spec.V0.real();
  const double a = spec.a();
  const double filter_arg = v0 + (pi / spec.b) * (pi / spec.b) - 1.0 / (a * a);
  if (spec.V0 == 0.0)
    rep.regime = Regime::empty;
  else if (rep.exceptional)
    rep.regime = Regime::exceptional;
  else if (filter_arg > 0.0 && 2.0 * k <= std::sqrt(filter_arg))
    rep.regime = Regime::filter;
  else if (gap.n_star >= 1 && rep.a_eta_over_b >= 10.0)
    rep.regime = Regime::large_a_propagating;
  else
    rep.regime = Regime::generic;
  return rep;
}

}  // namespace wgscat
