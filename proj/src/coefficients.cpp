#include "wgscat/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wgscat {

PerModeCoefficients per_mode_coefficients(int n, const WaveguideSpec& spec,
                                          double k, double ep_window) {
  const ModeRecord rec = mode_record(n, spec, k, ep_window);
  const cdouble vp = rec.varpi_n;
  const cdouble w = rec.w_n;
  const double a = spec.a();
  PerModeCoefficients out;
  out.n = n;
  out.w_n = w;
  out.varpi_n = vp;
  out.kind = rec.kind;
  // At V0 = 0 the two wavevectors coincide bitwise; 0/0 only arises when both
  // vanish (cutoff of an empty guide), where the contrast ratio limits to 0.
  out.t_n = std::abs(w + vp) == 0.0 ? 0.0 : (w - vp) / (w + vp);
  if (rec.kind == ModeKind::exceptional) {
    // Degenerate limit of the interval formulas; avoids the cancellation in
    // (w+vp)^2 - (vp-w)^2 e^{2iaw} when a w is tiny.  Stays finite even when
    // varpi_n itself vanishes (empty guide at cutoff), where it gives (1, 0).
    out.c_plus = 1.0 / (1.0 - cdouble(0.0, 0.5) * a * vp);
    out.c_minus = out.c_plus - 1.0;
    return out;
  }
  if (std::abs(vp) < 1e-12 * k)
    throw std::domain_error("grazing mode: |varpi_n| < 1e-12 k");
  const cdouble E = std::exp(cdouble(0.0, 1.0) * a * w);  // |E| <= 1
  const cdouble E2 = E * E;
  const cdouble denom = (w + vp) * (w + vp) - (vp - w) * (vp - w) * E2;
  out.c_plus = 4.0 * w * vp * E / denom;
  out.c_minus = (w * w - vp * vp) * (1.0 - E2) / denom;
  return out;
}

std::vector<PerModeCoefficients> coefficient_set(const WaveguideSpec& spec,
                                                 double k, int N) {
  std::vector<PerModeCoefficients> out;
  out.reserve(N);
  for (int n = 1; n <= N; ++n)
    out.push_back(per_mode_coefficients(n, spec, k));
  return out;
}

int default_truncation(const WaveguideSpec& spec, double k) {
  const int ns = n_star(k, spec);
  return std::max(4 * ns, ns + 32);
}

KernelEvaluator::KernelEvaluator(const WaveguideSpec& spec, double k,
                                 int n_override)
    : spec_(spec), k_(k), n_override_(n_override) {
  spec_.validate();
  floor_ = n_override > 0 ? n_override : default_truncation(spec, k);
}

void KernelEvaluator::ensure(int N) {
  while (static_cast<int>(coeffs_.size()) < N) {
    const int n = static_cast<int>(coeffs_.size()) + 1;
    coeffs_.push_back(per_mode_coefficients(n, spec_, k_));
  }
}

KernelPoint KernelEvaluator::eval(double p, double p0, TruncationInfo* info) {
  if (!(std::abs(p) < k_) || !(std::abs(p0) < k_))
    throw std::domain_error("gamma kernel defined for |p| < k only");
  const double b = spec_.b;
  int N = floor_;
  cdouble gp = 0.0, gm = 0.0;
  double tail_rel = 0.0;
  for (;;) {
    ensure(N);
    gp = gm = 0.0;
    double tail_abs = 0.0;
    for (int n = 1; n <= N; ++n) {
      const cdouble overlap =
          std::conj(phi_tilde(n, b, p0)) * phi_tilde(n, b, p);
      const cdouble tp = coeffs_[n - 1].c_plus * overlap;
      const cdouble tm = coeffs_[n - 1].c_minus * overlap;
      gp += tp;
      gm += tm;
      if (n > N - tail_block) tail_abs += std::abs(tp) + std::abs(tm);
    }
    const double scale = std::max(std::abs(gp), std::abs(gm));
    tail_rel = tail_abs / std::max(scale, 1e-300);
    if (n_override_ > 0 || tail_rel < tail_tol) break;
    if (N >= hard_cap)
      throw std::runtime_error(
          "kernel truncation did not converge within the mode cap");
    N = std::min(N + 2 * tail_block, hard_cap);
  }
  if (N > max_used_) max_used_ = N;
  if (info) {
    info->used = N;
    info->tail = tail_rel;
    info->adaptive = n_override_ == 0;
  }
  return {gp / (2.0 * pi), gm / (2.0 * pi)};
}

KernelPoint gamma_kernel(double p, double p0, const WaveguideSpec& spec,
                         double k, int n_modes, TruncationInfo* info) {
  KernelEvaluator ev(spec, k, n_modes);
  return ev.eval(p, p0, info);
}

}  // namespace wgscat
