#pragma once

#include <vector>

#include "wgscat/modes.hpp"

namespace wgscat {

// Interval scattering coefficients of a single channel mode.  c_plus carries
// the transmitted (forward) content of the segment, c_minus the returned
// content; t_n is the infinite-length limit of c_minus.  Both propagating and
// evanescent modes are covered by one formula through the branched w_n:
//
//   denom  = (w + vp)^2 - (vp - w)^2 e^{2 i a w}
//   c_plus = 4 w vp e^{i a w} / denom
//   c_minus= (w^2 - vp^2)(1 - e^{2 i a w}) / denom
//
// with vp = varpi_n.  Within ep_window of a degeneracy the limit forms
// c_plus = 1 / (1 - i a vp / 2), c_minus = c_plus - 1 are used instead.
struct PerModeCoefficients {
  int n = 0;
  cdouble c_plus;
  cdouble c_minus;
  cdouble t_n;  // (w - vp) / (w + vp)
  cdouble w_n, varpi_n;
  ModeKind kind = ModeKind::evanescent;
};

PerModeCoefficients per_mode_coefficients(int n, const WaveguideSpec& spec,
                                          double k, double ep_window = 1e-4);

std::vector<PerModeCoefficients> coefficient_set(const WaveguideSpec& spec,
                                                 double k, int N);

// Default mode count for kernel sums: max(4 n_star, n_star + 32).
int default_truncation(const WaveguideSpec& spec, double k);

struct TruncationInfo {
  int used = 0;       // modes actually summed
  double tail = 0.0;  // relative size of the last block of terms
  bool adaptive = false;
};

struct KernelPoint {
  cdouble gamma_plus;
  cdouble gamma_minus;
};

// Evaluates the interval kernels
//   Gamma_+-(p, p0) = (1/2pi) sum_n c^+-_n phi_tilde_n(p0)^* phi_tilde_n(p)
// in ascending n, caching the per-mode coefficients between calls.  With
// n_override = 0 the sum starts at the default truncation and grows until the
// last `tail_block` modes contribute below tail_tol in relative terms.
class KernelEvaluator {
 public:
  KernelEvaluator(const WaveguideSpec& spec, double k, int n_override = 0);

  KernelPoint eval(double p, double p0, TruncationInfo* info = nullptr);
  int max_used() const { return max_used_; }
  const WaveguideSpec& spec() const { return spec_; }
  double k() const { return k_; }

  static constexpr int tail_block = 8;
  static constexpr double tail_tol = 1e-10;
  static constexpr int hard_cap = 1 << 14;

 private:
  void ensure(int N);

  WaveguideSpec spec_;
  double k_;
  int n_override_;
  int floor_;
  int max_used_ = 0;
  std::vector<PerModeCoefficients> coeffs_;
};

// One-shot convenience wrapper around KernelEvaluator.
KernelPoint gamma_kernel(double p, double p0, const WaveguideSpec& spec,
                         double k, int n_modes = 0,
                         TruncationInfo* info = nullptr);

}  // namespace wgscat
