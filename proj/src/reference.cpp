#include "wgscat/reference.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace wgscat::ref {

namespace {

// Kronrod-15 abscissae/weights on [-1, 1] (positive half) and the embedded
// Gauss-7 weights, QUADPACK values.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  cdouble kronrod;
  double error;
};

PanelResult gk15(const std::function<cdouble(double)>& f, double lo,
                 double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  cdouble fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * xgk[j]);
    fv[14 - j] = f(c + h * xgk[j]);
  }
  fv[7] = f(c);
  cdouble resk = wgk[7] * fv[7];
  cdouble resg = wg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    resk += wgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) resg += wg[j / 2] * (fv[j] + fv[14 - j]);
  }
  resk *= h;
  resg *= h;
  return {resk, std::abs(resk - resg)};
}

}  // namespace

cdouble integrate(const std::function<cdouble(double)>& f, double lo,
                  double hi, double abs_tol, int max_depth) {
  if (!(hi > lo)) return 0.0;
  // Global strategy: bisect the worst panel until the summed error estimate
  // meets the tolerance.  A sharp local feature then costs panels near the
  // feature only, instead of pushing an ever-shrinking tolerance down the
  // recursion everywhere.
  struct Panel {
    double lo, hi;
    PanelResult r;
    int depth;
  };
  auto worse = [](const Panel& x, const Panel& y) {
    return x.r.error < y.r.error;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> active(worse);
  std::vector<Panel> frozen;  // cannot be refined further
  active.push({lo, hi, gk15(f, lo, hi), 0});
  double err_sum = active.top().r.error;
  const std::size_t max_panels = 4096;
  while (err_sum > abs_tol && !active.empty() &&
         active.size() + frozen.size() < max_panels) {
    const Panel p = active.top();
    active.pop();
    const double mid = 0.5 * (p.lo + p.hi);
    if (p.depth >= max_depth || !(p.lo < mid && mid < p.hi)) {
      frozen.push_back(p);
      continue;
    }
    const Panel a{p.lo, mid, gk15(f, p.lo, mid), p.depth + 1};
    const Panel b{mid, p.hi, gk15(f, mid, p.hi), p.depth + 1};
    err_sum += a.r.error + b.r.error - p.r.error;
    active.push(a);
    active.push(b);
  }
  cdouble total = 0.0;
  double err = 0.0;
  for (const Panel& p : frozen) {
    total += p.r.kronrod;
    err += p.r.error;
  }
  while (!active.empty()) {
    total += active.top().r.kronrod;
    err += active.top().r.error;
    active.pop();
  }
  if (err > 64.0 * abs_tol)
    throw std::runtime_error("adaptive quadrature did not converge");
  return total;
}

cdouble integrate_split(const std::function<cdouble(double)>& f, double lo,
                        double hi, std::vector<double> splits,
                        double abs_tol) {
  splits.push_back(lo);
  splits.push_back(hi);
  std::sort(splits.begin(), splits.end());
  cdouble total = 0.0;
  double prev = lo;
  bool started = false;
  for (double s : splits) {
    if (s < lo || s > hi) continue;
    if (!started) {
      prev = s;
      started = true;
      continue;
    }
    if (s > prev) {
      total += integrate(f, prev, s, abs_tol * (s - prev) / (hi - lo));
      prev = s;
    }
  }
  return total;
}

cdouble branch_split_quadrature(const std::function<cdouble(double)>& f,
                                double k, double lo, double hi,
                                double abs_tol) {
  return integrate_split(f, lo, hi, {-k, k}, abs_tol);
}

MatrixX dense_expm(const MatrixX& M, cdouble scale) {
  const auto n = M.rows();
  MatrixX A = scale * M;
  // Pade (13,13) coefficients.
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const double theta13 = 5.371920351148152;
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  if (!std::isfinite(norm) || norm > theta13 * 1.1e12)
    throw std::range_error("dense_expm: norm too large to scale down");
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  A /= std::pow(2.0, s);

  const MatrixX I = MatrixX::Identity(n, n);
  const MatrixX A2 = A * A;
  const MatrixX A4 = A2 * A2;
  const MatrixX A6 = A2 * A4;
  const MatrixX U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
           b[5] * A4 + b[3] * A2 + b[1] * I);
  const MatrixX V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                    b[4] * A4 + b[2] * A2 + b[0] * I;
  MatrixX F = (V - U).fullPivLu().solve(V + U);
  for (int i = 0; i < s; ++i) F = F * F;
  return F;
}

Matrix2 interface_transfer(const Slab1D& s) {
  const cdouble q = s.wavevector_inside;
  const cdouble kap = s.wavevector_outside;
  if (q == 0.0 || kap == 0.0)
    throw std::domain_error("interface_transfer: zero wavevector (singular matching)");
  const cdouble i1(0.0, 1.0);
  auto plane = [&](cdouble wv, double x) {
    Matrix2 m;
    const cdouble ep = std::exp(i1 * wv * x);
    const cdouble em = std::exp(-i1 * wv * x);
    m << ep, em, i1 * wv * ep, -i1 * wv * em;
    return m;
  };
  // (value, derivative) continuity at both faces: outside basis referenced to
  // x = 0, inside basis referenced to x_left.
  const Matrix2 out_l = plane(kap, s.x_left);
  const Matrix2 out_r = plane(kap, s.x_right);
  const Matrix2 in_l = plane(q, 0.0);
  const Matrix2 in_r = plane(q, s.x_right - s.x_left);
  return out_r.inverse() * in_r * in_l.inverse() * out_l;
}

SlabScatter slab_scatter(const Slab1D& s) {
  const cdouble q = s.wavevector_inside;
  const cdouble kap = s.wavevector_outside;
  if (kap == 0.0)
    throw std::domain_error("slab_scatter: zero exterior wavevector");
  const double d = s.x_right - s.x_left;
  const cdouble i1(0.0, 1.0);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd rhs;
  if (std::abs(q * d) > 1e-8) {
    const cdouble E = std::exp(i1 * q * d);
    // Unknowns (r, alpha, beta, t); interior alpha e^{iq(x-xl)} + beta
    // e^{-iq(x-xr)} keeps every coefficient bounded for evanescent q.
    m(0, 0) = -1.0; m(0, 1) = 1.0; m(0, 2) = E;
    m(1, 0) = i1 * kap; m(1, 1) = i1 * q; m(1, 2) = -i1 * q * E;
    m(2, 1) = E; m(2, 2) = 1.0; m(2, 3) = -1.0;
    m(3, 1) = i1 * q * E; m(3, 2) = -i1 * q; m(3, 3) = -i1 * kap;
    rhs << 1.0, i1 * kap, 0.0, 0.0;
  } else {
    // Degenerate interior: basis {1, x - x_left}.
    m(0, 0) = -1.0; m(0, 1) = 1.0;
    m(1, 0) = i1 * kap; m(1, 2) = 1.0;
    m(2, 1) = 1.0; m(2, 2) = d; m(2, 3) = -1.0;
    m(3, 2) = 1.0; m(3, 3) = -i1 * kap;
    rhs << 1.0, i1 * kap, 0.0, 0.0;
  }
  const Eigen::Vector4cd sol = m.fullPivLu().solve(rhs);
  return {sol(0), sol(3), sol(1), sol(2)};
}

MatrixX well_varpi_matrix(int N, double b, double k) {
  // Kinetic Gram <phi_m' | phi_n'> by quadrature; split at the shared
  // oscillation nodes to keep panels smooth.
  MatrixX G(N, N);
  for (int mi = 1; mi <= N; ++mi) {
    for (int ni = mi; ni <= N; ++ni) {
      const double cm = pi * mi / b, cn = pi * ni / b;
      auto integrand = [&](double y) {
        const double dm = std::sqrt(2.0 / b) * cm * std::cos(cm * y);
        const double dn = std::sqrt(2.0 / b) * cn * std::cos(cn * y);
        return cdouble(dm * dn, 0.0);
      };
      // Resolve the oscillation: one panel per half-period of the faster mode.
      std::vector<double> splits;
      const int panels = 2 * std::max(mi, ni);
      for (int j = 1; j < panels; ++j) splits.push_back(b * j / panels);
      const cdouble val = integrate_split(integrand, 0.0, b, splits, 1e-13);
      G(mi - 1, ni - 1) = val;
      G(ni - 1, mi - 1) = val;
    }
  }
  // Compress k^2 - p^2 first, take the branched square root after.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (Eigen::MatrixXd::Identity(N, N) * k * k) - G.real());
  MatrixX root = MatrixX::Zero(N, N);
  Eigen::MatrixXd Vecs = es.eigenvectors();
  for (int j = 0; j < N; ++j) {
    const double lam = es.eigenvalues()(j);
    const cdouble rt = lam >= 0.0 ? cdouble(std::sqrt(lam), 0.0)
                                  : cdouble(0.0, std::sqrt(-lam));
    root += rt * (Vecs.col(j) * Vecs.col(j).transpose()).cast<cdouble>();
  }
  return root;
}

}  // namespace wgscat::ref
