#include "doctest.h"
#include "wgscat/amplitudes.hpp"
#include "wgscat/field_map.hpp"
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
const Incidence kInc = Incidence::make(2.5, 0.35, Side::left);
}  // namespace

TEST_CASE("hard walls carry exactly zero field inside the segment") {
  CHECK(field_at(0.3, -0.5, kInc, kSpec) == cdouble(0.0, 0.0));
  CHECK(field_at(1.0, 3.6, kInc, kSpec) == cdouble(0.0, 0.0));
  CHECK(field_at(0.3, 1.1, kInc, kSpec) != cdouble(0.0, 0.0));
}

TEST_CASE("field is continuous across both interfaces") {
  const double eps = 1e-4;
  for (double y : {0.4, 1.7, 2.9}) {
    const cdouble lo = field_at(kSpec.a_minus - eps, y, kInc, kSpec);
    const cdouble li = field_at(kSpec.a_minus + eps, y, kInc, kSpec);
    const cdouble ri = field_at(kSpec.a_plus - eps, y, kInc, kSpec);
    const cdouble ro = field_at(kSpec.a_plus + eps, y, kInc, kSpec);
    CHECK(std::abs(lo - li) < 1e-3);
    CHECK(std::abs(ro - ri) < 1e-3);
  }
  // the residual is the evaluation offset, not a jump: it shrinks linearly
  const double j1 =
      std::abs(field_at(kSpec.a_minus - 1e-3, 1.7, kInc, kSpec) -
               field_at(kSpec.a_minus + 1e-3, 1.7, kInc, kSpec));
  const double j2 =
      std::abs(field_at(kSpec.a_minus - 1e-4, 1.7, kInc, kSpec) -
               field_at(kSpec.a_minus + 1e-4, 1.7, kInc, kSpec));
  CHECK(j2 < j1 / 5.0);
  CHECK(j2 > j1 / 20.0);
}

TEST_CASE("field vanishes toward the wall portions of the faces") {
  for (double y : {-0.8, 3.6}) {
    CHECK(std::abs(field_at(kSpec.a_minus - 1e-4, y, kInc, kSpec)) < 1e-3);
    CHECK(std::abs(field_at(kSpec.a_plus + 1e-4, y, kInc, kSpec)) < 1e-3);
  }
}

TEST_CASE("mirror-symmetric segment: the two sides render mirror fields") {
  WaveguideSpec sym = kSpec;
  sym.a_minus = -1.0;
  sym.a_plus = 1.0;
  const Incidence li = Incidence::make(2.5, 0.35, Side::left);
  const Incidence ri = Incidence::make(2.5, 0.35, Side::right);
  for (double x : {-1.9, -0.3, 0.8, 2.2}) {
    for (double y : {0.6, 2.4}) {
      const cdouble fl = field_at(x, y, li, sym);
      const cdouble fr = field_at(-x, y, ri, sym);
      CHECK(std::abs(fl - fr) < 1e-10);
    }
  }
}

TEST_CASE("exterior field equals the spectral resolution of the solution") {
  // independent route: integrate the coefficient functions directly in p
  const auto cs = coefficient_functions(kInc, kSpec);
  const cdouble i1(0.0, 1.0);
  const double k = kInc.k;

  // left of the segment: incident + specular delta pair + smooth return
  {
    const double x = kSpec.a_minus - 0.8, y = 1.2;
    REQUIRE(cs.A_minus.delta.has_value());
    REQUIRE(cs.B_minus.delta.has_value());
    const auto [pA, cA] = *cs.A_minus.delta;
    const auto [pB, cB] = *cs.B_minus.delta;
    cdouble psi = cA * std::exp(i1 * (varpi(pA, k) * x + pA * y)) +
                  cB * std::exp(i1 * (-varpi(pB, k) * x + pB * y));
    auto f = [&](double p) {
      return cs.script_B_minus.smooth(p) *
             std::exp(i1 * (-varpi(p, k) * x + p * y));
    };
    psi += ref::branch_split_quadrature(f, k, -40.0, 40.0, 1e-9);
    CHECK(std::abs(psi - field_at(x, y, kInc, kSpec)) < 1e-6);
  }

  // right of the segment: purely outgoing smooth transmission
  {
    const double x = kSpec.a_plus + 0.8, y = 1.9;
    CHECK(!cs.A_plus.delta.has_value());
    CHECK(!cs.B_plus.delta.has_value());
    CHECK(std::abs(cs.B_plus.smooth(0.4)) == 0.0);
    auto f = [&](double p) {
      return cs.script_A_plus.smooth(p) *
             std::exp(i1 * (varpi(p, k) * x + p * y));
    };
    const cdouble psi = ref::branch_split_quadrature(f, k, -40.0, 40.0, 1e-9);
    CHECK(std::abs(psi - field_at(x, y, kInc, kSpec)) < 1e-6);
  }
}

TEST_CASE("projected coefficients are the windowed restrictions") {
  const auto cs = coefficient_functions(kInc, kSpec);
  const double k = kInc.k;
  const double inside = 0.8 * k, outside = 1.3 * k;
  CHECK(std::abs(cs.B_minus.smooth(inside) -
                 cs.script_B_minus.smooth(inside)) == 0.0);
  CHECK(std::abs(cs.B_minus.smooth(outside)) == 0.0);
  CHECK(std::abs(cs.script_B_minus.smooth(outside)) > 0.0);
  CHECK(std::abs(cs.A_plus.smooth(outside)) == 0.0);
}

TEST_CASE("field map grid bookkeeping") {
  FieldRequest req;
  req.x_min = -1.5;
  req.x_max = 2.0;
  req.nx = 8;
  req.y_min = -0.5;
  req.y_max = 3.5;
  req.ny = 5;
  const FieldMapResult fm = field_map(kInc, kSpec, req, 10);
  REQUIRE(fm.xs.size() == 8);
  REQUIRE(fm.ys.size() == 5);
  REQUIRE(fm.values.size() == 40);
  CHECK(fm.xs.front() == -1.5);
  CHECK(fm.xs.back() == 2.0);
  CHECK(fm.ys.front() == -0.5);
  CHECK(fm.ys.back() == 3.5);
  CHECK(fm.trunc.used == 10);
  CHECK(!fm.trunc.adaptive);
  int bad = 0;
  for (const cdouble& v : fm.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) ++bad;
  CHECK(bad == 0);
  // spot-check the layout against single-point evaluation
  const cdouble direct = field_at(fm.xs[3], fm.ys[2], kInc, kSpec, 10);
  CHECK(std::abs(fm.at(3, 2) - direct) < 1e-12);
}
