#pragma once

#include <vector>

#include "wgscat/coefficients.hpp"

namespace wgscat {

struct FieldRequest {
  double x_min = -1.0, x_max = 1.0;
  int nx = 41;
  double y_min = 0.0, y_max = 1.0;
  int ny = 41;
};

// Total field psi(x, y) on a rectangular grid, row-major with y as the inner
// index.  Includes the incident wave, the wall-reflected wave, the smooth
// scattered integrals outside the segment and the matched mode expansion
// inside it.
struct FieldMapResult {
  std::vector<double> xs, ys;
  std::vector<cdouble> values;  // values[ix * ny + iy]
  TruncationInfo trunc;

  cdouble at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * ys.size() + iy];
  }
};

FieldMapResult field_map(const Incidence& inc, const WaveguideSpec& spec,
                         const FieldRequest& req, int n_modes = 0);

// Field at a single point (same conventions as field_map).
cdouble field_at(double x, double y, const Incidence& inc,
                 const WaveguideSpec& spec, int n_modes = 0);

}  // namespace wgscat
