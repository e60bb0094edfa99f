#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgscat/dispersion.hpp"

namespace wgscat {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value run description with dotted section names and '#'
// comments.  Unknown and duplicate keys are rejected with line diagnostics.
//
//   geometry.a_minus / a_plus / b
//   medium.V0_real / V0_imag
//   incidence.k  |  incidence.k_min / k_max / k_steps   (one of the two)
//   incidence.theta0_deg, incidence.side (left | right)
//   grid.theta_points, grid.exclusion_band_deg
//   truncation.max_modes (0 = automatic), truncation.tol
//   output.format (csv | json), output.path, output.emit_field,
//   output.field_box (x_min,x_max,y_min,y_max), output.field_grid (nx,ny)
struct RunConfig {
  WaveguideSpec well;

  bool has_k = false;
  double k = 0.0;
  bool has_sweep = false;
  double k_min = 0.0, k_max = 0.0;
  int k_steps = 0;

  double theta0_deg = 0.0;
  Side side = Side::left;

  int theta_points = 721;
  double exclusion_band_deg = 0.5;

  int max_modes = 0;  // 0 = automatic
  double tol = 1e-8;  // rows with a larger reported truncation tail get flagged

  std::string format = "csv";  // csv | json
  std::string out_path;        // empty = stdout (single-k runs only)
  bool emit_field = false;
  bool has_field_box = false;
  double field_box[4] = {0.0, 0.0, 0.0, 0.0};  // x_min, x_max, y_min, y_max
  int field_grid[2] = {41, 41};                // nx, ny

  // Forward-sector incidence angle in radians (right-side inputs given in the
  // (90, 270) degree range are folded to their mirror image).
  double theta0_rad() const;

  std::vector<double> k_values() const;
  void validate() const;  // throws ConfigError
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Stable FNV-1a hash of the canonical key = value serialization; stamped into
// output headers so results can be traced back to their configuration.
std::uint64_t config_hash(const RunConfig& cfg);

// Shortest text that round-trips the double exactly ("%.17g" family).
std::string format_double(double v);

}  // namespace wgscat
