#include "wgscat/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace wgscat {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_number(const std::string& v, int line, const std::string& key) {
  const std::string t = trim(v);
  if (t.empty()) fail(line, key + ": empty value");
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    fail(line, key + ": cannot parse number '" + t + "'");
  return x;
}

int parse_int(const std::string& v, int line, const std::string& key) {
  const double x = parse_number(v, line, key);
  const int i = static_cast<int>(x);
  if (x != static_cast<double>(i))
    fail(line, key + ": expected an integer, got '" + trim(v) + "'");
  return i;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  const std::string t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  fail(line, key + ": expected true/false, got '" + t + "'");
}

std::vector<double> parse_tuple(const std::string& v, std::size_t count,
                                int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(trim(v));
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number(item, line, key));
  if (out.size() != count) {
    std::ostringstream os;
    os << key << ": expected " << count << " comma-separated numbers";
    fail(line, os.str());
  }
  return out;
}

}  // namespace

double RunConfig::theta0_rad() const {
  double th = theta0_deg;
  // Right-side angles quoted against the +x axis fold onto the forward sector.
  if (side == Side::right && th > 90.0 && th < 270.0) th = 180.0 - th;
  return th * pi / 180.0;
}

std::vector<double> RunConfig::k_values() const {
  if (has_k) return {k};
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(k_steps));
  if (k_steps == 1) {
    v.push_back(k_min);
    return v;
  }
  for (int i = 0; i < k_steps; ++i)
    v.push_back(k_min + (k_max - k_min) * i / (k_steps - 1));
  return v;
}

void RunConfig::validate() const {
  try {
    well.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  if (has_k && has_sweep)
    throw ConfigError(
        "incidence.k and incidence.k_min/k_max/k_steps are mutually exclusive");
  if (!has_k && !has_sweep)
    throw ConfigError("incidence.k or a k sweep is required");
  if (has_k && !(k > 0.0 && std::isfinite(k)))
    throw ConfigError("incidence.k must be positive and finite");
  if (has_sweep) {
    if (!(k_min > 0.0 && std::isfinite(k_min) && std::isfinite(k_max)))
      throw ConfigError("incidence.k_min must be positive and finite");
    if (!(k_max >= k_min))
      throw ConfigError("incidence.k_max must be >= incidence.k_min");
    if (k_steps < 1) throw ConfigError("incidence.k_steps must be >= 1");
  }
  if (!std::isfinite(theta0_deg))
    throw ConfigError("incidence.theta0_deg must be finite");
  if (side == Side::left && !(theta0_deg > -90.0 && theta0_deg < 90.0))
    throw ConfigError("incidence.theta0_deg must lie in (-90, 90) for side=left");
  const double th = theta0_rad();
  if (!(std::abs(th) < 0.5 * pi) || std::abs(std::cos(th)) < 1e-6)
    throw ConfigError("incidence.theta0_deg too close to grazing (+-90 deg)");
  if (theta_points < 1) throw ConfigError("grid.theta_points must be >= 1");
  if (!(exclusion_band_deg >= 1e-4 && exclusion_band_deg < 90.0))
    throw ConfigError("grid.exclusion_band_deg must lie in [1e-4, 90)");
  if (max_modes < 0 || max_modes > (1 << 14))
    throw ConfigError("truncation.max_modes must lie in [0, 16384]");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw ConfigError("truncation.tol must be positive");
  if (format != "csv" && format != "json")
    throw ConfigError("output.format must be csv or json");
  if (emit_field) {
    if (field_grid[0] < 1 || field_grid[1] < 1)
      throw ConfigError("output.field_grid entries must be >= 1");
    if (has_field_box &&
        (!(field_box[1] >= field_box[0]) || !(field_box[3] >= field_box[2])))
      throw ConfigError("output.field_box extents reversed");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

    if (key == "geometry.a_minus")
      cfg.well.a_minus = parse_number(val, line, key);
    else if (key == "geometry.a_plus")
      cfg.well.a_plus = parse_number(val, line, key);
    else if (key == "geometry.b")
      cfg.well.b = parse_number(val, line, key);
    else if (key == "medium.V0_real")
      cfg.well.V0 = cdouble(parse_number(val, line, key), cfg.well.V0.imag());
    else if (key == "medium.V0_imag")
      cfg.well.V0 = cdouble(cfg.well.V0.real(), parse_number(val, line, key));
    else if (key == "incidence.k") {
      cfg.has_k = true;
      cfg.k = parse_number(val, line, key);
    } else if (key == "incidence.k_min") {
      cfg.has_sweep = true;
      cfg.k_min = parse_number(val, line, key);
    } else if (key == "incidence.k_max") {
      cfg.has_sweep = true;
      cfg.k_max = parse_number(val, line, key);
    } else if (key == "incidence.k_steps") {
      cfg.has_sweep = true;
      cfg.k_steps = parse_int(val, line, key);
    } else if (key == "incidence.theta0_deg")
      cfg.theta0_deg = parse_number(val, line, key);
    else if (key == "incidence.side") {
      if (val == "left")
        cfg.side = Side::left;
      else if (val == "right")
        cfg.side = Side::right;
      else
        fail(line, "incidence.side must be left or right");
    } else if (key == "grid.theta_points")
      cfg.theta_points = parse_int(val, line, key);
    else if (key == "grid.exclusion_band_deg")
      cfg.exclusion_band_deg = parse_number(val, line, key);
    else if (key == "truncation.max_modes")
      cfg.max_modes = parse_int(val, line, key);
    else if (key == "truncation.tol")
      cfg.tol = parse_number(val, line, key);
    else if (key == "output.format")
      cfg.format = val;
    else if (key == "output.path")
      cfg.out_path = val;
    else if (key == "output.emit_field")
      cfg.emit_field = parse_bool(val, line, key);
    else if (key == "output.field_box") {
      const std::vector<double> t = parse_tuple(val, 4, line, key);
      for (int i = 0; i < 4; ++i) cfg.field_box[i] = t[i];
      cfg.has_field_box = true;
    } else if (key == "output.field_grid") {
      const std::vector<double> t = parse_tuple(val, 2, line, key);
      for (int i = 0; i < 2; ++i) {
        const int g = static_cast<int>(t[i]);
        if (t[i] != static_cast<double>(g))
          fail(line, key + ": entries must be integers");
        cfg.field_grid[i] = g;
      }
    } else
      fail(line, "unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::string canonical(const RunConfig& c) {
  std::ostringstream os;
  os << "geometry.a_minus=" << format_double(c.well.a_minus) << '\n'
     << "geometry.a_plus=" << format_double(c.well.a_plus) << '\n'
     << "geometry.b=" << format_double(c.well.b) << '\n'
     << "medium.V0_real=" << format_double(c.well.V0.real()) << '\n'
     << "medium.V0_imag=" << format_double(c.well.V0.imag()) << '\n';
  if (c.has_k)
    os << "incidence.k=" << format_double(c.k) << '\n';
  else
    os << "incidence.k_min=" << format_double(c.k_min) << '\n'
       << "incidence.k_max=" << format_double(c.k_max) << '\n'
       << "incidence.k_steps=" << c.k_steps << '\n';
  os << "incidence.theta0_deg=" << format_double(c.theta0_deg) << '\n'
     << "incidence.side=" << (c.side == Side::left ? "left" : "right") << '\n'
     << "grid.theta_points=" << c.theta_points << '\n'
     << "grid.exclusion_band_deg=" << format_double(c.exclusion_band_deg)
     << '\n'
     << "truncation.max_modes=" << c.max_modes << '\n'
     << "truncation.tol=" << format_double(c.tol) << '\n'
     << "output.format=" << c.format << '\n'
     << "output.emit_field=" << (c.emit_field ? 1 : 0) << '\n';
  if (c.has_field_box) {
    os << "output.field_box=";
    for (int i = 0; i < 4; ++i)
      os << (i ? "," : "") << format_double(c.field_box[i]);
    os << '\n';
  }
  os << "output.field_grid=" << c.field_grid[0] << ',' << c.field_grid[1]
     << '\n';
  return os.str();
}

}  // namespace

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = canonical(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace wgscat
