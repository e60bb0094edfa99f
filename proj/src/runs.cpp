#include "wgscat/runs.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wgscat/amplitudes.hpp"
#include "wgscat/field_map.hpp"

namespace wgscat {

namespace {

using nlohmann::json;

std::string hash_hex(const RunConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

std::string resolve_format(const RunConfig& cfg, const RunOptions& opt) {
  const std::string f =
      opt.format_override.empty() ? cfg.format : opt.format_override;
  if (f != "csv" && f != "json")
    throw ConfigError("--format must be csv or json");
  return f;
}

std::string resolve_path(const RunConfig& cfg, const RunOptions& opt) {
  return opt.out_override.empty() ? cfg.out_path : opt.out_override;
}

int thread_count(const RunOptions& opt) {
  return opt.threads_override > 0 ? opt.threads_override : 1;
}

int write_output(const std::string& path, const std::string& content,
                 std::ostream& err) {
  if (path.empty()) {
    std::cout << content << std::flush;
    return exit_ok;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "wgscat: cannot open output file: " << path << "\n";
    return exit_runtime_error;
  }
  f << content;
  f.close();
  if (!f) {
    err << "wgscat: failed writing " << path << "\n";
    return exit_runtime_error;
  }
  return exit_ok;
}

// "out.csv" -> "out_k0007.csv"; extensionless paths get the suffix appended.
std::string sweep_file(const std::string& base, int idx) {
  char suf[16];
  std::snprintf(suf, sizeof(suf), "_k%04d", idx);
  const std::size_t dot = base.find_last_of('.');
  const std::size_t slash = base.find_last_of('/');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return base + suf;
  return base.substr(0, dot) + suf + base.substr(dot);
}

std::string sweep_summary_file(const std::string& base) {
  const std::size_t dot = base.find_last_of('.');
  const std::size_t slash = base.find_last_of('/');
  const std::string stem =
      (dot == std::string::npos ||
       (slash != std::string::npos && dot < slash))
          ? base
          : base.substr(0, dot);
  return stem + "_summary.json";
}

template <typename F>
void run_parallel(std::size_t n, int threads, F&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t m = std::min<std::size_t>(threads, n);
  pool.reserve(m);
  for (std::size_t t = 0; t < m; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

void check_abs2(double abs2, cdouble z) {
  const double ref = std::norm(z);
  if (std::isfinite(abs2) != std::isfinite(ref) ||
      (std::isfinite(abs2) && abs2 != ref))
    throw std::logic_error("output row |.|^2 inconsistent with its parts");
}

// ---------------------------------------------------------------- scatter --

struct ScatterTable {
  double k = 0.0;
  std::vector<double> theta_deg;
  std::vector<cdouble> R, T;
  std::vector<int> flagged;  // 0-based data row indices
  double dR_deg = 0.0, dT_deg = 0.0;
  cdouble dR_coeff, dT_coeff;
  RegimeReport regime;
  int truncation_used = 0;
  int failed_rows = 0;
  std::string error;
};

std::vector<double> theta_grid_deg(const RunConfig& cfg) {
  const double lo = -90.0 + cfg.exclusion_band_deg;
  const double hi = 90.0 - cfg.exclusion_band_deg;
  std::vector<double> g(cfg.theta_points);
  for (int i = 0; i < cfg.theta_points; ++i)
    g[i] = cfg.theta_points == 1
               ? 0.5 * (lo + hi)
               : lo + (hi - lo) * i / (cfg.theta_points - 1);
  return g;
}

ScatterTable compute_scatter(const RunConfig& cfg, double k) {
  ScatterTable t;
  t.k = k;
  t.theta_deg = theta_grid_deg(cfg);
  const std::size_t n = t.theta_deg.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.R.assign(n, cdouble(nan, nan));
  t.T.assign(n, cdouble(nan, nan));
  try {
    t.regime = classify_regime(cfg.well, k);
    const Incidence inc = Incidence::make(k, cfg.theta0_rad(), cfg.side);
    const auto [dR, dT] = delta_descriptors(inc, cfg.well);
    t.dR_deg = dR.theta_sing * 180.0 / pi;
    t.dR_coeff = dR.coeff;
    t.dT_deg = dT.theta_sing * 180.0 / pi;
    t.dT_coeff = dT.coeff;
    std::optional<KernelEvaluator> kernel;
    try {
      kernel.emplace(cfg.well, k, cfg.max_modes);
    } catch (const std::exception& e) {
      t.error = e.what();
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!kernel) {
        t.flagged.push_back(static_cast<int>(i));
        ++t.failed_rows;
        continue;
      }
      const double th = t.theta_deg[i] * pi / 180.0;
      try {
        const FarFieldPoint pt = far_field(th, inc, cfg.well, *kernel);
        TruncationInfo info;
        kernel->eval(k * std::sin(th), inc.p0(), &info);
        t.R[i] = pt.reflection_smooth;
        t.T[i] = pt.transmission_smooth;
        if (info.tail > cfg.tol) t.flagged.push_back(static_cast<int>(i));
      } catch (const std::exception& e) {
        if (t.error.empty()) t.error = e.what();
        t.flagged.push_back(static_cast<int>(i));
        ++t.failed_rows;
      }
    }
    if (kernel) t.truncation_used = kernel->max_used();
  } catch (const std::exception& e) {
    t.error = e.what();
    t.failed_rows = static_cast<int>(n);
    t.flagged.clear();
    for (std::size_t i = 0; i < n; ++i) t.flagged.push_back(static_cast<int>(i));
  }
  return t;
}

std::string scatter_csv(const ScatterTable& t, const std::string& hash) {
  std::ostringstream os;
  os << "# wgscat scatter\n"
     << "# config_hash=" << hash << "\n"
     << "# k=" << format_double(t.k) << "\n"
     << "# regime=" << regime_name(t.regime.regime)
     << " n_star=" << t.regime.n_star
     << " exceptional=" << (t.regime.exceptional ? 1 : 0)
     << " truncation_used=" << t.truncation_used << "\n"
     << "# delta_R angle_deg=" << format_double(t.dR_deg)
     << " coeff_re=" << format_double(t.dR_coeff.real())
     << " coeff_im=" << format_double(t.dR_coeff.imag()) << "\n"
     << "# delta_T angle_deg=" << format_double(t.dT_deg)
     << " coeff_re=" << format_double(t.dT_coeff.real())
     << " coeff_im=" << format_double(t.dT_coeff.imag()) << "\n";
  if (!t.flagged.empty()) {
    os << "# flagged_rows=";
    for (std::size_t i = 0; i < t.flagged.size(); ++i)
      os << (i ? "," : "") << t.flagged[i];
    os << "\n";
  }
  if (!t.error.empty()) os << "# error=" << t.error << "\n";
  os << "theta_deg,R_re,R_im,R_abs2,T_re,T_im,T_abs2\n";
  for (std::size_t i = 0; i < t.theta_deg.size(); ++i) {
    const double r2 = t.R[i].real() * t.R[i].real() +
                      t.R[i].imag() * t.R[i].imag();
    const double s2 = t.T[i].real() * t.T[i].real() +
                      t.T[i].imag() * t.T[i].imag();
    check_abs2(r2, t.R[i]);
    check_abs2(s2, t.T[i]);
    os << format_double(t.theta_deg[i]) << ','
       << format_double(t.R[i].real()) << ',' << format_double(t.R[i].imag())
       << ',' << format_double(r2) << ',' << format_double(t.T[i].real())
       << ',' << format_double(t.T[i].imag()) << ',' << format_double(s2)
       << "\n";
  }
  return os.str();
}

json scatter_metadata(const ScatterTable& t) {
  json meta;
  meta["regime"] = regime_name(t.regime.regime);
  meta["n_star"] = t.regime.n_star;
  meta["exceptional"] = t.regime.exceptional;
  meta["truncation_used"] = t.truncation_used;
  meta["flagged_rows"] = t.flagged;
  if (!t.error.empty()) meta["error"] = t.error;
  return meta;
}

std::string scatter_json(const ScatterTable& t, const std::string& hash) {
  json j;
  j["config_hash"] = hash;
  j["k"] = t.k;
  j["delta"]["R"] = {{"angle_deg", t.dR_deg},
                     {"coeff_re", t.dR_coeff.real()},
                     {"coeff_im", t.dR_coeff.imag()}};
  j["delta"]["T"] = {{"angle_deg", t.dT_deg},
                     {"coeff_re", t.dT_coeff.real()},
                     {"coeff_im", t.dT_coeff.imag()}};
  j["metadata"] = scatter_metadata(t);
  json rows = json::array();
  for (std::size_t i = 0; i < t.theta_deg.size(); ++i) {
    const double r2 = t.R[i].real() * t.R[i].real() +
                      t.R[i].imag() * t.R[i].imag();
    const double s2 = t.T[i].real() * t.T[i].real() +
                      t.T[i].imag() * t.T[i].imag();
    check_abs2(r2, t.R[i]);
    check_abs2(s2, t.T[i]);
    rows.push_back({{"theta_deg", t.theta_deg[i]},
                    {"R_re", t.R[i].real()},
                    {"R_im", t.R[i].imag()},
                    {"R_abs2", r2},
                    {"T_re", t.T[i].real()},
                    {"T_im", t.T[i].imag()},
                    {"T_abs2", s2}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace

int run_scatter(const RunConfig& cfg, const RunOptions& opt,
                std::ostream& err) {
  try {
    const std::string fmt = resolve_format(cfg, opt);
    const std::string path = resolve_path(cfg, opt);
    const std::vector<double> kv = cfg.k_values();
    if (cfg.has_sweep && path.empty())
      throw ConfigError("a k sweep writes per-k files and needs output.path");
    const std::string hash = hash_hex(cfg);
    std::vector<ScatterTable> tables(kv.size());
    run_parallel(kv.size(), thread_count(opt),
                 [&](std::size_t i) { tables[i] = compute_scatter(cfg, kv[i]); });

    bool any_ok = false;
    for (const auto& t : tables)
      if (t.failed_rows < static_cast<int>(t.theta_deg.size())) any_ok = true;

    if (!cfg.has_sweep) {
      const std::string content = fmt == "csv" ? scatter_csv(tables[0], hash)
                                               : scatter_json(tables[0], hash);
      const int rc = write_output(path, content, err);
      if (rc != exit_ok) return rc;
    } else {
      json summary;
      summary["config_hash"] = hash;
      summary["k_values"] = kv;
      json files = json::array();
      json eps = json::array();
      for (const auto& [kn, n] :
           exceptional_wavenumbers(cfg.well, cfg.k_min, cfg.k_max))
        eps.push_back({{"k", kn}, {"n", n}});
      summary["exceptional_points"] = eps;
      for (std::size_t i = 0; i < kv.size(); ++i) {
        const std::string file = sweep_file(path, static_cast<int>(i));
        const std::string content = fmt == "csv"
                                        ? scatter_csv(tables[i], hash)
                                        : scatter_json(tables[i], hash);
        const int rc = write_output(file, content, err);
        if (rc != exit_ok) return rc;
        files.push_back(file);
      }
      summary["files"] = files;
      const int rc =
          write_output(sweep_summary_file(path), summary.dump(2) + "\n", err);
      if (rc != exit_ok) return rc;
    }
    if (!any_ok) {
      err << "wgscat: every scatter row failed";
      if (!tables.empty() && !tables[0].error.empty())
        err << ": " << tables[0].error;
      err << "\n";
      return exit_runtime_error;
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_runtime_error;
  }
}

int run_ep_report(const RunConfig& cfg, const RunOptions& opt,
                  std::ostream& err) {
  try {
    const std::string fmt = resolve_format(cfg, opt);
    const std::string path = resolve_path(cfg, opt);
    if (!cfg.has_sweep)
      throw ConfigError("ep-report requires a k sweep (incidence.k_min/k_max/k_steps)");
    const std::string hash = hash_hex(cfg);
    const auto eps = exceptional_wavenumbers(cfg.well, cfg.k_min, cfg.k_max);
    const cdouble i1(0.0, 1.0);
    const double a = cfg.well.a();
    const cdouble vps = branched_root(cfg.well.V0);  // varpi at degeneracy
    const cdouble mult =
        std::exp(-i1 * a * vps) / (1.0 - i1 * a * vps / 2.0);
    std::string content;
    if (fmt == "csv") {
      std::ostringstream os;
      os << "# wgscat ep-report\n"
         << "# config_hash=" << hash << "\n"
         << "k,n,varpi_star_re,varpi_star_im,multiplier_re,multiplier_im,regime\n";
      for (const auto& [kn, n] : eps) {
        const RegimeReport rep = classify_regime(cfg.well, kn);
        os << format_double(kn) << ',' << n << ','
           << format_double(vps.real()) << ',' << format_double(vps.imag())
           << ',' << format_double(mult.real()) << ','
           << format_double(mult.imag()) << ',' << regime_name(rep.regime)
           << "\n";
      }
      content = os.str();
    } else {
      json j;
      j["config_hash"] = hash;
      json rows = json::array();
      for (const auto& [kn, n] : eps) {
        const RegimeReport rep = classify_regime(cfg.well, kn);
        rows.push_back({{"k", kn},
                        {"n", n},
                        {"varpi_star_re", vps.real()},
                        {"varpi_star_im", vps.imag()},
                        {"multiplier_re", mult.real()},
                        {"multiplier_im", mult.imag()},
                        {"regime", regime_name(rep.regime)}});
      }
      j["rows"] = rows;
      content = j.dump(2) + "\n";
    }
    return write_output(path, content, err);
  } catch (const ConfigError& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_runtime_error;
  }
}

int run_field(const RunConfig& cfg, const RunOptions& opt, std::ostream& err) {
  try {
    const std::string fmt = resolve_format(cfg, opt);
    const std::string path = resolve_path(cfg, opt);
    if (!cfg.emit_field)
      throw ConfigError("field requires output.emit_field=true");
    if (cfg.has_sweep)
      throw ConfigError("field requires a single incidence.k");
    const std::string hash = hash_hex(cfg);
    const Incidence inc = Incidence::make(cfg.k, cfg.theta0_rad(), cfg.side);
    FieldRequest req;
    if (cfg.has_field_box) {
      req.x_min = cfg.field_box[0];
      req.x_max = cfg.field_box[1];
      req.y_min = cfg.field_box[2];
      req.y_max = cfg.field_box[3];
    } else {
      req.x_min = cfg.well.a_minus - cfg.well.b;
      req.x_max = cfg.well.a_plus + cfg.well.b;
      req.y_min = -0.5 * cfg.well.b;
      req.y_max = 1.5 * cfg.well.b;
    }
    req.nx = cfg.field_grid[0];
    req.ny = cfg.field_grid[1];
    const FieldMapResult m = field_map(inc, cfg.well, req, cfg.max_modes);
    int nan_samples = 0;
    for (const cdouble& v : m.values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) ++nan_samples;
    std::string content;
    if (fmt == "csv") {
      std::ostringstream os;
      os << "# wgscat field\n"
         << "# config_hash=" << hash << "\n"
         << "# truncation_used=" << m.trunc.used
         << " nan_samples=" << nan_samples << "\n"
         << "x,y,psi_re,psi_im,psi_abs2\n";
      for (std::size_t i = 0; i < m.xs.size(); ++i) {
        for (std::size_t j = 0; j < m.ys.size(); ++j) {
          const cdouble v = m.values[i * m.ys.size() + j];
          const double p2 = v.real() * v.real() + v.imag() * v.imag();
          check_abs2(p2, v);
          os << format_double(m.xs[i]) << ',' << format_double(m.ys[j]) << ','
             << format_double(v.real()) << ',' << format_double(v.imag())
             << ',' << format_double(p2) << "\n";
        }
      }
      content = os.str();
    } else {
      json j;
      j["config_hash"] = hash;
      j["metadata"] = {{"truncation_used", m.trunc.used},
                       {"nan_samples", nan_samples}};
      json rows = json::array();
      for (std::size_t i = 0; i < m.xs.size(); ++i) {
        for (std::size_t j2 = 0; j2 < m.ys.size(); ++j2) {
          const cdouble v = m.values[i * m.ys.size() + j2];
          const double p2 = v.real() * v.real() + v.imag() * v.imag();
          check_abs2(p2, v);
          rows.push_back({{"x", m.xs[i]},
                          {"y", m.ys[j2]},
                          {"psi_re", v.real()},
                          {"psi_im", v.imag()},
                          {"psi_abs2", p2}});
        }
      }
      j["rows"] = rows;
      content = j.dump(2) + "\n";
    }
    return write_output(path, content, err);
  } catch (const ConfigError& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_runtime_error;
  }
}

int run_regimes(const RunConfig& cfg, const RunOptions& opt,
                std::ostream& err) {
  try {
    const std::string fmt = resolve_format(cfg, opt);
    const std::string path = resolve_path(cfg, opt);
    const std::string hash = hash_hex(cfg);
    const std::vector<double> kv = cfg.k_values();
    std::string content;
    if (fmt == "csv") {
      std::ostringstream os;
      os << "# wgscat regimes\n"
         << "# config_hash=" << hash << "\n"
         << "k,regime,n_star,exceptional,eta,a_eta_over_b,min_evanescent_awn\n";
      for (double k : kv) {
        const RegimeReport rep = classify_regime(cfg.well, k);
        os << format_double(k) << ',' << regime_name(rep.regime) << ','
           << rep.n_star << ',' << (rep.exceptional ? 1 : 0) << ','
           << format_double(rep.eta) << ','
           << format_double(rep.a_eta_over_b) << ','
           << format_double(rep.min_evanescent_awn) << "\n";
      }
      content = os.str();
    } else {
      json j;
      j["config_hash"] = hash;
      json rows = json::array();
      for (double k : kv) {
        const RegimeReport rep = classify_regime(cfg.well, k);
        rows.push_back({{"k", k},
                        {"regime", regime_name(rep.regime)},
                        {"n_star", rep.n_star},
                        {"exceptional", rep.exceptional},
                        {"eta", rep.eta},
                        {"a_eta_over_b", rep.a_eta_over_b},
                        {"min_evanescent_awn", rep.min_evanescent_awn}});
      }
      j["rows"] = rows;
      content = j.dump(2) + "\n";
    }
    return write_output(path, content, err);
  } catch (const ConfigError& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_runtime_error;
  }
}

int run_subcommand(const std::string& name, const std::string& config_path,
                   const RunOptions& opt, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const ConfigError& e) {
    err << "wgscat: " << e.what() << "\n";
    return exit_config_error;
  }
  if (name == "scatter") return run_scatter(cfg, opt, err);
  if (name == "ep-report") return run_ep_report(cfg, opt, err);
  if (name == "field") return run_field(cfg, opt, err);
  if (name == "regimes") return run_regimes(cfg, opt, err);
  err << "wgscat: unknown subcommand '" << name << "'\n";
  return exit_config_error;
}

}  // namespace wgscat
