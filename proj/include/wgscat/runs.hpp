#pragma once

#include <iosfwd>
#include <string>

#include "wgscat/config.hpp"

namespace wgscat {

// Process exit codes shared by the CLI and the run drivers.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_runtime_error = 3;

struct RunOptions {
  std::string out_override;     // --out
  std::string format_override;  // --format
  int threads_override = 0;     // --threads, 0 = keep config value
};

// Each driver returns a process exit code and reports failures on `err`.
int run_scatter(const RunConfig& cfg, const RunOptions& opt, std::ostream& err);
int run_ep_report(const RunConfig& cfg, const RunOptions& opt,
                  std::ostream& err);
int run_field(const RunConfig& cfg, const RunOptions& opt, std::ostream& err);
int run_regimes(const RunConfig& cfg, const RunOptions& opt,
                std::ostream& err);

// Load + validate a config and dispatch one subcommand; returns an exit code.
int run_subcommand(const std::string& name, const std::string& config_path,
                   const RunOptions& opt, std::ostream& err);

}  // namespace wgscat
