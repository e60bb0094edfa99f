#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wgscat/runs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scattering observables for a rectangular waveguide segment"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")
        ->required();
    cmd->add_option("--out", out_path, "output path (overrides output.path)");
    cmd->add_option("--format", format,
                    "csv or json (overrides output.format)");
    cmd->add_option("--threads", threads, "worker threads for k sweeps");
  };

  CLI::App* scatter = app.add_subcommand(
      "scatter", "reflection/transmission amplitude table over the theta grid");
  CLI::App* ep = app.add_subcommand(
      "ep-report", "exceptional wavenumbers inside a k sweep");
  CLI::App* field =
      app.add_subcommand("field", "total field on a rectangular grid");
  CLI::App* regimes =
      app.add_subcommand("regimes", "regime classification over k");
  for (CLI::App* cmd : {scatter, ep, field, regimes}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : wgscat::exit_config_error;
  }

  wgscat::RunOptions opt;
  opt.out_override = out_path;
  opt.format_override = format;
  opt.threads_override = threads;
  const std::string name = app.get_subcommands().front()->get_name();
  return wgscat::run_subcommand(name, config_path, opt, std::cerr);
}
