#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vortexline/config.hpp"
#include "vortexline/io.hpp"
#include "vortexline/scenario.hpp"

namespace vortexline {

// Entry point shared by the installed binary and the in-process CLI tests.
// Exit codes: 0 success, 1 validation error, 2 runtime error.
inline int cli_main(const std::vector<std::string>& args,
                    std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"vortex-filament dynamics: spectral evolution, observables and "
               "propagator diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;

  for (ScenarioKind kind :
       {ScenarioKind::evolve, ScenarioKind::dispersion, ScenarioKind::validity,
        ScenarioKind::observables, ScenarioKind::propagate,
        ScenarioKind::biot_savart_compare, ScenarioKind::phase_divergence}) {
    CLI::App* sub = app.add_subcommand(to_string(kind));
    sub->add_option("--config", config_path, "scenario config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default '.')");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  }

  std::vector<const char*> argv;
  argv.push_back("vortexline");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const std::string sub_name = app.get_subcommands().front()->get_name();

    std::ifstream in(config_path, std::ios::binary);
    if (!in)
      throw std::invalid_argument("cannot open config file '" + config_path +
                                  "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    const ScenarioConfig cfg = load_config(buf.str());
    if (std::string(to_string(cfg.scenario)) != sub_name)
      throw std::invalid_argument("config declares scenario '" +
                                  std::string(to_string(cfg.scenario)) +
                                  "' but subcommand is '" + sub_name + "'");

    const RunRecord record = run_scenario(cfg);
    const auto files = write_outputs(record, out_dir);
    if (!quiet) {
      out << to_string(cfg.scenario) << ": " << record.rows.size()
          << " rows\n";
      for (const auto& f : files) out << "wrote " << f.string() << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace vortexline
