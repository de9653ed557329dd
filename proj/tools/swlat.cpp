// Command-line front end; talks to the library only through the C API.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swlat/swlat.h"

namespace {

int default_threads() {
  const char* env = std::getenv("SWLAT_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const int v = std::stoi(env, &used);
    if (used == std::string(env).size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  std::cerr << "swlat: ignoring invalid SWLAT_THREADS='" << env << "'\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Seiberg-Witten style energy minimization and diagnostics"};
  app.set_version_flag("--version", std::string(swlat_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  const char* names[][2] = {
      {"check", "Run the identity, adjointness and invariance suites"},
      {"minimize", "Minimize the configured energy with periodic gauge fixing"},
      {"converge", "Refinement study of discretization gaps"},
      {"gradcheck", "Compare analytic gradients with finite differences"},
      {"gaugefix", "Coulomb-fix and holonomy-reduce the initial fields"},
      {"bridge", "Compare the SU(2) curvature energy with the first-form energy"},
  };
  for (const auto& [name, desc] : names) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "Configuration file (key = value)");
    sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Random seed (overrides run.seed)");
    sub->add_option("--threads", threads, "Worker threads (default: SWLAT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (swlat_set_threads(threads ? *threads : default_threads()) != SWLAT_OK) {
    std::cerr << "swlat: " << swlat_last_error() << "\n";
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  swlat_command_options opts{};
  opts.config_path = config_path.empty() ? nullptr : config_path.c_str();
  opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  opts.has_seed = seed.has_value() ? 1 : 0;
  opts.seed = seed.value_or(0);

  int exit_code = 1;
  const swlat_status st = swlat_run_command(command.c_str(), &opts, &exit_code);
  if (st != SWLAT_OK) {
    std::cerr << "swlat " << command << ": " << swlat_status_name(st) << ": " << swlat_last_error() << "\n";
    return 1;
  }
  return exit_code;
}
