#pragma once

// Batch commands behind the CLI. Each returns the process exit code:
// 0 success, 2 ran but did not meet its criterion (max_iters, failed
// tolerance), and throws swlat::Error for anything that maps to exit 1.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swlat/io.hpp"
#include "swlat/optimize.hpp"
#include "swlat/study.hpp"

namespace swlat {

struct CommandOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  /// Machine-readable summary destination; standard output when null.
  std::ostream* out = nullptr;
};

/// Every configuration value after defaults are applied.
struct Settings {
  std::vector<int> dims;
  double h = 1.0;
  RunConfig run;
  std::uint64_t seed = 1;
  std::string init = "random";
  double amplitude = 0.1;
  double sigma_amplitude = 0.1;
  std::string init_gauge;
  std::string init_section;
  bool write_snapshots = true;
  std::string out_dir = "swlat_out";

  std::vector<int> converge_sizes = {8, 16, 32};
  int converge_dim = 3;
  double converge_length = 6.283185307179586;
  std::string converge_family = "plane_wave";
  double converge_amp_a = 0.5;
  double converge_amp_sigma = 0.5;
  double converge_min_order = 0.9;

  double gradcheck_eps = 1e-5;
  int gradcheck_samples = 64;
  double gradcheck_tol = 1e-6;
};

/// need_grid makes grid.dims mandatory.
Settings resolve_settings(const ConfigFile& cfg, const CommandOptions& opts, bool need_grid);

/// Initial (a, sigma) from run.init: zero, random or file.
GaugedFields initial_fields(const Grid& g, const Settings& s);

int cmd_check(const CommandOptions& opts, const CheckFaults& faults = {});
int cmd_minimize(const CommandOptions& opts);
int cmd_converge(const CommandOptions& opts);
int cmd_gradcheck(const CommandOptions& opts);
int cmd_gaugefix(const CommandOptions& opts);
int cmd_bridge(const CommandOptions& opts);

/// Dispatches by command name.
int run_command(const std::string& name, const CommandOptions& opts);

}  // namespace swlat
