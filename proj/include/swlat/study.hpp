#pragma once

// Identity suites, smooth field families and refinement studies shared by
// the CLI commands and the acceptance driver.

#include <cstdint>
#include <string>
#include <vector>

#include "swlat/functional.hpp"
#include "swlat/gauge.hpp"

namespace swlat {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  int cases = 0;
};

/// Test fixtures that deliberately break one identity.
struct CheckFaults {
  bool flip_tau_sign = false;
};

/// Runs every identity suite in a fixed order.
std::vector<SuiteResult> run_check_suites(std::uint64_t seed, const CheckFaults& faults = {});

// Individual suites.
SuiteResult check_tau_sw(std::uint64_t seed, int cases, const CheckFaults& faults = {});
SuiteResult check_tau_h(std::uint64_t seed, int cases);
SuiteResult check_tau_kw(std::uint64_t seed, int cases);
SuiteResult check_irc_bracket(std::uint64_t seed, int cases);
SuiteResult check_irc_inner(std::uint64_t seed, int cases);
SuiteResult check_sigma_bracket(std::uint64_t seed, int cases);
SuiteResult check_adjointness(const Grid& g, std::uint64_t seed, int cases);
SuiteResult check_gauge_invariance(const Grid& g, std::uint64_t seed, int cases);
SuiteResult check_bridge(const Grid& g, std::uint64_t seed, int cases);
SuiteResult check_gradient(const Grid& g, Objective objective, std::uint64_t seed, int points);
SuiteResult check_coulomb(const Grid& g, std::uint64_t seed, int cases);

// ---- smooth families on a torus of side `length` ----------------------------------

/// Grid with N sites per axis and h = length / N.
Grid refinement_grid(int dim, int n_sites, double length);

/// Smooth trigonometric (a, sigma) with nonzero F, tau and covariant derivatives.
GaugedFields plane_wave_fields(const Grid& g, double amp_a, double amp_sigma);

/// sigma = amp cos(2 pi x_1 / L) v with v real and a = 0; an exact lattice critical
/// point of the second form for the returned Ric = -lambda I, lambda being the
/// lattice Laplacian eigenvalue of that mode.
struct CriticalFamily {
  GaugedFields fields;
  RicciSpec ric;
};
CriticalFamily bochner_critical_fields(const Grid& g, double amp_sigma);

struct ConvergeRow {
  int n_sites = 0;
  double h = 0.0;
  double weitzenbock_gap = 0.0;
  double coupling_identity_gap = 0.0;
  double convention_gap = 0.0;
  double bochner_l2 = 0.0;
};

struct OrderFit {
  std::string column;
  /// Negative log-log slope of the column against N; NaN when exact.
  double order = 0.0;
  bool exact = false;
  bool passed = false;
};

struct ConvergeTable {
  std::vector<ConvergeRow> rows;
  std::vector<OrderFit> fits;
  bool passed() const;
};

/// The family is "plane_wave" or "zero_sigma".
ConvergeTable converge_study(const std::vector<int>& sizes, int dim, double length, const std::string& family,
                             double amp_a, double amp_sigma, double min_order);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace swlat
