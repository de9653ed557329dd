#pragma once

// Descent on the lattice objective with Armijo backtracking, periodic
// re-gauging to the Coulomb / reduced-holonomy representative, and the
// Palais-Smale monitor over gauge-fixed snapshots.

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "swlat/functional.hpp"
#include "swlat/gauge.hpp"

namespace swlat {

enum class DescentMethod { kGradient, kLbfgs };

const char* to_string(DescentMethod m);
DescentMethod descent_method_from_string(const std::string& s);

struct RunConfig {
  ObjectiveSpec objective;
  int max_iters = 50000;
  double tol_grad = 1e-8;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  /// 0 disables periodic re-gauging; a final regauge always happens.
  int regauge_every = 100;
  DescentMethod method = DescentMethod::kLbfgs;
  int lbfgs_memory = 10;
  /// Iterations between gauge-fixed snapshots; 0 means regauge_every.
  int snapshot_every = 0;
  /// Number of trailing snapshots kept for the Cauchy tail.
  int cauchy_k = 5;

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double energy_total = 0.0;
  std::vector<double> energy_terms;
  double penalty = 0.0;
  double grad_norm = 0.0;
  double v_max_violation = 0.0;
  /// Accepted step length along the search direction; 0 on the initial row.
  double step_len = 0.0;
  double d_star_a_norm = 0.0;
  bool regauged = false;
};

/// Names of TraceRow::energy_terms for the given form.
std::vector<std::string> energy_term_names(Objective form);

struct Snapshot {
  int iter = 0;
  GaugeTransform transform;
  GaugedFields fields;
};

enum class StopReason { kConverged, kMaxIters, kStalled };

const char* to_string(StopReason r);

struct MinimizeResult {
  GaugedFields fields;
  std::vector<TraceRow> trace;
  /// The trailing gauge-fixed snapshots, oldest first.
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::kMaxIters;
  int iterations = 0;
  /// Largest energy change caused by a regauge.
  double max_regauge_drift = 0.0;

  bool converged() const noexcept { return stop == StopReason::kConverged; }
};

struct MinimizeHooks {
  /// Called with every gauge-fixed snapshot as it is taken.
  std::function<void(const Snapshot&)> on_snapshot;
};

/// Throws Error(kNumeric) if the energy or gradient becomes non-finite.
MinimizeResult minimize(const Grid& g, const RunConfig& cfg, const GaugeField& a0,
                        const SectionField& sigma0, const MinimizeHooks& hooks = {});

struct PalaisSmaleReport {
  /// Largest pairwise W^{1,2} distance of (a, sigma) among the last k snapshots.
  double cauchy_tail = 0.0;
  double cauchy_tail_a = 0.0;
  double cauchy_tail_sigma = 0.0;
  double grad_tail = 0.0;
  int snapshots_used = 0;
};

/// Needs at least two snapshots.
PalaisSmaleReport palais_smale_report(const Grid& g, const std::vector<TraceRow>& trace,
                                      const std::vector<Snapshot>& snapshots, int k = 5);

}  // namespace swlat
