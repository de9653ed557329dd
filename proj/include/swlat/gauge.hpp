#pragma once

// Abelian lattice gauge action, Coulomb gauge fixing, Hodge splitting and
// reduction of holonomy modulo large gauge transformations.

#include <vector>

#include "swlat/lattice.hpp"

namespace swlat {

/// g = exp(i (zeta + theta_w)) where theta_w(x) = sum_mu 2 pi w_mu x_mu / N_mu.
struct GaugeTransform {
  ScalarField zeta;
  std::vector<int> winding;

  static GaugeTransform identity(const Grid& g);
};

struct GaugedFields {
  GaugeField a;
  SectionField sigma;
};

/// a'_mu = a_mu + (d zeta)_mu + 2 pi w_mu / (N_mu h),  sigma' = exp(-i (zeta + theta_w)) sigma.
GaugedFields apply_gauge(const Grid& g, const GaugeTransform& t, const GaugeField& a,
                         const SectionField& sigma);
GaugeField apply_gauge(const Grid& g, const GaugeTransform& t, const GaugeField& a);

enum class PoissonMethod { kAuto, kFft, kConjugateGradient };

struct PoissonStats {
  PoissonMethod method = PoissonMethod::kFft;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves laplacian_scalar(zeta) = rhs for zero-mean zeta. The mean of rhs is
/// projected out. kAuto picks the FFT path when every extent is a power of
/// two and preconditioned CG (relative residual 1e-12) otherwise.
ScalarField poisson_solve(const Grid& g, const ScalarField& rhs,
                          PoissonMethod method = PoissonMethod::kAuto, PoissonStats* stats = nullptr);

struct CoulombResult {
  GaugeTransform transform;
  GaugeField a;
  PoissonStats stats;
};

/// Solves d*d zeta = -d* a; the returned a + d zeta satisfies d* a' = 0.
CoulombResult coulomb_fix(const Grid& g, const GaugeField& a,
                          PoissonMethod method = PoissonMethod::kAuto);

struct HodgeParts {
  ScalarField exact_potential;
  std::vector<double> harmonic;
  GaugeField coexact_remainder;
};

/// a = d(exact_potential) + harmonic + coexact_remainder.
HodgeParts hodge_split(const Grid& g, const GaugeField& a,
                       PoissonMethod method = PoissonMethod::kAuto);

/// Per-direction means of a.
std::vector<double> holonomy_means(const Grid& g, const GaugeField& a);

struct HolonomyResult {
  GaugeTransform transform;
  GaugeField a;
};

/// Chooses windings so each mean lies in [-pi/(N_mu h), pi/(N_mu h)).
HolonomyResult reduce_holonomy(const Grid& g, const GaugeField& a);

struct RegaugeResult {
  GaugeTransform transform;
  GaugedFields fields;
};

/// Coulomb fixing followed by holonomy reduction, applied as one transform.
RegaugeResult regauge(const Grid& g, const GaugeField& a, const SectionField& sigma,
                      PoissonMethod method = PoissonMethod::kAuto);

/// Smallest nonzero eigenvalue of the lattice Laplacian (scalars and 1-forms alike).
double smallest_nonzero_laplacian_eigenvalue(const Grid& g);

struct CoercivityReport {
  double lhs = 0.0;
  double rhs_bound = 0.0;
  double constant_estimate = 0.0;
  double curvature_l2 = 0.0;

  bool holds() const noexcept { return lhs <= rhs_bound; }
};

/// W^{1,2} norm of the gauge-fixed representative against c (|F|_{L2} + 1),
/// with c = max(harmonic-sector diameter, sqrt(1 + 1/lambda_1)).
CoercivityReport coercivity_check(const Grid& g, const GaugeField& a,
                                  PoissonMethod method = PoissonMethod::kAuto);

}  // namespace swlat
