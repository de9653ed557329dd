#pragma once

// Exact gradient of the lattice objective and a finite-difference harness.
//
// Gradients are reported in the dual of the h^n-weighted lattice inner
// product: the first variation along (da, dsigma) is
//   inner(g_a, da) + inner(g_sigma, dsigma),
// i.e. each entry is the plain coordinate derivative divided by h^n. For a
// complex entry the real and imaginary parts are the derivatives with respect
// to the real and imaginary parts of sigma.

#include <cstdint>

#include "swlat/functional.hpp"

namespace swlat {

struct GradientPair {
  GaugeField g_a;
  SectionField g_sigma;
  /// Joint lattice l2 norm, the discrete stand-in for |dH| in the Palais-Smale monitor.
  double norm = 0.0;
};

GradientPair grad_energy(const Grid& g, const GaugeField& a, const SectionField& sigma,
                         const ObjectiveSpec& spec);

struct FdCheckReport {
  double step = 0.0;
  double max_rel_err_a = 0.0;
  double max_rel_err_sigma = 0.0;
  double max_rel_err_direction = 0.0;
  int sampled_coordinates = 0;
  int sampled_directions = 0;

  double max_rel_err() const;
};

/// Compares sampled gradient coordinates and random unit directional
/// derivatives against central differences with step eps. Relative errors use
/// the denominator max(|analytic|, |fd|, 1e-12).
FdCheckReport fd_check(const Grid& g, const GaugeField& a, const SectionField& sigma,
                       const ObjectiveSpec& spec, double eps, int samples, std::uint64_t seed);

}  // namespace swlat
