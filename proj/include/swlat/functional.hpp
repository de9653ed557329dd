#pragma once

// The lattice H-functional in its first-order form
//   |F - tau/2|^2 + |d_A sigma|^2 + |d_A* sigma|^2
// and its Weitzenboeck (second-order) form
//   |F|^2 + |nabla_A sigma|^2 + <sigma, Ric sigma> + |tau|^2 / 4,
// together with the diagnostics built from the same operators.

#include <string>
#include <utility>
#include <vector>

#include "swlat/lattice.hpp"

namespace swlat {

enum class Objective { kFirst, kSecond };

const char* to_string(Objective o);
Objective objective_from_string(const std::string& s);

/// Constant symmetric Ricci endomorphism, (Ric sigma)_mu = sum_nu R_{mu nu} sigma_nu.
/// An empty matrix means flat.
class RicciSpec {
 public:
  RicciSpec() = default;
  static RicciSpec flat() { return {}; }
  /// Row-major n x n; rejects asymmetry beyond 1e-12.
  static RicciSpec constant(int n, std::vector<double> matrix);

  bool is_flat() const noexcept { return r_.empty(); }
  int dim() const noexcept { return n_; }
  double at(int mu, int nu) const { return r_.empty() ? 0.0 : r_[static_cast<std::size_t>(mu * n_ + nu)]; }
  const std::vector<double>& matrix() const noexcept { return r_; }
  void require_dim(int n) const;

 private:
  int n_ = 0;
  std::vector<double> r_;
};

struct EnergyBreakdown {
  Objective form = Objective::kSecond;
  std::vector<std::pair<std::string, double>> terms;
  double total = 0.0;

  double term(const std::string& name) const;
};

/// Everything that defines the minimized objective.
struct ObjectiveSpec {
  Objective objective = Objective::kSecond;
  RicciSpec ric;
  double lambda0 = 1.0;
  double penalty_weight = 0.0;
};

/// Pointwise tau_h of the n components at each site.
TwoFormField tau_field(const Grid& g, const SectionField& sigma);

EnergyBreakdown energy_first(const Grid& g, const GaugeField& a, const SectionField& sigma);
EnergyBreakdown energy_second(const Grid& g, const GaugeField& a, const SectionField& sigma,
                              const RicciSpec& ric);

/// weight * h^n sum_x max(|sigma|^2 - lambda0 |tau|, 0)^2.
double penalty_energy(const Grid& g, const SectionField& sigma, double lambda0, double weight);

/// The selected energy form plus the optional V penalty.
double objective_value(const Grid& g, const GaugeField& a, const SectionField& sigma,
                       const ObjectiveSpec& spec);

/// Per-site integrand of objective_value: objective = h^n sum_x density(x)
/// up to summation order.
std::vector<double> objective_density(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                      const ObjectiveSpec& spec);

/// |energy_first - energy_second| with flat Ricci term.
double weitzenbock_gap(const Grid& g, const GaugeField& a, const SectionField& sigma);

/// h^n sum <F, tau>.
double curvature_tau_pairing(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// -h^n sum_x sum_{mu != nu} Re conj(sigma_mu) ([D_mu, D_nu] sigma_nu), with D the
/// covariant forward difference on complex scalars.
double commutator_coupling(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// |curvature_tau_pairing - commutator_coupling|.
double coupling_identity_gap(const Grid& g, const GaugeField& a, const SectionField& sigma);

struct VReport {
  double lambda0 = 1.0;
  double max_violation = 0.0;
  long violating_site_count = 0;

  bool in_v() const noexcept { return max_violation <= 0.0; }
};

/// Monitors |sigma|^2(x) <= lambda0 |tau(sigma)|(x).
VReport v_membership(const Grid& g, const SectionField& sigma, double lambda0);

struct BochnerResidual {
  ScalarField field;
  double l2 = 0.0;
};

/// Coefficient of |tau|^2 that makes the Bochner residual vanish at critical
/// points of the second-order form.
inline constexpr double kBochnerTauCoefficient = 0.5;

/// 1/2 Delta |sigma|^2 - |nabla_A sigma|^2 - <Ric sigma, sigma> - c |tau|^2 with
/// Delta = -laplacian_scalar (negative-definite analytic Laplacian). |nabla_A sigma|^2
/// at x is the mean of the forward-link and backward-link densities.
BochnerResidual bochner_residual(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                 const RicciSpec& ric,
                                 double tau_coefficient = kBochnerTauCoefficient);

struct ElResidual {
  GaugeField r_a;
  SectionField r_sigma;
  double l2_a = 0.0;
  double l2_sigma = 0.0;
};

/// r_A = d*F - sum_mu e^mu Im<nabla_mu sigma, sigma>_h,
/// r_sigma = nabla_A* nabla_A sigma + Ric sigma + sum_mu Im(conj(sigma_mu) sigma_nu) i sigma_mu.
/// The current pairs the link derivative on (x, x+mu) with sigma(x).
ElResidual el_residual_continuum(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                 const RicciSpec& ric);

}  // namespace swlat
