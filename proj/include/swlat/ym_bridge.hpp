#pragma once

// SU(2) Yang-Mills cross-check. The pair (a, sigma) is assembled into an
// iR (+) C valued 1-form A~ = (i a, sigma), whose noncompact curvature
//   F~_{mu nu} = D+_mu A~_nu - D+_nu A~_mu + [A~_mu(x), A~_nu(x)]
// splits as (F - tau/2, d_A sigma) with same-site (linear) transport.

#include <vector>

#include "swlat/algebra.hpp"
#include "swlat/lattice.hpp"

namespace swlat {

/// One IrcElement per site and direction, direction minor.
class Su2Field {
 public:
  Su2Field() = default;
  explicit Su2Field(const Grid& g) : n_(g.dim()), data_(g.sites() * static_cast<std::size_t>(g.dim())) {}

  IrcElement& operator()(std::size_t x, int mu) { return data_[x * static_cast<std::size_t>(n_) + static_cast<std::size_t>(mu)]; }
  const IrcElement& operator()(std::size_t x, int mu) const { return data_[x * static_cast<std::size_t>(n_) + static_cast<std::size_t>(mu)]; }
  std::size_t size() const noexcept { return data_.size(); }
  bool matches(const Grid& g) const { return n_ == g.dim() && data_.size() == g.sites() * static_cast<std::size_t>(g.dim()); }

 private:
  int n_ = 0;
  std::vector<IrcElement> data_;
};

Su2Field assemble_su2(const Grid& g, const GaugeField& a, const SectionField& sigma);

/// h^n sum_x sum_{mu<nu} |F~_{mu nu}|^2 with |.|^2 from irc_inner.
double ym_energy_noncompact(const Grid& g, const Su2Field& at);

/// Noncompact covariant exterior derivative,
/// D+_mu s_nu - D+_nu s_mu + i (a_mu s_nu - a_nu s_mu) at the same site.
ComplexTwoFormField d_A_oneform_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// Exact adjoint of phi -> D+_mu phi + i a_mu phi.
ComplexScalarField cov_div_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma);
/// |F - tau/2|^2 + |d_A sigma|^2 + |d_A* sigma|^2 with noncompact transport.
double energy_first_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma);

struct BridgeReport {
  double ym_energy = 0.0;
  double dstar_energy = 0.0;
  double h_first_noncompact = 0.0;
  /// |ym_energy + dstar_energy - h_first_noncompact|.
  double gap = 0.0;
  /// Largest pointwise deviation of F~ from (F - tau/2, d_A sigma).
  double max_decomposition_error = 0.0;
  /// energy_first with compact transporters, for the convention comparison.
  double h_first_compact = 0.0;
  double convention_gap = 0.0;

  bool holds(double rel_tol = 1e-12) const { return gap <= rel_tol * (1.0 + h_first_noncompact); }
};

BridgeReport bridge_check(const Grid& g, const GaugeField& a, const SectionField& sigma);

}  // namespace swlat
