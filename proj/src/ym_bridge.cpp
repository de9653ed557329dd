#include "swlat/ym_bridge.hpp"

#include <algorithm>
#include <cmath>

#include "swlat/functional.hpp"

namespace swlat {

namespace {

double weighted_sum(const Grid& g, std::vector<double>& per_site) {
  return g.cell_volume() * pairwise_sum(per_site);
}

}  // namespace

Su2Field assemble_su2(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "assemble_su2");
  require_shape(g, sigma, "assemble_su2");
  Su2Field out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) out(x, mu) = IrcElement{a(x, mu), sigma(x, mu)};
  }
  return out;
}

namespace {

IrcElement ym_curvature(const Grid& g, const Su2Field& at, std::size_t x, int mu, int nu) {
  const double inv_h = 1.0 / g.spacing();
  const IrcElement dmu = inv_h * (at(g.forward(x, mu), nu) - at(x, nu));
  const IrcElement dnu = inv_h * (at(g.forward(x, nu), mu) - at(x, mu));
  return dmu - dnu + irc_bracket(at(x, mu), at(x, nu));
}

}  // namespace

double ym_energy_noncompact(const Grid& g, const Su2Field& at) {
  if (!at.matches(g)) fail(ErrorCode::kShapeMismatch, "ym_energy_noncompact: field shape does not match grid");
  std::vector<double> density(g.sites());
  parallel_for(g.sites(), [&](std::size_t b, std::size_t e) {
    for (std::size_t x = b; x < e; ++x) {
      double s = 0.0;
      for (int p = 0; p < g.pairs(); ++p) {
        const auto [mu, nu] = g.pair_at(p);
        const IrcElement f = ym_curvature(g, at, x, mu, nu);
        s += irc_inner(f, f);
      }
      density[x] = s;
    }
  });
  return weighted_sum(g, density);
}

ComplexTwoFormField d_A_oneform_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "d_A_oneform_noncompact");
  require_shape(g, sigma, "d_A_oneform_noncompact");
  const double inv_h = 1.0 / g.spacing();
  const cplx i(0.0, 1.0);
  ComplexTwoFormField out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int p = 0; p < g.pairs(); ++p) {
      const auto [mu, nu] = g.pair_at(p);
      const cplx dmu = (sigma(g.forward(x, mu), nu) - sigma(x, nu)) * inv_h;
      const cplx dnu = (sigma(g.forward(x, nu), mu) - sigma(x, mu)) * inv_h;
      out(x, p) = dmu - dnu + i * (a(x, mu) * sigma(x, nu) - a(x, nu) * sigma(x, mu));
    }
  }
  return out;
}

ComplexScalarField cov_div_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "cov_div_noncompact");
  require_shape(g, sigma, "cov_div_noncompact");
  const double inv_h = 1.0 / g.spacing();
  const cplx i(0.0, 1.0);
  ComplexScalarField out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    cplx s = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) {
      s -= (sigma(x, mu) - sigma(g.backward(x, mu), mu)) * inv_h;
      s -= i * a(x, mu) * sigma(x, mu);
    }
    out(x, 0) = s;
  }
  return out;
}

double energy_first_noncompact(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  const auto f = curvature(g, a);
  const auto tau = tau_field(g, sigma);
  TwoFormField r(g);
  for (std::size_t k = 0; k < r.size(); ++k) r.values()[k] = f.values()[k] - 0.5 * tau.values()[k];
  const auto da = d_A_oneform_noncompact(g, a, sigma);
  const auto ds = cov_div_noncompact(g, a, sigma);
  return inner(g, r, r) + inner(g, da, da) + inner(g, ds, ds);
}

BridgeReport bridge_check(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  BridgeReport rep;
  const Su2Field at = assemble_su2(g, a, sigma);
  rep.ym_energy = ym_energy_noncompact(g, at);
  const auto ds = cov_div_noncompact(g, a, sigma);
  rep.dstar_energy = inner(g, ds, ds);
  rep.h_first_noncompact = energy_first_noncompact(g, a, sigma);
  rep.gap = std::abs(rep.ym_energy + rep.dstar_energy - rep.h_first_noncompact);

  const auto f = curvature(g, a);
  const auto tau = tau_field(g, sigma);
  const auto da = d_A_oneform_noncompact(g, a, sigma);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int p = 0; p < g.pairs(); ++p) {
      const auto [mu, nu] = g.pair_at(p);
      const IrcElement ft = ym_curvature(g, at, x, mu, nu);
      rep.max_decomposition_error = std::max({rep.max_decomposition_error,
                                              std::abs(ft.a - (f(x, p) - 0.5 * tau(x, p))),
                                              std::abs(ft.z - da(x, p))});
    }
  }

  rep.h_first_compact = energy_first(g, a, sigma).total;
  rep.convention_gap = std::abs(rep.h_first_noncompact - rep.h_first_compact);
  return rep;
}

}  // namespace swlat
