#include "swlat/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swlat/algebra.hpp"

namespace swlat {

const char* to_string(Objective o) { return o == Objective::kFirst ? "first" : "second"; }

Objective objective_from_string(const std::string& s) {
  if (s == "first") return Objective::kFirst;
  if (s == "second") return Objective::kSecond;
  fail(ErrorCode::kInvalidArgument, "objective must be 'first' or 'second', got '" + s + "'");
}

RicciSpec RicciSpec::constant(int n, std::vector<double> matrix) {
  if (matrix.size() != static_cast<std::size_t>(n * n)) {
    fail(ErrorCode::kInvalidArgument,
         "Ricci matrix needs " + std::to_string(n * n) + " entries, got " + std::to_string(matrix.size()));
  }
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double d = matrix[static_cast<std::size_t>(mu * n + nu)] - matrix[static_cast<std::size_t>(nu * n + mu)];
      if (std::abs(d) > 1e-12) fail(ErrorCode::kInvalidArgument, "Ricci matrix must be symmetric");
    }
  }
  RicciSpec r;
  r.n_ = n;
  r.r_ = std::move(matrix);
  return r;
}

void RicciSpec::require_dim(int n) const {
  if (!is_flat() && n_ != n) {
    fail(ErrorCode::kShapeMismatch, "Ricci matrix dimension does not match grid dimension");
  }
}

double EnergyBreakdown::term(const std::string& name) const {
  for (const auto& [k, v] : terms) {
    if (k == name) return v;
  }
  fail(ErrorCode::kInvalidArgument, "no energy term named '" + name + "'");
}

TwoFormField tau_field(const Grid& g, const SectionField& sigma) {
  require_shape(g, sigma, "tau_field");
  TwoFormField t(g);
  const int n = g.dim();
  for (std::size_t x = 0; x < g.sites(); ++x) {
    const auto coeffs = tau_h(sigma.values().subspan(x * static_cast<std::size_t>(n), static_cast<std::size_t>(n)));
    for (int p = 0; p < g.pairs(); ++p) t(x, p) = coeffs.values()[static_cast<std::size_t>(p)];
  }
  return t;
}

namespace {

double weighted_sum(const Grid& g, const std::vector<double>& v) {
  return g.cell_volume() * pairwise_sum(v);
}

double norm_sq(const Grid& g, std::span<const cplx> v) {
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = std::norm(v[i]);
  return weighted_sum(g, t);
}

double norm_sq(const Grid& g, std::span<const double> v) {
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = v[i] * v[i];
  return weighted_sum(g, t);
}

double ricci_term(const Grid& g, const SectionField& sigma, const RicciSpec& ric) {
  if (ric.is_flat()) return 0.0;
  ric.require_dim(g.dim());
  const int n = g.dim();
  std::vector<double> t(g.sites());
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double s = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      cplx rs = 0.0;
      for (int nu = 0; nu < n; ++nu) rs += ric.at(mu, nu) * sigma(x, nu);
      s += (std::conj(sigma(x, mu)) * rs).real();
    }
    t[x] = s;
  }
  return weighted_sum(g, t);
}

EnergyBreakdown make_breakdown(Objective form, std::vector<std::pair<std::string, double>> terms) {
  EnergyBreakdown e;
  e.form = form;
  std::vector<double> values;
  for (const auto& kv : terms) values.push_back(kv.second);
  e.total = pairwise_sum(values);
  e.terms = std::move(terms);
  return e;
}

}  // namespace

EnergyBreakdown energy_first(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "energy_first");
  require_shape(g, sigma, "energy_first");
  const auto f = curvature(g, a);
  const auto tau = tau_field(g, sigma);
  std::vector<double> shifted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f.values()[i] - 0.5 * tau.values()[i];
    shifted[i] = r * r;
  }
  return make_breakdown(Objective::kFirst,
                        {{"curv_minus_half_tau", weighted_sum(g, shifted)},
                         {"dA_sigma", norm_sq(g, d_A_oneform(g, a, sigma).values())},
                         {"dA_star_sigma", norm_sq(g, cov_div(g, a, sigma).values())}});
}

EnergyBreakdown energy_second(const Grid& g, const GaugeField& a, const SectionField& sigma,
                              const RicciSpec& ric) {
  require_shape(g, a, "energy_second");
  require_shape(g, sigma, "energy_second");
  ric.require_dim(g.dim());
  const auto tau = tau_field(g, sigma);
  return make_breakdown(Objective::kSecond,
                        {{"curvature", norm_sq(g, curvature(g, a).values())},
                         {"kinetic", norm_sq(g, cov_grad(g, a, sigma).values())},
                         {"ric", ricci_term(g, sigma, ric)},
                         {"quartic", 0.25 * norm_sq(g, tau.values())}});
}

double penalty_energy(const Grid& g, const SectionField& sigma, double lambda0, double weight) {
  if (weight == 0.0) return 0.0;
  if (weight < 0.0) fail(ErrorCode::kInvalidArgument, "penalty weight must be non-negative");
  if (!(lambda0 > 0.0)) fail(ErrorCode::kInvalidArgument, "lambda0 must be positive");
  const auto tau = tau_field(g, sigma);
  std::vector<double> t(g.sites());
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double s2 = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) s2 += std::norm(sigma(x, mu));
    double t2 = 0.0;
    for (int p = 0; p < g.pairs(); ++p) t2 += tau(x, p) * tau(x, p);
    const double v = std::max(s2 - lambda0 * std::sqrt(t2), 0.0);
    t[x] = v * v;
  }
  return weight * weighted_sum(g, t);
}

double objective_value(const Grid& g, const GaugeField& a, const SectionField& sigma,
                       const ObjectiveSpec& spec) {
  const double base = spec.objective == Objective::kFirst ? energy_first(g, a, sigma).total
                                                          : energy_second(g, a, sigma, spec.ric).total;
  return base + penalty_energy(g, sigma, spec.lambda0, spec.penalty_weight);
}

namespace {

template <class Span>
void add_site_squares(std::vector<double>& dens, Span v, double weight = 1.0) {
  const std::size_t per = v.size() / dens.size();
  for (std::size_t x = 0; x < dens.size(); ++x) {
    double s = 0.0;
    for (std::size_t c = 0; c < per; ++c) s += std::norm(v[x * per + c]);
    dens[x] += weight * s;
  }
}

}  // namespace

std::vector<double> objective_density(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                      const ObjectiveSpec& spec) {
  require_shape(g, a, "objective_density");
  require_shape(g, sigma, "objective_density");
  spec.ric.require_dim(g.dim());
  const int n = g.dim();
  std::vector<double> dens(g.sites(), 0.0);
  const auto tau = tau_field(g, sigma);
  if (spec.objective == Objective::kFirst) {
    const auto f = curvature(g, a);
    std::vector<double> shifted(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) shifted[i] = f.values()[i] - 0.5 * tau.values()[i];
    add_site_squares(dens, std::span<const double>(shifted));
    add_site_squares(dens, d_A_oneform(g, a, sigma).values());
    add_site_squares(dens, cov_div(g, a, sigma).values());
  } else {
    add_site_squares(dens, curvature(g, a).values());
    add_site_squares(dens, cov_grad(g, a, sigma).values());
    add_site_squares(dens, tau.values(), 0.25);
    if (!spec.ric.is_flat()) {
      for (std::size_t x = 0; x < g.sites(); ++x) {
        double s = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          cplx rs = 0.0;
          for (int nu = 0; nu < n; ++nu) rs += spec.ric.at(mu, nu) * sigma(x, nu);
          s += (std::conj(sigma(x, mu)) * rs).real();
        }
        dens[x] += s;
      }
    }
  }
  if (spec.penalty_weight != 0.0) {
    for (std::size_t x = 0; x < g.sites(); ++x) {
      double s2 = 0.0;
      for (int mu = 0; mu < n; ++mu) s2 += std::norm(sigma(x, mu));
      double t2 = 0.0;
      for (int p = 0; p < g.pairs(); ++p) t2 += tau(x, p) * tau(x, p);
      const double v = std::max(s2 - spec.lambda0 * std::sqrt(t2), 0.0);
      dens[x] += spec.penalty_weight * v * v;
    }
  }
  return dens;
}

double weitzenbock_gap(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  return std::abs(energy_first(g, a, sigma).total - energy_second(g, a, sigma, RicciSpec::flat()).total);
}

double curvature_tau_pairing(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  return inner(g, curvature(g, a), tau_field(g, sigma));
}

double commutator_coupling(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  require_shape(g, a, "commutator_coupling");
  require_shape(g, sigma, "commutator_coupling");
  const int n = g.dim();
  const auto u = transporters(g, a);
  const double inv_h = 1.0 / g.spacing();
  auto d = [&](const std::vector<cplx>& f, int mu) {
    std::vector<cplx> out(f.size());
    for (std::size_t x = 0; x < g.sites(); ++x) out[x] = (u(x, mu) * f[g.forward(x, mu)] - f[x]) * inv_h;
    return out;
  };
  std::vector<double> t(g.sites(), 0.0);
  std::vector<cplx> comp(g.sites());
  for (int nu = 0; nu < n; ++nu) {
    for (std::size_t x = 0; x < g.sites(); ++x) comp[x] = sigma(x, nu);
    const auto d_nu = d(comp, nu);
    for (int mu = 0; mu < n; ++mu) {
      if (mu == nu) continue;
      const auto d_mu = d(comp, mu);
      const auto mu_nu = d(d_nu, mu);
      const auto nu_mu = d(d_mu, nu);
      for (std::size_t x = 0; x < g.sites(); ++x) {
        t[x] -= (std::conj(sigma(x, mu)) * (mu_nu[x] - nu_mu[x])).real();
      }
    }
  }
  return weighted_sum(g, t);
}

double coupling_identity_gap(const Grid& g, const GaugeField& a, const SectionField& sigma) {
  return std::abs(curvature_tau_pairing(g, a, sigma) - commutator_coupling(g, a, sigma));
}

VReport v_membership(const Grid& g, const SectionField& sigma, double lambda0) {
  if (!(lambda0 > 0.0)) fail(ErrorCode::kInvalidArgument, "lambda0 must be positive");
  const auto tau = tau_field(g, sigma);
  VReport r;
  r.lambda0 = lambda0;
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double s2 = 0.0;
    for (int mu = 0; mu < g.dim(); ++mu) s2 += std::norm(sigma(x, mu));
    double t2 = 0.0;
    for (int p = 0; p < g.pairs(); ++p) t2 += tau(x, p) * tau(x, p);
    const double v = s2 - lambda0 * std::sqrt(t2);
    r.max_violation = std::max(r.max_violation, v);
    if (v > 0.0) ++r.violating_site_count;
  }
  return r;
}

BochnerResidual bochner_residual(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                 const RicciSpec& ric, double tau_coefficient) {
  require_shape(g, a, "bochner_residual");
  require_shape(g, sigma, "bochner_residual");
  ric.require_dim(g.dim());
  const int n = g.dim();
  ScalarField mod2(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    double s = 0.0;
    for (int mu = 0; mu < n; ++mu) s += std::norm(sigma(x, mu));
    mod2(x, 0) = s;
  }
  const auto lap = laplacian_scalar(g, mod2);
  const auto grad = cov_grad(g, a, sigma);
  const auto tau = tau_field(g, sigma);

  BochnerResidual out{ScalarField(g), 0.0};
  for (std::size_t x = 0; x < g.sites(); ++x) {
    // Forward and backward link densities averaged, so the discrete Leibniz rule
    // for laplacian_scalar(|sigma|^2) holds exactly.
    double kin = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      const std::size_t xb = g.backward(x, mu);
      for (int nu = 0; nu < n; ++nu) {
        kin += 0.5 * (std::norm(grad(x, mu * n + nu)) + std::norm(grad(xb, mu * n + nu)));
      }
    }
    double ricci = 0.0;
    if (!ric.is_flat()) {
      for (int mu = 0; mu < n; ++mu) {
        cplx rs = 0.0;
        for (int nu = 0; nu < n; ++nu) rs += ric.at(mu, nu) * sigma(x, nu);
        ricci += (std::conj(rs) * sigma(x, mu)).real();
      }
    }
    double t2 = 0.0;
    for (int p = 0; p < g.pairs(); ++p) t2 += tau(x, p) * tau(x, p);
    out.field(x, 0) = -0.5 * lap(x, 0) - kin - ricci - tau_coefficient * t2;
  }
  out.l2 = l2_norm(g, out.field);
  return out;
}

ElResidual el_residual_continuum(const Grid& g, const GaugeField& a, const SectionField& sigma,
                                 const RicciSpec& ric) {
  require_shape(g, a, "el_residual_continuum");
  require_shape(g, sigma, "el_residual_continuum");
  ric.require_dim(g.dim());
  const int n = g.dim();
  const auto grad = cov_grad(g, a, sigma);

  ElResidual out{curvature_adjoint(g, curvature(g, a)), cov_grad_adjoint(g, a, grad), 0.0, 0.0};
  const cplx i(0.0, 1.0);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < n; ++mu) {
      double current = 0.0;
      for (int nu = 0; nu < n; ++nu) current += (std::conj(grad(x, mu * n + nu)) * sigma(x, nu)).imag();
      out.r_a(x, mu) -= current;
    }
    for (int nu = 0; nu < n; ++nu) {
      cplx extra = 0.0;
      for (int mu = 0; mu < n; ++mu) {
        extra += ric.at(nu, mu) * sigma(x, mu);
        extra += (std::conj(sigma(x, mu)) * sigma(x, nu)).imag() * i * sigma(x, mu);
      }
      out.r_sigma(x, nu) += extra;
    }
  }
  out.l2_a = l2_norm(g, out.r_a);
  out.l2_sigma = l2_norm(g, out.r_sigma);
  return out;
}

}  // namespace swlat
