#include "swlat/gradient.hpp"

#include <algorithm>
#include <cmath>

#include "swlat/random.hpp"

namespace swlat {

namespace {

// Adds the sigma-gradient of sum_p tbar_p tau_p, with
// d tau_{mu nu} / d sigma_nu -> 2 i sigma_mu and d tau_{mu nu} / d sigma_mu -> -2 i sigma_nu.
void add_tau_pullback(const Grid& g, const SectionField& sigma, const TwoFormField& tbar,
                      SectionField& out) {
  const cplx two_i(0.0, 2.0);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int p = 0; p < g.pairs(); ++p) {
      const auto [mu, nu] = g.pair_at(p);
      const double t = tbar(x, p);
      if (t == 0.0) continue;
      out(x, nu) += t * two_i * sigma(x, mu);
      out(x, mu) -= t * two_i * sigma(x, nu);
    }
  }
}

}  // namespace

GradientPair grad_energy(const Grid& g, const GaugeField& a, const SectionField& sigma,
                         const ObjectiveSpec& spec) {
  require_shape(g, a, "grad_energy");
  require_shape(g, sigma, "grad_energy");
  spec.ric.require_dim(g.dim());
  if (spec.penalty_weight < 0.0) fail(ErrorCode::kInvalidArgument, "penalty weight must be non-negative");

  const int n = g.dim();
  const auto u = transporters(g, a);
  const auto f = curvature(g, a);
  const auto tau = tau_field(g, sigma);
  const auto grad = cov_grad(g, a, sigma);

  // Adjoint sensitivities: dE / h^n = Re sum conj(bar) * d(quantity).
  TwoFormField fbar(g);
  TwoFormField tbar(g);
  CovGradField gbar(g);
  ComplexScalarField qbar(g);
  bool have_q = false;

  if (spec.objective == Objective::kSecond) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      fbar.values()[i] = 2.0 * f.values()[i];
      tbar.values()[i] = 0.5 * tau.values()[i];
    }
    for (std::size_t i = 0; i < grad.size(); ++i) gbar.values()[i] = 2.0 * grad.values()[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = f.values()[i] - 0.5 * tau.values()[i];
      fbar.values()[i] = 2.0 * r;
      tbar.values()[i] = -r;
    }
    for (std::size_t x = 0; x < g.sites(); ++x) {
      for (int p = 0; p < g.pairs(); ++p) {
        const auto [mu, nu] = g.pair_at(p);
        const cplx k = grad(x, mu * n + nu) - grad(x, nu * n + mu);
        gbar(x, mu * n + nu) += 2.0 * k;
        gbar(x, nu * n + mu) -= 2.0 * k;
      }
    }
    const auto q = cov_div(g, a, sigma);
    for (std::size_t i = 0; i < q.size(); ++i) qbar.values()[i] = 2.0 * q.values()[i];
    have_q = true;
  }

  SectionField gs = cov_grad_adjoint(g, a, gbar);

  if (spec.penalty_weight > 0.0) {
    if (!(spec.lambda0 > 0.0)) fail(ErrorCode::kInvalidArgument, "lambda0 must be positive");
    for (std::size_t x = 0; x < g.sites(); ++x) {
      double s2 = 0.0;
      for (int mu = 0; mu < n; ++mu) s2 += std::norm(sigma(x, mu));
      double t2 = 0.0;
      for (int p = 0; p < g.pairs(); ++p) t2 += tau(x, p) * tau(x, p);
      const double tn = std::sqrt(t2);
      const double v = s2 - spec.lambda0 * tn;
      if (v <= 0.0) continue;
      const double c = 2.0 * spec.penalty_weight * v;
      for (int mu = 0; mu < n; ++mu) gs(x, mu) += 2.0 * c * sigma(x, mu);
      // |tau| is not differentiable at tau = 0; the zero subgradient is used there.
      if (tn > 0.0) {
        for (int p = 0; p < g.pairs(); ++p) tbar(x, p) -= c * spec.lambda0 * tau(x, p) / tn;
      }
    }
  }
  add_tau_pullback(g, sigma, tbar, gs);

  if (!spec.ric.is_flat()) {
    for (std::size_t x = 0; x < g.sites(); ++x) {
      for (int mu = 0; mu < n; ++mu) {
        cplx rs = 0.0;
        for (int nu = 0; nu < n; ++nu) rs += spec.ric.at(mu, nu) * sigma(x, nu);
        gs(x, mu) += 2.0 * rs;
      }
    }
  }

  GaugeField ga = curvature_adjoint(g, fbar);
  const cplx i(0.0, 1.0);
  // d/da_mu(x) of U_mu(x) = i h U_mu(x); the 1/h of the difference cancels h.
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < n; ++mu) {
      const std::size_t xp = g.forward(x, mu);
      const cplx link = u(x, mu);
      double s = 0.0;
      for (int nu = 0; nu < n; ++nu) {
        s += (std::conj(gbar(x, mu * n + nu)) * (i * link * sigma(xp, nu))).real();
      }
      if (have_q) s += (std::conj(qbar(xp, 0)) * (-i * std::conj(link) * sigma(x, mu))).real();
      ga(x, mu) += s;
    }
  }

  if (have_q) {
    const auto dq = cov_grad_scalar(g, a, qbar);
    for (std::size_t k = 0; k < gs.size(); ++k) gs.values()[k] += dq.values()[k];
  }

  GradientPair out{std::move(ga), std::move(gs), 0.0};
  out.norm = std::sqrt(inner(g, out.g_a, out.g_a) + inner(g, out.g_sigma, out.g_sigma));
  return out;
}

double FdCheckReport::max_rel_err() const {
  return std::max({max_rel_err_a, max_rel_err_sigma, max_rel_err_direction});
}

namespace {

double rel_err(double analytic, double fd) {
  const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-12});
  return std::abs(analytic - fd) / denom;
}

}  // namespace

FdCheckReport fd_check(const Grid& g, const GaugeField& a, const SectionField& sigma,
                       const ObjectiveSpec& spec, double eps, int samples, std::uint64_t seed) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) fail(ErrorCode::kInvalidArgument, "fd step must lie in [1e-7, 1e-3]");
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "fd check needs at least one sample");

  const auto grad = grad_energy(g, a, sigma, spec);
  const double w = g.cell_volume();
  Rng rng(seed);
  FdCheckReport rep;
  rep.step = eps;

  GaugeField ap = a;
  SectionField sp = sigma;
  auto energy = [&] { return objective_value(g, ap, sp, spec); };
  // Coordinate differences are taken site by site so that untouched sites
  // cancel exactly instead of contributing rounding of the total.
  auto coordinate_fd = [&](auto set) {
    set(+1.0);
    const auto dp = objective_density(g, ap, sp, spec);
    set(-1.0);
    const auto dm = objective_density(g, ap, sp, spec);
    set(0.0);
    std::vector<double> diff(dp.size());
    for (std::size_t x = 0; x < dp.size(); ++x) diff[x] = dp[x] - dm[x];
    return w * pairwise_sum(diff) / (2.0 * eps);
  };

  const std::size_t na = a.size();
  const std::size_t ns = sigma.size();
  for (int k = 0; k < samples; ++k) {
    // Coordinate in a, Re sigma or Im sigma.
    const std::uint64_t pick = rng.below(na + 2 * ns);
    double analytic = 0.0;
    double fd = 0.0;
    if (pick < na) {
      double& v = ap.values()[pick];
      const double v0 = v;
      fd = coordinate_fd([&](double sgn) { v = v0 + sgn * eps; });
      analytic = w * grad.g_a.values()[pick];
      rep.max_rel_err_a = std::max(rep.max_rel_err_a, rel_err(analytic, fd));
    } else {
      const std::size_t idx = (pick - na) / 2;
      const bool imag = ((pick - na) % 2) == 1;
      cplx& v = sp.values()[idx];
      const cplx v0 = v;
      const cplx d = imag ? cplx(0.0, eps) : cplx(eps, 0.0);
      fd = coordinate_fd([&](double sgn) { v = v0 + sgn * d; });
      const cplx gv = grad.g_sigma.values()[idx];
      analytic = w * (imag ? gv.imag() : gv.real());
      rep.max_rel_err_sigma = std::max(rep.max_rel_err_sigma, rel_err(analytic, fd));
    }
    ++rep.sampled_coordinates;
  }

  // Dense random directions, normalized to unit joint lattice norm.
  const int directions = std::max(1, samples / 4);
  for (int k = 0; k < directions; ++k) {
    auto da = random_gauge(g, rng, 1.0);
    auto ds = random_section(g, rng, 1.0);
    const double nrm = std::sqrt(inner(g, da, da) + inner(g, ds, ds));
    for (auto& v : da.values()) v /= nrm;
    for (auto& v : ds.values()) v /= nrm;
    const double analytic = inner(g, grad.g_a, da) + inner(g, grad.g_sigma, ds);
    auto shifted = [&](double t) {
      for (std::size_t i = 0; i < na; ++i) ap.values()[i] = a.values()[i] + t * da.values()[i];
      for (std::size_t i = 0; i < ns; ++i) sp.values()[i] = sigma.values()[i] + t * ds.values()[i];
      return energy();
    };
    const double fd = (shifted(eps) - shifted(-eps)) / (2.0 * eps);
    ap = a;
    sp = sigma;
    rep.max_rel_err_direction = std::max(rep.max_rel_err_direction, rel_err(analytic, fd));
    ++rep.sampled_directions;
  }
  return rep;
}

}  // namespace swlat
