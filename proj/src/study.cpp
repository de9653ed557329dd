#include "swlat/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swlat/algebra.hpp"
#include "swlat/gradient.hpp"
#include "swlat/random.hpp"
#include "swlat/ym_bridge.hpp"

namespace swlat {

namespace {

SuiteResult make_result(const std::string& name, double err, double tol, int cases) {
  return {name, err <= tol && std::isfinite(err), err, tol, cases};
}

template <class F>
void fill_random(F& f, Rng& rng, double amp) {
  for (auto& v : f.values()) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, cplx>) {
      const double re = rng.uniform(-amp, amp);
      v = cplx(re, rng.uniform(-amp, amp));
    } else {
      v = rng.uniform(-amp, amp);
    }
  }
}

Su2Element random_su2(Rng& rng) {
  const double x = rng.uniform(-1, 1);
  const double y = rng.uniform(-1, 1);
  const double z = rng.uniform(-1, 1);
  return x * Su2Element::e1() + y * Su2Element::e2() + z * Su2Element::e3();
}

IrcElement random_irc(Rng& rng) {
  const double a = rng.uniform(-1, 1);
  const double re = rng.uniform(-1, 1);
  return {a, cplx(re, rng.uniform(-1, 1))};
}

double rel(double lhs, double rhs, double scale) { return std::abs(lhs - rhs) / std::max(scale, 1e-300); }

}  // namespace

// ---- algebra suites ------------------------------------------------------------------

SuiteResult check_tau_sw(std::uint64_t seed, int cases, const CheckFaults& faults) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const Quaternion s{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    auto tau = tau_sw(s);
    if (faults.flip_tau_sign) {
      for (auto& v : tau.values()) v = -v;
    }
    const double s4 = s.norm2() * s.norm2();
    err = std::max(err, std::abs(norm2(tau) - s4 / 4.0) / (1.0 + s4));
    // Independent oracle: s i conj(s) = -2 tau_23 i + 2 tau_13 j - 2 tau_12 k.
    const Quaternion q = s * Quaternion{0, 1, 0, 0} * s.conj();
    const double scale = 1.0 + s.norm2();
    err = std::max({err, std::abs(tau.at(0, 1) + 0.5 * q.s4) / scale, std::abs(tau.at(0, 2) - 0.5 * q.s3) / scale,
                    std::abs(tau.at(1, 2) + 0.5 * q.s2) / scale});
  }
  return make_result("tau_sw identity", err, 1e-12, cases);
}

SuiteResult check_tau_h(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<cplx> s(static_cast<std::size_t>(n));
    for (auto& v : s) {
      const double re = rng.uniform(-1, 1);
      v = cplx(re, rng.uniform(-1, 1));
    }
    const auto tau = tau_h(s);
    double expected = 0.0;
    double s2 = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      s2 += std::norm(s[static_cast<std::size_t>(mu)]);
      for (int nu = mu + 1; nu < n; ++nu) {
        const double im = (std::conj(s[static_cast<std::size_t>(mu)]) * s[static_cast<std::size_t>(nu)]).imag();
        expected += 4.0 * im * im;
      }
    }
    err = std::max(err, std::abs(norm2(tau) - expected) / (1.0 + expected));
    // Cauchy-Schwarz bound |tau| <= |s|^2; any excess counts as error.
    err = std::max(err, std::max(0.0, std::sqrt(norm2(tau)) - s2 * (1.0 + 1e-15)));
  }
  return make_result("tau_h identity", err, 1e-12, cases);
}

SuiteResult check_tau_kw(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<Su2Element> s;
    for (int mu = 0; mu < n; ++mu) s.push_back(random_su2(rng));
    const auto tau = tau_kw(std::span<const Su2Element>(s));
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = mu + 1; nu < n; ++nu) {
        const Mat2& a = s[static_cast<std::size_t>(mu)].matrix();
        const Mat2& b = s[static_cast<std::size_t>(nu)].matrix();
        const Mat2 oracle = 2.0 * (a * b - b * a);
        err = std::max(err, max_abs_diff(tau.at(mu, nu).matrix(), oracle));
      }
    }
  }
  return make_result("tau_kw bracket", err, 1e-14, cases);
}

SuiteResult check_irc_bracket(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const IrcElement u = random_irc(rng);
    const IrcElement v = random_irc(rng);
    const Mat2& pu = irc_to_su2(u).matrix();
    const Mat2& pv = irc_to_su2(v).matrix();
    // The C part is half the su(2) commutator; the iR part carries the opposite sign.
    const IrcElement half = su2_to_irc(Su2Element(0.5 * (pu * pv - pv * pu)));
    const IrcElement b = irc_bracket(u, v);
    err = std::max({err, std::abs(b.a + half.a), std::abs(b.z - half.z)});
    const IrcElement w = irc_bracket(u, v) + irc_bracket(v, u);
    err = std::max({err, std::abs(w.a), std::abs(w.z)});
    const IrcElement back = su2_to_irc(irc_to_su2(u));
    err = std::max({err, std::abs(back.a - u.a), std::abs(back.z - u.z)});
  }
  return make_result("irc bracket vs matrix commutator", err, 1e-14, cases);
}

SuiteResult check_irc_inner(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const IrcElement u = random_irc(rng);
    const IrcElement v = random_irc(rng);
    const Mat2 prod = irc_to_su2(u).matrix() * irc_to_su2(v).matrix();
    err = std::max(err, std::abs(irc_inner(u, v) - (-0.5 * prod.trace().real())));
    err = std::max(err, std::abs(prod.trace().imag()));
  }
  return make_result("irc inner vs trace", err, 1e-14, cases);
}

SuiteResult check_sigma_bracket(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<cplx> s(static_cast<std::size_t>(n));
    for (auto& v : s) {
      const double re = rng.uniform(-1, 1);
      v = cplx(re, rng.uniform(-1, 1));
    }
    const auto tau = tau_h(s);
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = mu + 1; nu < n; ++nu) {
        // 1/2 [sigma, sigma] on the blade (mu, nu) is the bracket of the C components.
        const IrcElement b = irc_bracket({0.0, s[static_cast<std::size_t>(mu)]}, {0.0, s[static_cast<std::size_t>(nu)]});
        err = std::max({err, std::abs(tau.at(mu, nu) - (-2.0 * b.a)), std::abs(b.z)});
      }
    }
  }
  return make_result("[sigma,sigma] = -sigma^h wedge sigma", err, 1e-14, cases);
}

// ---- lattice suites ---------------------------------------------------------------------

SuiteResult check_adjointness(const Grid& g, std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const auto a = random_gauge(g, rng, 1.0);
    const auto s = random_section(g, rng, 1.0);
    CovGradField t(g);
    fill_random(t, rng, 1.0);
    ComplexScalarField phi(g);
    fill_random(phi, rng, 1.0);
    ComplexTwoFormField w(g);
    fill_random(w, rng, 1.0);
    TwoFormField f(g);
    fill_random(f, rng, 1.0);
    const auto b = random_gauge(g, rng, 1.0);
    const auto zeta = random_scalar(g, rng, 1.0);

    auto scale = [&](double x, double y) { return x * y; };
    const double ns = l2_norm(g, s);
    err = std::max(err, rel(inner(g, cov_grad(g, a, s), t), inner(g, s, cov_grad_adjoint(g, a, t)), scale(ns, l2_norm(g, t)) / g.spacing()));
    err = std::max(err, rel(inner(g, cov_grad_scalar(g, a, phi), s), inner(g, phi, cov_div(g, a, s)), scale(ns, l2_norm(g, phi)) / g.spacing()));
    err = std::max(err, rel(inner(g, d_A_oneform(g, a, s), w), inner(g, s, d_A_oneform_adjoint(g, a, w)), scale(ns, l2_norm(g, w)) / g.spacing()));
    err = std::max(err, rel(inner(g, curvature(g, b), f), inner(g, b, curvature_adjoint(g, f)), scale(l2_norm(g, b), l2_norm(g, f)) / g.spacing()));
    err = std::max(err, rel(inner(g, grad_scalar(g, zeta), b), inner(g, zeta, div_oneform(g, b)), scale(l2_norm(g, zeta), l2_norm(g, b)) / g.spacing()));
    err = std::max(err, rel(inner(g, zeta, laplacian_scalar(g, zeta)), inner(g, grad_scalar(g, zeta), grad_scalar(g, zeta)),
                            inner(g, zeta, zeta) / (g.spacing() * g.spacing())));
  }
  return make_result("discrete adjointness", err, 1e-12, cases);
}

SuiteResult check_gauge_invariance(const Grid& g, std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  std::vector<double> ric(static_cast<std::size_t>(g.dim() * g.dim()));
  for (int mu = 0; mu < g.dim(); ++mu) {
    for (int nu = mu; nu < g.dim(); ++nu) {
      const double v = rng.uniform(-1, 1);
      ric[static_cast<std::size_t>(mu * g.dim() + nu)] = v;
      ric[static_cast<std::size_t>(nu * g.dim() + mu)] = v;
    }
  }
  const auto rspec = RicciSpec::constant(g.dim(), ric);
  for (int k = 0; k < cases; ++k) {
    const auto a = random_gauge(g, rng, 1.0);
    const auto s = random_section(g, rng, 1.0);
    GaugeTransform t{random_scalar(g, rng, 3.0), std::vector<int>(static_cast<std::size_t>(g.dim()))};
    for (auto& w : t.winding) w = static_cast<int>(rng.below(5)) - 2;
    const auto gauged = apply_gauge(g, t, a, s);
    const double e1 = energy_first(g, a, s).total;
    const double e1g = energy_first(g, gauged.a, gauged.sigma).total;
    const double e2 = energy_second(g, a, s, rspec).total;
    const double e2g = energy_second(g, gauged.a, gauged.sigma, rspec).total;
    err = std::max({err, rel(e1, e1g, 1.0 + std::abs(e1)), rel(e2, e2g, 1.0 + std::abs(e2))});
  }
  return make_result("gauge invariance", err, 1e-12, cases);
}

SuiteResult check_bridge(const Grid& g, std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    const auto a = random_gauge(g, rng, 1.0);
    const auto s = random_section(g, rng, 1.0);
    const auto rep = bridge_check(g, a, s);
    err = std::max({err, rep.gap / (1.0 + rep.h_first_noncompact), rep.max_decomposition_error});
  }
  return make_result("ym bridge identity", err, 1e-12, cases);
}

SuiteResult check_gradient(const Grid& g, Objective objective, std::uint64_t seed, int points) {
  Rng rng(seed);
  double err = 0.0;
  ObjectiveSpec spec;
  spec.objective = objective;
  for (int k = 0; k < points; ++k) {
    const auto a = random_gauge(g, rng, 0.5);
    const auto s = random_section(g, rng, 0.5);
    const auto rep = fd_check(g, a, s, spec, 1e-5, 24, seed + static_cast<std::uint64_t>(k));
    err = std::max(err, rep.max_rel_err());
  }
  return make_result(std::string("gradient fd check (") + to_string(objective) + ")", err, 1e-6, points);
}

SuiteResult check_coulomb(const Grid& g, std::uint64_t seed, int cases) {
  Rng rng(seed);
  double err = 0.0;
  for (int k = 0; k < cases; ++k) {
    auto a = random_gauge(g, rng, 1.0);
    for (std::size_t x = 0; x < g.sites(); ++x) {
      for (int mu = 0; mu < g.dim(); ++mu) a(x, mu) += 3.0 * mu + 1.0;
    }
    const auto s = random_section(g, rng, 1.0);
    const auto rg = regauge(g, a, s);
    err = std::max(err, l2_norm(g, div_oneform(g, rg.fields.a)));
    const auto means = holonomy_means(g, rg.fields.a);
    for (int mu = 0; mu < g.dim(); ++mu) {
      const double half = std::numbers::pi / g.length(mu);
      const double m = means[static_cast<std::size_t>(mu)];
      if (m < -half || m >= half) err = std::max(err, std::abs(m));
    }
  }
  return make_result("coulomb gauge", err, 1e-10, cases);
}

std::vector<SuiteResult> run_check_suites(std::uint64_t seed, const CheckFaults& faults) {
  const Grid g3({4, 4, 4}, 0.5);
  const Grid mixed({4, 5, 6}, 1.0);
  std::vector<SuiteResult> out;
  out.push_back(check_tau_sw(seed, 10000, faults));
  out.push_back(check_tau_h(seed + 1, 10000));
  out.push_back(check_tau_kw(seed + 2, 1000));
  out.push_back(check_irc_bracket(seed + 3, 10000));
  out.push_back(check_irc_inner(seed + 4, 10000));
  out.push_back(check_sigma_bracket(seed + 5, 10000));
  auto merge = [&](SuiteResult a, const SuiteResult& b) {
    a.max_error = std::max(a.max_error, b.max_error);
    a.passed = a.passed && b.passed;
    a.cases += b.cases;
    return a;
  };
  out.push_back(merge(check_adjointness(g3, seed + 6, 10), check_adjointness(mixed, seed + 7, 10)));
  out.push_back(merge(check_gauge_invariance(g3, seed + 8, 10), check_gauge_invariance(mixed, seed + 9, 10)));
  out.push_back(check_bridge(g3, seed + 10, 10));
  out.push_back(check_gradient(g3, Objective::kFirst, seed + 11, 2));
  out.push_back(check_gradient(g3, Objective::kSecond, seed + 12, 2));
  out.push_back(merge(check_coulomb(g3, seed + 13, 10), check_coulomb(mixed, seed + 14, 10)));
  return out;
}

// ---- families and refinement --------------------------------------------------------------

Grid refinement_grid(int dim, int n_sites, double length) {
  if (!(length > 0.0)) fail(ErrorCode::kInvalidArgument, "torus length must be positive");
  return Grid(std::vector<int>(static_cast<std::size_t>(dim), n_sites), length / n_sites);
}

namespace {

// Physical coordinates scaled to [0, 2 pi) along each axis.
double angle(const Grid& g, std::size_t x, int mu) {
  return 2.0 * std::numbers::pi * g.coord(x, mu) / g.extent(mu);
}

}  // namespace

GaugedFields plane_wave_fields(const Grid& g, double amp_a, double amp_sigma) {
  const int n = g.dim();
  GaugedFields f{GaugeField(g), SectionField(g)};
  const cplx i(0.0, 1.0);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < n; ++mu) {
      const double t0 = angle(g, x, mu);
      const double t1 = angle(g, x, (mu + 1) % n);
      const double t2 = angle(g, x, (mu + 2) % n);
      f.a(x, mu) = amp_a * (std::sin(t1 + 0.3 * mu) + 0.5 * std::cos(t0 + t1));
      f.sigma(x, mu) = amp_sigma * ((1.0 + 0.25 * mu) * std::exp(i * t1) + 0.5 * i * std::cos(t0) +
                                    0.3 * std::exp(-i * (t2 + 0.5 * mu)));
    }
  }
  return f;
}

CriticalFamily bochner_critical_fields(const Grid& g, double amp_sigma) {
  // Unit wave number on a torus of side L; Ric cancels the lattice Laplacian
  // eigenvalue so the pair is an exact discrete critical point.
  const double k = 2.0 * std::numbers::pi / g.length(0);
  const double h = g.spacing();
  const double lambda = (2.0 - 2.0 * std::cos(k * h)) / (h * h);
  std::vector<double> ric(static_cast<std::size_t>(g.dim() * g.dim()), 0.0);
  for (int mu = 0; mu < g.dim(); ++mu) ric[static_cast<std::size_t>(mu * g.dim() + mu)] = -lambda;
  CriticalFamily fam{{GaugeField(g), SectionField(g)}, RicciSpec::constant(g.dim(), ric)};
  std::vector<double> v(static_cast<std::size_t>(g.dim()));
  for (int mu = 0; mu < g.dim(); ++mu) v[static_cast<std::size_t>(mu)] = 1.0 / (1.0 + mu);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    const double c = amp_sigma * std::cos(angle(g, x, 0));
    for (int mu = 0; mu < g.dim(); ++mu) fam.fields.sigma(x, mu) = c * v[static_cast<std::size_t>(mu)];
  }
  return fam;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::kInvalidArgument, "slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

bool ConvergeTable::passed() const {
  return std::all_of(fits.begin(), fits.end(), [](const OrderFit& f) { return f.passed; });
}

ConvergeTable converge_study(const std::vector<int>& sizes, int dim, double length, const std::string& family,
                             double amp_a, double amp_sigma, double min_order) {
  if (sizes.size() < 2) fail(ErrorCode::kInvalidArgument, "a refinement study needs at least two grid sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) fail(ErrorCode::kInvalidArgument, "grid sizes must be strictly increasing");
  }
  if (family != "plane_wave" && family != "zero_sigma") {
    fail(ErrorCode::kInvalidArgument, "unknown field family '" + family + "' (expected plane_wave or zero_sigma)");
  }
  const double sigma_amp = family == "zero_sigma" ? 0.0 : amp_sigma;
  ConvergeTable table;
  for (int n_sites : sizes) {
    const Grid g = refinement_grid(dim, n_sites, length);
    const auto f = plane_wave_fields(g, amp_a, sigma_amp);
    ConvergeRow row;
    row.n_sites = n_sites;
    row.h = g.spacing();
    row.weitzenbock_gap = weitzenbock_gap(g, f.a, f.sigma);
    row.coupling_identity_gap = coupling_identity_gap(g, f.a, f.sigma);
    row.convention_gap = std::abs(energy_first_noncompact(g, f.a, f.sigma) - energy_first(g, f.a, f.sigma).total);
    const auto crit = bochner_critical_fields(g, sigma_amp);
    row.bochner_l2 = bochner_residual(g, crit.fields.a, crit.fields.sigma, crit.ric).l2;
    table.rows.push_back(row);
  }

  auto fit = [&](const std::string& name, auto getter) {
    std::vector<double> xs, ys;
    double largest = 0.0;
    for (const auto& r : table.rows) {
      xs.push_back(r.n_sites);
      ys.push_back(getter(r));
      largest = std::max(largest, std::abs(getter(r)));
    }
    OrderFit of;
    of.column = name;
    // Values at round-off level carry no order information.
    if (largest <= 1e-12) {
      of.exact = true;
      of.order = std::numeric_limits<double>::quiet_NaN();
      of.passed = true;
    } else {
      of.order = -loglog_slope(xs, ys);
      of.passed = of.order >= min_order;
    }
    table.fits.push_back(of);
  };
  fit("weitzenbock_gap", [](const ConvergeRow& r) { return r.weitzenbock_gap; });
  fit("coupling_identity_gap", [](const ConvergeRow& r) { return r.coupling_identity_gap; });
  fit("convention_gap", [](const ConvergeRow& r) { return r.convention_gap; });
  fit("bochner_l2", [](const ConvergeRow& r) { return r.bochner_l2; });
  return table;
}

}  // namespace swlat
