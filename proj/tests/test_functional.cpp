#include "doctest.h"

#include <cmath>

#include "swlat/functional.hpp"
#include "swlat/gauge.hpp"
#include "swlat/random.hpp"
#include "swlat/study.hpp"

using namespace swlat;

namespace {

SectionField constant_section(const Grid& g, std::vector<cplx> s) {
  SectionField f(g);
  for (std::size_t x = 0; x < g.sites(); ++x)
    for (int mu = 0; mu < g.dim(); ++mu) f(x, mu) = s[static_cast<std::size_t>(mu)];
  return f;
}

double volume(const Grid& g) {
  double v = 1.0;
  for (int mu = 0; mu < g.dim(); ++mu) v *= g.length(mu);
  return v;
}

}  // namespace

TEST_CASE("tau_field examples") {
  const Grid g({4, 4}, 0.5);
  for (const auto tmp = tau_field(g, SectionField(g)); double v : tmp.values()) CHECK(v == 0.0);
  const auto t = tau_field(g, constant_section(g, {1.0, cplx(0, 1)}));
  for (double v : t.values()) CHECK(v == 2.0);

  Rng rng(1);
  const auto s = random_section(g, rng, 1.0);
  GaugeTransform tr = GaugeTransform::identity(g);
  tr.zeta = random_scalar(g, rng, 3.0);
  const auto gs = apply_gauge(g, tr, GaugeField(g), s);
  const auto t0 = tau_field(g, s);
  const auto t1 = tau_field(g, gs.sigma);
  for (std::size_t i = 0; i < t0.size(); ++i) CHECK(std::abs(t0.values()[i] - t1.values()[i]) <= 1e-14);
}

TEST_CASE("energy_first examples") {
  const Grid g({4, 5, 4}, 0.5);
  CHECK(energy_first(g, GaugeField(g), SectionField(g)).total == 0.0);

  Rng rng(2);
  const auto a = random_gauge(g, rng, 1.0);
  const auto e = energy_first(g, a, SectionField(g));
  const double f2 = inner(g, curvature(g, a), curvature(g, a));
  CHECK(e.total == doctest::Approx(f2).epsilon(1e-14));
  CHECK(e.term("dA_sigma") == 0.0);
  CHECK(e.term("dA_star_sigma") == 0.0);

  CHECK(energy_first(g, GaugeField(g), constant_section(g, {1.7, 0.0, 0.0})).total == 0.0);
  CHECK_THROWS_AS(e.term("nope"), Error);
}

TEST_CASE("energy_second examples") {
  const Grid g({4, 4}, 0.5);
  CHECK(energy_second(g, GaugeField(g), SectionField(g), RicciSpec::flat()).total == 0.0);

  Rng rng(3);
  const auto a = random_gauge(g, rng, 1.0);
  const auto e2 = energy_second(g, a, SectionField(g), RicciSpec::flat());
  CHECK(e2.total == doctest::Approx(energy_first(g, a, SectionField(g)).total).epsilon(1e-14));

  const auto e = energy_second(g, GaugeField(g), constant_section(g, {1.0, cplx(0, 1)}), RicciSpec::flat());
  CHECK(e.term("kinetic") == 0.0);
  CHECK(e.term("curvature") == 0.0);
  CHECK(e.term("quartic") == doctest::Approx(volume(g)));
  CHECK(e.total == doctest::Approx(e.term("curvature") + e.term("kinetic") + e.term("ric") + e.term("quartic")));
}

TEST_CASE("ricci term") {
  const Grid g({4, 4}, 1.0);
  const auto s = constant_section(g, {1.0, 2.0});
  const auto ric = RicciSpec::constant(2, {2.0, 0.5, 0.5, -1.0});
  // <s, R s> = 2*1 + 2*0.5*1*2 - 1*4 = 0 per site.
  CHECK(std::abs(energy_second(g, GaugeField(g), s, ric).term("ric")) <= 1e-14);
  const auto diag = RicciSpec::constant(2, {1.0, 0.0, 0.0, 3.0});
  CHECK(energy_second(g, GaugeField(g), s, diag).term("ric") == doctest::Approx(13.0 * 16));
  CHECK_THROWS_AS(RicciSpec::constant(2, {1.0, 0.5, 0.4, 1.0}), Error);
  CHECK_THROWS_AS(RicciSpec::constant(2, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(energy_second(Grid({4, 4, 4}, 1.0), GaugeField(Grid({4, 4, 4}, 1.0)),
                                SectionField(Grid({4, 4, 4}, 1.0)), ric),
                  Error);
}

TEST_CASE("weitzenbock gap trivial cases") {
  const Grid g({4, 4, 4}, 0.5);
  Rng rng(4);
  CHECK(weitzenbock_gap(g, random_gauge(g, rng, 1.0), SectionField(g)) <= 1e-13);
  CHECK(weitzenbock_gap(g, GaugeField(g), constant_section(g, {1.0, cplx(0.3, 1), cplx(-1, 2)})) <= 1e-12);
}

TEST_CASE("coupling identity gap trivial cases") {
  const Grid g({4, 4, 4}, 0.5);
  Rng rng(5);
  CHECK(coupling_identity_gap(g, random_gauge(g, rng, 1.0), SectionField(g)) == 0.0);
  CHECK(coupling_identity_gap(g, GaugeField(g), random_section(g, rng, 1.0)) <= 1e-13);
}

TEST_CASE("square expansion and homogeneity") {
  const Grid g({4, 5, 4}, 0.7);
  Rng rng(6);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  const auto e1 = energy_first(g, a, s);
  const auto e2 = energy_second(g, a, s, RicciSpec::flat());
  const double lhs = e1.term("curv_minus_half_tau");
  const double rhs = e2.term("curvature") - curvature_tau_pairing(g, a, s) + e2.term("quartic");
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + lhs));

  SectionField s3(g);
  for (std::size_t i = 0; i < s.size(); ++i) s3.values()[i] = 3.0 * s.values()[i];
  const auto e3 = energy_second(g, a, s3, RicciSpec::flat());
  CHECK(e3.term("kinetic") == doctest::Approx(9.0 * e2.term("kinetic")).epsilon(1e-13));
  CHECK(e3.term("quartic") == doctest::Approx(81.0 * e2.term("quartic")).epsilon(1e-13));
  CHECK(e1.total >= 0.0);
  CHECK(e2.total >= 0.0);
}

TEST_CASE("gauge invariance of both forms including windings") {
  const Grid g({4, 5, 6}, 0.6);
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_gauge(g, rng, 1.0);
    const auto s = random_section(g, rng, 1.0);
    GaugeTransform t = GaugeTransform::identity(g);
    t.zeta = random_scalar(g, rng, 4.0);
    t.winding = {static_cast<int>(rng.below(5)) - 2, 1, -1};
    const auto gf = apply_gauge(g, t, a, s);
    const double e1 = energy_first(g, a, s).total;
    const double e2 = energy_second(g, a, s, RicciSpec::flat()).total;
    CHECK(std::abs(energy_first(g, gf.a, gf.sigma).total - e1) <= 1e-12 * (1 + e1));
    CHECK(std::abs(energy_second(g, gf.a, gf.sigma, RicciSpec::flat()).total - e2) <= 1e-12 * (1 + e2));
  }
}

TEST_CASE("v_membership examples") {
  const Grid g({4, 4}, 1.0);
  const auto zero = v_membership(g, SectionField(g), 1.0);
  CHECK(zero.max_violation == 0.0);
  CHECK(zero.in_v());

  const auto edge = v_membership(g, constant_section(g, {1.0, cplx(0, 1)}), 1.0);
  CHECK(edge.max_violation == 0.0);
  CHECK(edge.in_v());

  const auto out = v_membership(g, constant_section(g, {1.0, 0.0}), 2.5);
  CHECK(out.max_violation == 1.0);
  CHECK(out.violating_site_count == 16);
  CHECK_FALSE(out.in_v());

  CHECK_THROWS_AS(v_membership(g, SectionField(g), 0.0), Error);
}

TEST_CASE("L4 control inside V") {
  const Grid g({4, 4}, 0.5);
  const auto s = constant_section(g, {cplx(0.8, 0.1), cplx(-0.2, 0.9)});
  const double lambda0 = 2.0;
  const auto v = v_membership(g, s, lambda0);
  REQUIRE(v.in_v());
  const auto n = norms(g, s);
  const double tau2 = inner(g, tau_field(g, s), tau_field(g, s));
  CHECK(std::pow(n.l4, 4) <= lambda0 * lambda0 * tau2 * (1 + 1e-12));
}

TEST_CASE("penalty energy") {
  const Grid g({4, 4}, 0.5);
  const auto s = constant_section(g, {1.0, 0.0});
  CHECK(penalty_energy(g, s, 1.0, 0.0) == 0.0);
  CHECK(penalty_energy(g, s, 1.0, 2.0) == doctest::Approx(2.0 * 4.0));
  ObjectiveSpec spec;
  spec.penalty_weight = 2.0;
  CHECK(objective_value(g, GaugeField(g), s, spec) == doctest::Approx(energy_second(g, GaugeField(g), s, {}).total + 8.0));
}

TEST_CASE("bochner residual") {
  const Grid g({4, 4, 4}, 0.5);
  CHECK(bochner_residual(g, GaugeField(g), SectionField(g), RicciSpec::flat()).l2 == 0.0);
  CHECK(bochner_residual(g, GaugeField(g), constant_section(g, {0.7, 0.0, 0.0}), RicciSpec::flat()).l2 <= 1e-14);

  // Exact lattice critical points satisfy the discrete identity exactly.
  const Grid r = refinement_grid(3, 8, 2 * 3.141592653589793);
  const auto fam = bochner_critical_fields(r, 0.5);
  CHECK(bochner_residual(r, fam.fields.a, fam.fields.sigma, fam.ric).l2 <= 1e-13);
}

TEST_CASE("continuum EL residual trivial cases") {
  const Grid g({4, 4, 4}, 0.5);
  const auto z = el_residual_continuum(g, GaugeField(g), SectionField(g), RicciSpec::flat());
  CHECK(z.l2_a == 0.0);
  CHECK(z.l2_sigma == 0.0);
  Rng rng(8);
  const auto pure = grad_scalar(g, random_scalar(g, rng, 1.0));
  CHECK(el_residual_continuum(g, pure, SectionField(g), RicciSpec::flat()).l2_a <= 1e-12);
}

TEST_CASE("objective names round trip") {
  CHECK(objective_from_string("first") == Objective::kFirst);
  CHECK(objective_from_string("second") == Objective::kSecond);
  CHECK(std::string(to_string(Objective::kFirst)) == "first");
  CHECK_THROWS_AS(objective_from_string("third"), Error);
}

TEST_CASE("objective density integrates to the objective") {
  const Grid g({4, 5, 6}, 0.5);
  Rng rng(31);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  ObjectiveSpec spec;
  for (auto o : {Objective::kFirst, Objective::kSecond}) {
    spec.objective = o;
    spec.ric = RicciSpec::constant(3, {1.0, 0.2, 0.0, 0.2, -0.5, 0.1, 0.0, 0.1, 0.3});
    spec.penalty_weight = 0.7;
    const auto d = objective_density(g, a, s, spec);
    REQUIRE(d.size() == g.sites());
    double sum = 0.0;
    for (double v : d) sum += v;
    const double e = objective_value(g, a, s, spec);
    CHECK(std::abs(g.cell_volume() * sum - e) <= 1e-12 * e);
  }
}
