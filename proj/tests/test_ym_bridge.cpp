#include "doctest.h"

#include <cmath>

#include "swlat/functional.hpp"
#include "swlat/random.hpp"
#include "swlat/ym_bridge.hpp"

using namespace swlat;

TEST_CASE("assemble_su2 examples") {
  const Grid g({4, 4, 4}, 0.5);
  const auto z = assemble_su2(g, GaugeField(g), SectionField(g));
  for (std::size_t x = 0; x < g.sites(); ++x)
    for (int mu = 0; mu < 3; ++mu) CHECK(z(x, mu) == IrcElement{});

  Rng rng(1);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  const auto d = assemble_su2(g, a, SectionField(g));
  const auto u = assemble_su2(g, a, s);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < 3; ++mu) {
      CHECK(d(x, mu).z == cplx(0));
      CHECK(u(x, mu).a == a(x, mu));
      CHECK(u(x, mu).z == s(x, mu));
      const auto back = su2_to_irc(irc_to_su2(u(x, mu)));
      CHECK(std::abs(back.a - u(x, mu).a) <= 1e-14);
      CHECK(std::abs(back.z - u(x, mu).z) <= 1e-14);
    }
  }
  CHECK_THROWS_AS(assemble_su2(g, GaugeField(Grid({4, 4}, 0.5)), s), Error);
}

TEST_CASE("ym energy examples") {
  const Grid g({4, 4, 4}, 0.5);
  CHECK(ym_energy_noncompact(g, assemble_su2(g, GaugeField(g), SectionField(g))) == 0.0);

  Rng rng(2);
  const auto a = random_gauge(g, rng, 1.0);
  const double f2 = inner(g, curvature(g, a), curvature(g, a));
  CHECK(ym_energy_noncompact(g, assemble_su2(g, a, SectionField(g))) == doctest::Approx(f2).epsilon(1e-14));

  // s_1 = (0,1), s_2 = (0,i): F~_12 = [(0,1),(0,i)] = (-i, 0), density 1.
  const Grid g2({4, 4}, 1.0);
  SectionField s(g2);
  for (std::size_t x = 0; x < g2.sites(); ++x) {
    s(x, 0) = 1.0;
    s(x, 1) = cplx(0, 1);
  }
  CHECK(ym_energy_noncompact(g2, assemble_su2(g2, GaugeField(g2), s)) == doctest::Approx(16.0));
}

TEST_CASE("bridge identity") {
  const Grid g({6, 6, 6}, 0.5);
  Rng rng(3);
  const auto a = random_gauge(g, rng, 1.0);
  const auto zero = bridge_check(g, a, SectionField(g));
  CHECK(zero.gap <= 1e-12 * (1 + zero.h_first_noncompact));
  CHECK(zero.ym_energy == doctest::Approx(inner(g, curvature(g, a), curvature(g, a))));

  const auto only_sigma = bridge_check(g, GaugeField(g), random_section(g, rng, 1.0));
  CHECK(only_sigma.holds());
  for (int k = 0; k < 10; ++k) {
    const auto rep = bridge_check(g, random_gauge(g, rng, 1.0), random_section(g, rng, 1.0));
    CHECK(rep.holds());
    CHECK(rep.max_decomposition_error <= 1e-13);
    CHECK(rep.gap == doctest::Approx(std::abs(rep.ym_energy + rep.dstar_energy - rep.h_first_noncompact)));
  }
}

TEST_CASE("noncompact operators") {
  const Grid g({4, 5, 4}, 0.5);
  Rng rng(4);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  ComplexScalarField phi(g);
  for (auto& v : phi.values()) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  // Adjoint of phi -> D+ phi + i a phi, built directly.
  SectionField dphi(g);
  for (std::size_t x = 0; x < g.sites(); ++x)
    for (int mu = 0; mu < 3; ++mu)
      dphi(x, mu) = (phi(g.forward(x, mu), 0) - phi(x, 0)) / g.spacing() + cplx(0, a(x, mu)) * phi(x, 0);
  CHECK(std::abs(inner(g, dphi, s) - inner(g, phi, cov_div_noncompact(g, a, s))) <= 1e-12);

  const auto e = energy_first_noncompact(g, a, s);
  const auto rep = bridge_check(g, a, s);
  CHECK(e == rep.h_first_noncompact);
  CHECK(rep.convention_gap == doctest::Approx(std::abs(rep.h_first_compact - e)));
}
