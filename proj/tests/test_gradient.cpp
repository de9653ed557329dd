#include "doctest.h"

#include <cmath>

#include "swlat/gauge.hpp"
#include "swlat/gradient.hpp"
#include "swlat/random.hpp"
#include "swlat/study.hpp"

using namespace swlat;

namespace {

ObjectiveSpec spec_for(Objective o) {
  ObjectiveSpec s;
  s.objective = o;
  return s;
}

}  // namespace

TEST_CASE("zero fields have zero gradient") {
  const Grid g({4, 4, 4}, 0.5);
  for (auto o : {Objective::kFirst, Objective::kSecond}) {
    const auto gp = grad_energy(g, GaugeField(g), SectionField(g), spec_for(o));
    CHECK(gp.norm == 0.0);
  }
}

TEST_CASE("Maxwell case decouples") {
  const Grid g({4, 5, 4}, 0.5);
  Rng rng(1);
  const auto a = random_gauge(g, rng, 0.5);
  const auto gp = grad_energy(g, a, SectionField(g), spec_for(Objective::kSecond));
  CHECK(l2_norm(g, gp.g_sigma) == 0.0);
  const auto expect = curvature_adjoint(g, curvature(g, a));
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(gp.g_a.values()[i] == doctest::Approx(2.0 * expect.values()[i]).epsilon(1e-12).scale(1e-12));
  }
  const auto pure = grad_scalar(g, random_scalar(g, rng, 1.0));
  CHECK(grad_energy(g, pure, SectionField(g), spec_for(Objective::kSecond)).norm <= 1e-12);
}

TEST_CASE("finite-difference agreement for both objectives and with the penalty") {
  Rng rng(2);
  for (const auto& dims : {std::vector<int>{4, 4, 4}, std::vector<int>{4, 4, 4, 4}}) {
    const Grid g(dims, 0.5);
    for (auto o : {Objective::kFirst, Objective::kSecond}) {
      const auto a = random_gauge(g, rng, 0.5);
      const auto s = random_section(g, rng, 0.5);
      auto spec = spec_for(o);
      CHECK(fd_check(g, a, s, spec, 1e-5, 24, 3).max_rel_err() <= 1e-6);
      spec.penalty_weight = 0.7;
      spec.lambda0 = 0.5;
      CHECK(fd_check(g, a, s, spec, 1e-5, 24, 4).max_rel_err() <= 1e-6);
    }
  }
}

TEST_CASE("finite-difference agreement with a Ricci term") {
  const Grid g({4, 5, 4}, 0.4);
  Rng rng(3);
  auto spec = spec_for(Objective::kSecond);
  spec.ric = RicciSpec::constant(3, {1.0, 0.2, 0.0, 0.2, -0.5, 0.1, 0.0, 0.1, 0.3});
  CHECK(fd_check(g, random_gauge(g, rng, 0.5), random_section(g, rng, 0.5), spec, 1e-5, 24, 5).max_rel_err() <= 1e-6);
}

TEST_CASE("epsilon sweep is V-shaped") {
  const Grid g({4, 4, 4}, 0.5);
  Rng rng(4);
  const auto a = random_gauge(g, rng, 0.5);
  const auto s = random_section(g, rng, 0.5);
  const auto spec = spec_for(Objective::kSecond);
  const double e3 = fd_check(g, a, s, spec, 1e-3, 16, 6).max_rel_err();
  const double e5 = fd_check(g, a, s, spec, 1e-5, 16, 6).max_rel_err();
  const double e7 = fd_check(g, a, s, spec, 1e-7, 16, 6).max_rel_err();
  CHECK(e5 < e3);
  CHECK(e5 < e7);
}

TEST_CASE("gradient norm is gauge invariant and orthogonal to gauge orbits") {
  const Grid g({4, 5, 6}, 0.5);
  Rng rng(5);
  for (auto o : {Objective::kFirst, Objective::kSecond}) {
    const auto a = random_gauge(g, rng, 0.5);
    const auto s = random_section(g, rng, 0.5);
    GaugeTransform t = GaugeTransform::identity(g);
    t.zeta = random_scalar(g, rng, 2.0);
    t.winding = {1, 0, -1};
    const auto gf = apply_gauge(g, t, a, s);
    const auto g0 = grad_energy(g, a, s, spec_for(o));
    const auto g1 = grad_energy(g, gf.a, gf.sigma, spec_for(o));
    CHECK(std::abs(g0.norm - g1.norm) <= 1e-10 * (1 + g0.norm));

    // Infinitesimal gauge direction (d zeta, -i zeta sigma).
    const auto zeta = random_scalar(g, rng, 1.0);
    const auto da = grad_scalar(g, zeta);
    SectionField ds(g);
    for (std::size_t x = 0; x < g.sites(); ++x)
      for (int mu = 0; mu < 3; ++mu) ds(x, mu) = cplx(0, -zeta(x, 0)) * s(x, mu);
    const double dir = inner(g, g0.g_a, da) + inner(g, g0.g_sigma, ds);
    CHECK(std::abs(dir) <= 1e-10 * (1 + g0.norm * (l2_norm(g, da) + l2_norm(g, ds))));
  }
}

TEST_CASE("first objective vanishes at a parallel section") {
  const Grid g({4, 4, 4}, 0.5);
  SectionField s(g);
  for (std::size_t x = 0; x < g.sites(); ++x) s(x, 0) = 0.8;
  CHECK(grad_energy(g, GaugeField(g), s, spec_for(Objective::kFirst)).norm == 0.0);
}

TEST_CASE("the Bochner family is a lattice critical point of the second form") {
  const Grid g = refinement_grid(3, 8, 2 * 3.141592653589793);
  const auto fam = bochner_critical_fields(g, 0.5);
  auto spec = spec_for(Objective::kSecond);
  spec.ric = fam.ric;
  CHECK(grad_energy(g, fam.fields.a, fam.fields.sigma, spec).norm <= 1e-12);
}
