#include "doctest.h"

#include <cmath>
#include <numbers>

#include "swlat/gauge.hpp"
#include "swlat/lattice.hpp"
#include "swlat/random.hpp"

using namespace swlat;

namespace {

std::size_t site2(const Grid& g, int x0, int x1) {
  const int c[2] = {x0, x1};
  return g.index(c);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g({4, 5, 6}, 0.5);
  CHECK(g.sites() == 120);
  CHECK(g.pairs() == 3);
  CHECK(g.cell_volume() == 0.125);
  CHECK(g.pair_index(0, 1) == 0);
  CHECK(g.pair_index(0, 2) == 1);
  CHECK(g.pair_index(1, 2) == 2);
  const int c[3] = {3, 4, 5};
  const auto x = g.index(c);
  CHECK(x == 119);
  CHECK(g.coord(g.forward(x, 0), 0) == 0);
  CHECK(g.coord(g.forward(x, 2), 2) == 0);
  CHECK(g.backward(g.forward(x, 1), 1) == x);
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(Grid({3, 4}, 1.0), Error);
  CHECK_THROWS_AS(Grid({4, 4}, 0.0), Error);
  CHECK_THROWS_AS(Grid({4}, 1.0), Error);
  CHECK_THROWS_AS(Grid({4, 4, 4, 4, 4}, 1.0), Error);
}

TEST_CASE("curvature examples") {
  const Grid g({4, 4}, 1.0);
  CHECK(l2_norm(g, curvature(g, GaugeField(g))) == 0.0);

  Rng rng(3);
  const auto zeta = random_scalar(g, rng, 2.0);
  for (const auto tmp = curvature(g, grad_scalar(g, zeta)); double v : tmp.values()) CHECK(std::abs(v) <= 1e-14);

  // a_2 = 1 on the x_1 = 0 column.
  GaugeField a(g);
  for (int y = 0; y < 4; ++y) a(site2(g, 0, y), 1) = 1.0;
  const auto f = curvature(g, a);
  for (int y = 0; y < 4; ++y) {
    CHECK(f(site2(g, 3, y), 0) == 1.0);
    CHECK(f(site2(g, 0, y), 0) == -1.0);
    CHECK(f(site2(g, 1, y), 0) == 0.0);
    CHECK(f(site2(g, 2, y), 0) == 0.0);
  }
}

TEST_CASE("cov_grad examples") {
  const Grid g({4, 4}, 1.0);
  SectionField s(g, cplx(0.7, -0.2));
  for (const auto tmp = cov_grad(g, GaugeField(g), s); const auto& v : tmp.values()) CHECK(std::abs(v) == 0.0);

  Rng rng(4);
  const auto r = random_section(g, rng, 1.0);
  const auto plain = cov_grad(g, GaugeField(g), r);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < 2; ++mu) {
      for (int nu = 0; nu < 2; ++nu) {
        CHECK(std::abs(plain(x, mu * 2 + nu) - (r(g.forward(x, mu), nu) - r(x, nu))) <= 1e-15);
      }
    }
  }

  GaugeField a(g);
  SectionField one(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    a(x, 0) = std::numbers::pi / 2;
    one(x, 0) = 1.0;
  }
  const auto d = cov_grad(g, a, one);
  for (std::size_t x = 0; x < g.sites(); ++x) CHECK(std::abs(d(x, 0) - cplx(-1, 1)) <= 1e-15);
}

TEST_CASE("cov_div of constants vanishes at a = 0") {
  const Grid g({4, 5}, 0.7);
  SectionField s(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    s(x, 0) = cplx(1, 2);
    s(x, 1) = cplx(-3, 0.5);
  }
  for (const auto tmp = cov_div(g, GaugeField(g), s); const auto& v : tmp.values()) CHECK(std::abs(v) <= 1e-14);
  for (const auto tmp = cov_div(g, GaugeField(g), SectionField(g)); const auto& v : tmp.values()) CHECK(v == cplx(0));
}

TEST_CASE("laplacian_scalar examples") {
  const Grid g({4, 4}, 1.0);
  ScalarField c(g, 3.0);
  for (const auto tmp = laplacian_scalar(g, c); double v : tmp.values()) CHECK(v == 0.0);

  const double profile[4] = {0, 1, 0, -1};
  const double expect[4] = {0, 2, 0, -2};
  ScalarField z(g);
  for (int x0 = 0; x0 < 4; ++x0)
    for (int y = 0; y < 4; ++y) z(site2(g, x0, y), 0) = profile[x0];
  const auto lz = laplacian_scalar(g, z);
  for (int x0 = 0; x0 < 4; ++x0)
    for (int y = 0; y < 4; ++y) CHECK(lz(site2(g, x0, y), 0) == expect[x0]);

  const Grid g3({8, 4, 4}, 0.5);
  for (int k = 0; k < 4; ++k) {
    ScalarField w(g3);
    for (std::size_t x = 0; x < g3.sites(); ++x) w(x, 0) = std::cos(2 * std::numbers::pi * k * g3.coord(x, 0) / 8.0);
    const double lambda = (2 - 2 * std::cos(2 * std::numbers::pi * k / 8.0)) / 0.25;
    const auto lw = laplacian_scalar(g3, w);
    for (std::size_t x = 0; x < g3.sites(); ++x) CHECK(lw(x, 0) == doctest::Approx(lambda * w(x, 0)).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("laplacian equals div of grad") {
  const Grid g({4, 5, 6}, 0.3);
  Rng rng(5);
  const auto z = random_scalar(g, rng, 1.0);
  const auto l1 = laplacian_scalar(g, z);
  const auto l2 = div_oneform(g, grad_scalar(g, z));
  for (std::size_t x = 0; x < g.sites(); ++x) CHECK(std::abs(l1(x, 0) - l2(x, 0)) <= 1e-11);
}

TEST_CASE("exact adjointness of every operator pair") {
  Rng rng(6);
  for (const auto& dims : {std::vector<int>{4, 4}, std::vector<int>{4, 5, 6}, std::vector<int>{4, 4, 4, 5}}) {
    const Grid g(dims, 0.6);
    for (int k = 0; k < 5; ++k) {
      const auto a = random_gauge(g, rng, 1.0);
      const auto s = random_section(g, rng, 1.0);
      const auto zeta = random_scalar(g, rng, 1.0);
      const auto b = random_gauge(g, rng, 1.0);
      TwoFormField w(g);
      for (auto& v : w.values()) v = rng.uniform(-1, 1);
      ComplexTwoFormField cw(g);
      for (auto& v : cw.values()) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
      CovGradField t(g);
      for (auto& v : t.values()) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
      ComplexScalarField phi(g);
      for (auto& v : phi.values()) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

      const double tol = 1e-12 * (1.0 + l2_norm(g, s) * l2_norm(g, t));
      CHECK(std::abs(inner(g, grad_scalar(g, zeta), b) - inner(g, zeta, div_oneform(g, b))) <= tol);
      CHECK(std::abs(inner(g, curvature(g, b), w) - inner(g, b, curvature_adjoint(g, w))) <= tol);
      CHECK(std::abs(inner(g, cov_grad(g, a, s), t) - inner(g, s, cov_grad_adjoint(g, a, t))) <= tol);
      CHECK(std::abs(inner(g, d_A_oneform(g, a, s), cw) - inner(g, s, d_A_oneform_adjoint(g, a, cw))) <= tol);
      CHECK(std::abs(inner(g, cov_grad_scalar(g, a, phi), s) - inner(g, phi, cov_div(g, a, s))) <= tol);
    }
  }
}

TEST_CASE("gauge covariance of the covariant operators") {
  const Grid g({4, 5, 4}, 0.8);
  Rng rng(7);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  GaugeTransform t = GaugeTransform::identity(g);
  t.zeta = random_scalar(g, rng, 3.0);
  const auto gf = apply_gauge(g, t, a, s);

  const auto f0 = curvature(g, a);
  const auto f1 = curvature(g, gf.a);
  for (std::size_t i = 0; i < f0.size(); ++i) CHECK(std::abs(f0.values()[i] - f1.values()[i]) <= 1e-13);

  const auto c0 = cov_grad(g, a, s);
  const auto c1 = cov_grad(g, gf.a, gf.sigma);
  const auto d0 = d_A_oneform(g, a, s);
  const auto d1 = d_A_oneform(g, gf.a, gf.sigma);
  const auto v0 = cov_div(g, a, s);
  const auto v1 = cov_div(g, gf.a, gf.sigma);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    const cplx phase = std::exp(cplx(0, -t.zeta(x, 0)));
    for (int c = 0; c < 9; ++c) CHECK(std::abs(c1(x, c) - phase * c0(x, c)) <= 1e-13);
    for (int p = 0; p < 3; ++p) CHECK(std::abs(d1(x, p) - phase * d0(x, p)) <= 1e-13);
    CHECK(std::abs(v1(x, 0) - phase * v0(x, 0)) <= 1e-13);
  }
}

TEST_CASE("norms") {
  const Grid g({4, 4, 4}, 0.5);
  const auto z = norms(g, ScalarField(g));
  CHECK(z.l2 == 0.0);
  CHECK(z.l4 == 0.0);
  CHECK(z.w12 == 0.0);

  const auto c = norms(g, ScalarField(g, 3.0));
  CHECK(c.l2 * c.l2 == doctest::Approx(9.0 * 8.0));
  CHECK(c.w12 == doctest::Approx(c.l2));

  Rng rng(8);
  const auto s = random_section(g, rng, 1.0);
  const auto n = norms(g, s);
  CHECK(n.w12 >= n.l2);
  CHECK(n.l4 > 0.0);
}

TEST_CASE("shape mismatches are rejected") {
  const Grid g({4, 4}, 1.0);
  const Grid h({4, 5}, 1.0);
  CHECK_THROWS_AS(curvature(g, GaugeField(h)), Error);
  CHECK_THROWS_AS(cov_grad(g, GaugeField(g), SectionField(h)), Error);
  try {
    div_oneform(g, GaugeField(h));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
}

TEST_CASE("reductions are deterministic across thread counts") {
  const Grid g({8, 8, 8}, 0.5);
  Rng rng(9);
  const auto a = random_gauge(g, rng, 1.0);
  const auto s = random_section(g, rng, 1.0);
  set_thread_count(1);
  const double n1 = l2_norm(g, cov_grad(g, a, s));
  const auto f1 = curvature(g, a);
  set_thread_count(4);
  const double n4 = l2_norm(g, cov_grad(g, a, s));
  const auto f4 = curvature(g, a);
  set_thread_count(1);
  CHECK(n1 == n4);
  CHECK(f1 == f4);
}
