#include "doctest.h"

#include <cmath>

#include "swlat/gradient.hpp"
#include "swlat/optimize.hpp"
#include "swlat/random.hpp"

using namespace swlat;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.max_iters = 5000;
  cfg.tol_grad = 1e-8;
  cfg.regauge_every = 50;
  return cfg;
}

void check_monotone(const std::vector<TraceRow>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].energy_total <= trace[i - 1].energy_total * (1 + 1e-12) + 1e-300);
  }
}

}  // namespace

TEST_CASE("run config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol_grad = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.armijo_c = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.backtrack_factor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.objective.penalty_weight = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(descent_method_from_string("gd") == DescentMethod::kGradient);
  CHECK(descent_method_from_string("lbfgs") == DescentMethod::kLbfgs);
  CHECK_THROWS_AS(descent_method_from_string("newton"), Error);
}

TEST_CASE("zero initialization converges immediately") {
  const Grid g({4, 4, 4}, 1.0);
  const auto r = minimize(g, small_config(), GaugeField(g), SectionField(g));
  CHECK(r.converged());
  CHECK(r.iterations == 0);
  CHECK(r.trace.back().energy_total == 0.0);
}

TEST_CASE("Maxwell descent reaches the flat connection") {
  const Grid g({8, 8, 8}, 1.0);
  Rng rng(1);
  const auto a0 = random_gauge(g, rng, 0.1);
  const auto r = minimize(g, small_config(), a0, SectionField(g));
  REQUIRE(r.converged());
  CHECK(r.trace.back().energy_total <= 1e-10 * r.trace.front().energy_total);
  check_monotone(r.trace);
}

TEST_CASE("random small start converges for both methods on a small grid") {
  const Grid g({4, 4, 4}, 1.0);
  for (auto method : {DescentMethod::kLbfgs, DescentMethod::kGradient}) {
    Rng rng(2);
    const auto a0 = random_gauge(g, rng, 0.1);
    const auto s0 = random_section(g, rng, 0.1);
    auto cfg = small_config();
    cfg.method = method;
    cfg.max_iters = 50000;
    cfg.tol_grad = method == DescentMethod::kLbfgs ? 1e-8 : 1e-5;
    const auto r = minimize(g, cfg, a0, s0);
    INFO(std::string(to_string(method)), " stop=", std::string(to_string(r.stop)), " iters=", r.iterations, " grad=", r.trace.back().grad_norm);
    CHECK(r.converged());
    check_monotone(r.trace);
    CHECK(r.trace.back().regauged);
    CHECK(r.trace.back().d_star_a_norm <= 1e-10);
    CHECK(r.max_regauge_drift <= 1e-12 * (1 + r.trace.front().energy_total));
  }
}

TEST_CASE("8^3 run meets the tolerance and exports a gauge-fixed tail") {
  const Grid g({8, 8, 8}, 1.0);
  Rng rng(3);
  const auto a0 = random_gauge(g, rng, 0.1);
  const auto s0 = random_section(g, rng, 0.1);
  auto cfg = small_config();
  cfg.snapshot_every = 1;
  cfg.cauchy_k = 5;
  int seen = 0;
  MinimizeHooks hooks;
  hooks.on_snapshot = [&](const Snapshot&) { ++seen; };
  const auto r = minimize(g, cfg, a0, s0, hooks);
  REQUIRE(r.converged());
  CHECK(r.trace.back().grad_norm <= 1e-8);
  CHECK(r.trace.back().energy_total <= r.trace.front().energy_total);
  CHECK(r.snapshots.size() == 5);
  CHECK(seen >= 5);
  CHECK(r.snapshots.back().iter == r.iterations);
  for (const auto& s : r.snapshots) CHECK(l2_norm(g, div_oneform(g, s.fields.a)) <= 1e-10);
  const auto ps = palais_smale_report(g, r.trace, r.snapshots, 5);
  CHECK(ps.snapshots_used == 5);
  CHECK(ps.grad_tail == r.trace.back().grad_norm);
  CHECK(ps.cauchy_tail >= ps.cauchy_tail_a);
}

TEST_CASE("minimization is deterministic") {
  const Grid g({4, 5, 4}, 1.0);
  auto run = [&] {
    Rng rng(4);
    const auto a0 = random_gauge(g, rng, 0.2);
    const auto s0 = random_section(g, rng, 0.2);
    return minimize(g, small_config(), a0, s0);
  };
  const auto r1 = run();
  set_thread_count(3);
  const auto r2 = run();
  set_thread_count(1);
  REQUIRE(r1.trace.size() == r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) {
    CHECK(r1.trace[i].energy_total == r2.trace[i].energy_total);
    CHECK(r1.trace[i].grad_norm == r2.trace[i].grad_norm);
  }
  CHECK(r1.fields.a == r2.fields.a);
}

TEST_CASE("max_iters stop") {
  const Grid g({4, 4, 4}, 1.0);
  Rng rng(5);
  auto cfg = small_config();
  cfg.max_iters = 3;
  const auto a0 = random_gauge(g, rng, 0.3);
  const auto s0 = random_section(g, rng, 0.3);
  const auto r = minimize(g, cfg, a0, s0);
  CHECK(r.stop == StopReason::kMaxIters);
  CHECK_FALSE(r.converged());
  CHECK(r.iterations == 3);
  CHECK(std::string(to_string(r.stop)) == "max_iters");
}

TEST_CASE("non-finite input aborts") {
  const Grid g({4, 4, 4}, 1.0);
  GaugeField a(g);
  a(3, 1) = std::nan("");
  CHECK_THROWS_AS(minimize(g, small_config(), a, SectionField(g)), Error);
}

TEST_CASE("palais_smale_report fixtures") {
  const Grid g({4, 4, 4}, 1.0);
  Rng rng(6);
  Snapshot s;
  s.transform = GaugeTransform::identity(g);
  s.fields = {random_gauge(g, rng, 1.0), random_section(g, rng, 1.0)};
  std::vector<TraceRow> trace(1);
  trace[0].grad_norm = 0.5;

  const auto same = palais_smale_report(g, trace, {s, s}, 5);
  CHECK(same.cauchy_tail == 0.0);
  CHECK(same.grad_tail == 0.5);

  std::vector<Snapshot> diverging;
  for (int k = 0; k < 5; ++k) {
    Snapshot d = s;
    for (auto& v : d.fields.a.values()) v *= (1 + k);
    diverging.push_back(d);
  }
  CHECK(palais_smale_report(g, trace, diverging, 5).cauchy_tail > 1.0);
  CHECK_THROWS_AS(palais_smale_report(g, trace, {s}, 5), Error);
}

TEST_CASE("trace term names") {
  CHECK(energy_term_names(Objective::kFirst) == std::vector<std::string>{"curv_minus_half_tau", "dA_sigma", "dA_star_sigma"});
  CHECK(energy_term_names(Objective::kSecond) == std::vector<std::string>{"curvature", "kinetic", "ric", "quartic"});
}
