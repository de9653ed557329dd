#include "swlat/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swlat/gradient.hpp"

namespace swlat {

const char* to_string(DescentMethod m) {
  return m == DescentMethod::kGradient ? "gd" : "lbfgs";
}

DescentMethod descent_method_from_string(const std::string& s) {
  if (s == "gd") return DescentMethod::kGradient;
  if (s == "lbfgs") return DescentMethod::kLbfgs;
  fail(ErrorCode::kInvalidArgument, "unknown descent method '" + s + "' (expected gd or lbfgs)");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kStalled: return "stalled";
  }
  return "unknown";
}

std::vector<std::string> energy_term_names(Objective form) {
  if (form == Objective::kFirst) return {"curv_minus_half_tau", "dA_sigma", "dA_star_sigma"};
  return {"curvature", "kinetic", "ric", "quartic"};
}

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidArgument, what); };
  if (max_iters < 1) bad("max_iters must be at least 1");
  if (!(tol_grad > 0.0)) bad("tol_grad must be positive");
  if (!(step0 > 0.0)) bad("step0 must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) bad("armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) bad("backtrack_factor must lie in (0, 1)");
  if (regauge_every < 0) bad("regauge_every must be non-negative");
  if (snapshot_every < 0) bad("snapshot_every must be non-negative");
  if (lbfgs_memory < 1) bad("lbfgs_memory must be at least 1");
  if (cauchy_k < 2) bad("cauchy_k must be at least 2");
  if (objective.penalty_weight < 0.0) bad("penalty weight must be non-negative");
  if (!(objective.lambda0 > 0.0)) bad("lambda0 must be positive");
}

namespace {

// A point or direction in (a, sigma) space with the lattice inner product.
struct Vec {
  GaugeField a;
  SectionField s;
};

double dot(const Grid& g, const Vec& x, const Vec& y) { return inner(g, x.a, y.a) + inner(g, x.s, y.s); }

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.a.size(); ++i) y.a.values()[i] += alpha * x.a.values()[i];
  for (std::size_t i = 0; i < y.s.size(); ++i) y.s.values()[i] += alpha * x.s.values()[i];
}

void scale(double alpha, Vec& x) {
  for (auto& v : x.a.values()) v *= alpha;
  for (auto& v : x.s.values()) v *= alpha;
}

Vec difference(const Vec& x, const Vec& y) {
  Vec d = x;
  axpy(-1.0, y, d);
  return d;
}

// Tangent vectors follow sigma under a gauge transform; the a part is unchanged
// because d zeta cancels in differences and gradients.
void transport(const Grid& g, const GaugeTransform& t, Vec& v) {
  GaugedFields out = apply_gauge(g, t, GaugeField(g), v.s);
  v.s = std::move(out.sigma);
}

struct Evaluation {
  EnergyBreakdown breakdown;
  double penalty = 0.0;
  double total = 0.0;
  Vec grad;
  double grad_norm = 0.0;
};

Evaluation evaluate(const Grid& g, const ObjectiveSpec& spec, const Vec& x) {
  Evaluation e;
  e.breakdown = spec.objective == Objective::kFirst ? energy_first(g, x.a, x.s)
                                                    : energy_second(g, x.a, x.s, spec.ric);
  e.penalty = spec.penalty_weight > 0.0 ? penalty_energy(g, x.s, spec.lambda0, spec.penalty_weight) : 0.0;
  e.total = e.breakdown.total + e.penalty;
  auto gp = grad_energy(g, x.a, x.s, spec);
  e.grad = Vec{std::move(gp.g_a), std::move(gp.g_sigma)};
  e.grad_norm = gp.norm;
  if (!std::isfinite(e.total) || !std::isfinite(e.grad_norm)) {
    fail(ErrorCode::kNumeric, "non-finite energy or gradient encountered during minimization");
  }
  return e;
}

double energy_only(const Grid& g, const ObjectiveSpec& spec, const Vec& x) {
  return objective_value(g, x.a, x.s, spec);
}

TraceRow make_row(const Grid& g, const ObjectiveSpec& spec, int iter, const Vec& x, const Evaluation& e,
                  double step, bool regauged) {
  TraceRow row;
  row.iter = iter;
  row.energy_total = e.total;
  for (const auto& [name, value] : e.breakdown.terms) row.energy_terms.push_back(value);
  row.penalty = e.penalty;
  row.grad_norm = e.grad_norm;
  row.v_max_violation = v_membership(g, x.s, spec.lambda0).max_violation;
  row.step_len = step;
  row.d_star_a_norm = l2_norm(g, div_oneform(g, x.a));
  row.regauged = regauged;
  return row;
}

struct Pair {
  Vec s;
  Vec y;
  double rho;
};

Vec lbfgs_direction(const Grid& g, const std::deque<Pair>& mem, const Vec& grad) {
  Vec q = grad;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(g, mem[k].s, q);
    axpy(-alpha[k], mem[k].y, q);
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    scale(dot(g, last.s, last.y) / dot(g, last.y, last.y), q);
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(g, mem[k].y, q);
    axpy(alpha[k] - beta, mem[k].s, q);
  }
  scale(-1.0, q);
  return q;
}

}  // namespace

MinimizeResult minimize(const Grid& g, const RunConfig& cfg, const GaugeField& a0,
                        const SectionField& sigma0, const MinimizeHooks& hooks) {
  cfg.validate();
  require_shape(g, a0, "minimize");
  require_shape(g, sigma0, "minimize");
  cfg.objective.ric.require_dim(g.dim());
  if (!all_finite(a0) || !all_finite(sigma0)) fail(ErrorCode::kNumeric, "initial fields contain NaN or Inf");

  const ObjectiveSpec& spec = cfg.objective;
  const int snapshot_every = cfg.snapshot_every > 0 ? cfg.snapshot_every
                             : cfg.regauge_every > 0 ? cfg.regauge_every
                                                     : 100;
  MinimizeResult res;
  Vec x{a0, sigma0};
  Evaluation cur = evaluate(g, spec, x);
  res.trace.push_back(make_row(g, spec, 0, x, cur, 0.0, false));

  std::deque<Pair> memory;
  std::deque<Snapshot> tail;
  auto take_snapshot = [&](int iter) {
    auto rg = regauge(g, x.a, x.s);
    Snapshot snap{iter, std::move(rg.transform), std::move(rg.fields)};
    if (hooks.on_snapshot) hooks.on_snapshot(snap);
    tail.push_back(std::move(snap));
    while (tail.size() > static_cast<std::size_t>(cfg.cauchy_k)) tail.pop_front();
  };
  auto do_regauge = [&] {
    auto rg = regauge(g, x.a, x.s);
    x = Vec{std::move(rg.fields.a), std::move(rg.fields.sigma)};
    for (auto& p : memory) {
      transport(g, rg.transform, p.s);
      transport(g, rg.transform, p.y);
    }
    const double before = cur.total;
    cur = evaluate(g, spec, x);
    res.max_regauge_drift = std::max(res.max_regauge_drift, std::abs(cur.total - before));
  };

  double last_step = cfg.step0;
  int iter = 0;
  res.stop = StopReason::kMaxIters;
  if (cur.grad_norm <= cfg.tol_grad) res.stop = StopReason::kConverged;

  while (res.stop != StopReason::kConverged && iter < cfg.max_iters) {
    Vec dir;
    bool quasi_newton = cfg.method == DescentMethod::kLbfgs && !memory.empty();
    if (quasi_newton) {
      dir = lbfgs_direction(g, memory, cur.grad);
      if (!(dot(g, dir, cur.grad) < 0.0)) {
        memory.clear();
        quasi_newton = false;
      }
    }
    if (!quasi_newton) {
      dir = cur.grad;
      scale(-1.0, dir);
    }
    const double slope = dot(g, dir, cur.grad);

    // Quasi-Newton steps start at the unit step; gradient steps grow from the last accepted one.
    double step = quasi_newton ? 1.0 : std::min(last_step / cfg.backtrack_factor, 1e6 * cfg.step0);
    if (cfg.method == DescentMethod::kLbfgs && !quasi_newton) step = std::min(step, cfg.step0);
    Vec trial;
    double e_trial = 0.0;
    bool accepted = false;
    while (step >= 1e-16) {
      trial = x;
      axpy(step, dir, trial);
      e_trial = energy_only(g, spec, trial);
      if (std::isfinite(e_trial) && e_trial <= cur.total + cfg.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!accepted) {
      if (quasi_newton) {
        // Retry from steepest descent before declaring a stall.
        memory.clear();
        continue;
      }
      res.stop = StopReason::kStalled;
      break;
    }

    Evaluation next = evaluate(g, spec, trial);
    ++iter;
    if (cfg.method == DescentMethod::kLbfgs) {
      Pair p{difference(trial, x), difference(next.grad, cur.grad), 0.0};
      const double sy = dot(g, p.s, p.y);
      if (sy > 1e-14 * std::sqrt(dot(g, p.s, p.s) * dot(g, p.y, p.y))) {
        p.rho = 1.0 / sy;
        memory.push_back(std::move(p));
        while (memory.size() > static_cast<std::size_t>(cfg.lbfgs_memory)) memory.pop_front();
      }
    }
    const double step_len = step * std::sqrt(dot(g, dir, dir));
    if (!quasi_newton) last_step = step;
    x = std::move(trial);
    cur = std::move(next);

    bool regauged = false;
    if (cfg.regauge_every > 0 && iter % cfg.regauge_every == 0) {
      do_regauge();
      regauged = true;
    }
    res.trace.push_back(make_row(g, spec, iter, x, cur, step_len, regauged));
    if (iter % snapshot_every == 0) take_snapshot(iter);
    if (cur.grad_norm <= cfg.tol_grad) res.stop = StopReason::kConverged;
  }

  // The last row describes the final, regauged iterate.
  do_regauge();
  const double final_step = res.trace.back().step_len;
  res.trace.back() = make_row(g, spec, iter, x, cur, final_step, true);
  if (tail.empty() || tail.back().iter != iter) take_snapshot(iter);

  res.iterations = iter;
  res.fields = GaugedFields{std::move(x.a), std::move(x.s)};
  res.snapshots.assign(std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
  return res;
}

PalaisSmaleReport palais_smale_report(const Grid& g, const std::vector<TraceRow>& trace,
                                      const std::vector<Snapshot>& snapshots, int k) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "palais_smale_report: k must be at least 2");
  if (snapshots.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "palais_smale_report needs at least two snapshots, got " +
                                          std::to_string(snapshots.size()));
  }
  PalaisSmaleReport rep;
  const std::size_t first = snapshots.size() > static_cast<std::size_t>(k) ? snapshots.size() - static_cast<std::size_t>(k) : 0;
  rep.snapshots_used = static_cast<int>(snapshots.size() - first);
  for (std::size_t i = first; i < snapshots.size(); ++i) {
    for (std::size_t j = i + 1; j < snapshots.size(); ++j) {
      GaugeField da = snapshots[j].fields.a;
      SectionField ds = snapshots[j].fields.sigma;
      require_shape(g, da, "palais_smale_report");
      require_shape(g, snapshots[i].fields.a, "palais_smale_report");
      for (std::size_t q = 0; q < da.size(); ++q) da.values()[q] -= snapshots[i].fields.a.values()[q];
      for (std::size_t q = 0; q < ds.size(); ++q) ds.values()[q] -= snapshots[i].fields.sigma.values()[q];
      const double wa = norms(g, da).w12;
      const double ws = norms(g, ds).w12;
      rep.cauchy_tail_a = std::max(rep.cauchy_tail_a, wa);
      rep.cauchy_tail_sigma = std::max(rep.cauchy_tail_sigma, ws);
      rep.cauchy_tail = std::max(rep.cauchy_tail, std::hypot(wa, ws));
    }
  }
  rep.grad_tail = trace.empty() ? 0.0 : trace.back().grad_norm;
  return rep;
}

}  // namespace swlat
