#include "swlat/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "swlat/gradient.hpp"
#include "swlat/random.hpp"
#include "swlat/ym_bridge.hpp"

namespace swlat {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultCheckSeed = 20240917;

std::ostream& summary_stream(const CommandOptions& opts) { return opts.out ? *opts.out : std::cout; }

RicciSpec parse_ric(const ConfigFile& cfg, int n) {
  const std::string text = cfg.get_string("run.ric", "flat");
  if (text == "flat") return RicciSpec::flat();
  const auto values = cfg.get_double_list("run.ric", {});
  if (values.size() != static_cast<std::size_t>(n * n)) {
    fail(ErrorCode::kConfig, cfg.source() + ": key 'run.ric' needs 'flat' or " + std::to_string(n * n) +
                                 " comma-separated entries, got " + std::to_string(values.size()));
  }
  return RicciSpec::constant(n, values);
}

int to_int(long long v, const std::string& key) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(ErrorCode::kConfig, "key '" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

json settings_echo(const Settings& s) {
  json j;
  j["grid.dims"] = s.dims;
  j["grid.h"] = s.h;
  j["run.objective"] = to_string(s.run.objective.objective);
  j["run.ric"] = s.run.objective.ric.is_flat() ? json("flat") : json(s.run.objective.ric.matrix());
  j["run.max_iters"] = s.run.max_iters;
  j["run.tol_grad"] = s.run.tol_grad;
  j["run.step0"] = s.run.step0;
  j["run.armijo_c"] = s.run.armijo_c;
  j["run.backtrack"] = s.run.backtrack_factor;
  j["run.regauge_every"] = s.run.regauge_every;
  j["run.method"] = to_string(s.run.method);
  j["run.lbfgs_memory"] = s.run.lbfgs_memory;
  j["run.snapshot_every"] = s.run.snapshot_every;
  j["run.cauchy_k"] = s.run.cauchy_k;
  j["run.seed"] = s.seed;
  j["run.init"] = s.init;
  j["run.amplitude"] = s.amplitude;
  j["run.sigma_amplitude"] = s.sigma_amplitude;
  if (!s.init_gauge.empty()) j["run.init_gauge"] = s.init_gauge;
  if (!s.init_section.empty()) j["run.init_section"] = s.init_section;
  j["run.write_snapshots"] = s.write_snapshots;
  j["v.lambda0"] = s.run.objective.lambda0;
  j["v.penalty_weight"] = s.run.objective.penalty_weight;
  j["output.dir"] = s.out_dir;
  j["converge.sizes"] = s.converge_sizes;
  j["converge.dim"] = s.converge_dim;
  j["converge.length"] = s.converge_length;
  j["converge.family"] = s.converge_family;
  j["converge.amplitude_a"] = s.converge_amp_a;
  j["converge.amplitude_sigma"] = s.converge_amp_sigma;
  j["converge.min_order"] = s.converge_min_order;
  j["gradcheck.eps"] = s.gradcheck_eps;
  j["gradcheck.samples"] = s.gradcheck_samples;
  j["gradcheck.tol"] = s.gradcheck_tol;
  return j;
}

json breakdown_json(const EnergyBreakdown& e) {
  json terms;
  for (const auto& [name, value] : e.terms) terms[name] = value;
  return json{{"form", e.form == Objective::kFirst ? "first_order" : "second_order"}, {"terms", terms}, {"total", e.total}};
}

json v_json(const VReport& v) {
  return json{{"lambda0", v.lambda0},
              {"max_violation", v.max_violation},
              {"violating_site_count", v.violating_site_count},
              {"in_v", v.in_v()}};
}

json bridge_json(const BridgeReport& b) {
  return json{{"ym_energy", b.ym_energy},
              {"dstar_energy", b.dstar_energy},
              {"h_first_noncompact", b.h_first_noncompact},
              {"gap", b.gap},
              {"max_decomposition_error", b.max_decomposition_error},
              {"h_first_compact", b.h_first_compact},
              {"convention_gap", b.convention_gap},
              {"holds", b.holds()}};
}

json fd_json(const FdCheckReport& r) {
  return json{{"step", r.step},
              {"max_rel_err_a", r.max_rel_err_a},
              {"max_rel_err_sigma", r.max_rel_err_sigma},
              {"max_rel_err_direction", r.max_rel_err_direction},
              {"sampled_coordinates", r.sampled_coordinates},
              {"sampled_directions", r.sampled_directions}};
}

json suite_json(const SuiteResult& r) {
  return json{{"name", r.name}, {"passed", r.passed}, {"max_error", r.max_error}, {"tolerance", r.tolerance}, {"cases", r.cases}};
}

fs::path prepare_out_dir(const Settings& s) {
  const fs::path dir(s.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::kIo, "cannot create output directory '" + s.out_dir + "'");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) fail(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_timing(const fs::path& dir, double seconds) {
  write_json(dir / "timing.json", json{{"wall_clock_seconds", seconds}});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ConfigFile load_config(const CommandOptions& opts) {
  return opts.config_path.empty() ? ConfigFile() : ConfigFile::load(opts.config_path);
}

json gauge_diagnostics(const Grid& g, const GaugeField& a) {
  return json{{"d_star_a_norm", l2_norm(g, div_oneform(g, a))}, {"holonomy_means", holonomy_means(g, a)}};
}

json w12_json(const Grid& g, const GaugedFields& f) {
  return json{{"a", norms(g, f.a).w12}, {"sigma", norms(g, f.sigma).w12}};
}

}  // namespace

// ---- settings ------------------------------------------------------------------

Settings resolve_settings(const ConfigFile& cfg, const CommandOptions& opts, bool need_grid) {
  Settings s;
  if (need_grid) s.dims = cfg.require_int_list("grid.dims");
  else s.dims = cfg.get_int_list("grid.dims", {});
  if (cfg.has("grid.n")) {
    const auto n = cfg.get_int("grid.n", 0);
    if (n != static_cast<long long>(s.dims.size())) {
      fail(ErrorCode::kConfig, cfg.source() + ": grid.n = " + std::to_string(n) + " but grid.dims lists " +
                                   std::to_string(s.dims.size()) + " extents");
    }
  }
  s.h = cfg.get_double("grid.h", 1.0);
  const int n = s.dims.empty() ? 0 : static_cast<int>(s.dims.size());

  auto& r = s.run;
  r.objective.objective = objective_from_string(cfg.get_string("run.objective", "second"));
  if (n > 0) r.objective.ric = parse_ric(cfg, n);
  else if (cfg.has("run.ric") && cfg.get_string("run.ric", "flat") != "flat") {
    fail(ErrorCode::kConfig, cfg.source() + ": key 'run.ric' needs grid.dims to fix its size");
  }
  r.objective.lambda0 = cfg.get_double("v.lambda0", 1.0);
  r.objective.penalty_weight = cfg.get_double("v.penalty_weight", 0.0);
  r.max_iters = to_int(cfg.get_int("run.max_iters", r.max_iters), "run.max_iters");
  r.tol_grad = cfg.get_double("run.tol_grad", r.tol_grad);
  r.step0 = cfg.get_double("run.step0", r.step0);
  r.armijo_c = cfg.get_double("run.armijo_c", r.armijo_c);
  r.backtrack_factor = cfg.get_double("run.backtrack", r.backtrack_factor);
  r.regauge_every = to_int(cfg.get_int("run.regauge_every", r.regauge_every), "run.regauge_every");
  r.method = descent_method_from_string(cfg.get_string("run.method", to_string(r.method)));
  r.lbfgs_memory = to_int(cfg.get_int("run.lbfgs_memory", r.lbfgs_memory), "run.lbfgs_memory");
  r.snapshot_every = to_int(cfg.get_int("run.snapshot_every", r.snapshot_every), "run.snapshot_every");
  r.cauchy_k = to_int(cfg.get_int("run.cauchy_k", r.cauchy_k), "run.cauchy_k");
  r.validate();

  s.seed = opts.seed ? *opts.seed : cfg.get_uint("run.seed", s.seed);
  s.init = cfg.get_string("run.init", s.init);
  if (s.init != "zero" && s.init != "random" && s.init != "file") {
    fail(ErrorCode::kConfig, cfg.source() + ": key 'run.init' expects zero, random or file, got '" + s.init + "'");
  }
  s.amplitude = cfg.get_double("run.amplitude", s.amplitude);
  s.sigma_amplitude = cfg.get_double("run.sigma_amplitude", s.amplitude);
  if (s.amplitude < 0.0 || s.sigma_amplitude < 0.0) fail(ErrorCode::kConfig, cfg.source() + ": amplitudes must be non-negative");
  s.init_gauge = cfg.get_string("run.init_gauge", "");
  s.init_section = cfg.get_string("run.init_section", "");
  if (s.init == "file" && s.init_gauge.empty()) {
    fail(ErrorCode::kConfig, cfg.source() + ": run.init = file needs key 'run.init_gauge'");
  }
  s.write_snapshots = cfg.get_bool("run.write_snapshots", s.write_snapshots);
  s.out_dir = !opts.out_dir.empty() ? opts.out_dir : cfg.get_string("output.dir", s.out_dir);

  s.converge_sizes = cfg.get_int_list("converge.sizes", s.converge_sizes);
  s.converge_dim = to_int(cfg.get_int("converge.dim", s.converge_dim), "converge.dim");
  s.converge_length = cfg.get_double("converge.length", s.converge_length);
  s.converge_family = cfg.get_string("converge.family", s.converge_family);
  s.converge_amp_a = cfg.get_double("converge.amplitude_a", s.converge_amp_a);
  s.converge_amp_sigma = cfg.get_double("converge.amplitude_sigma", s.converge_amp_sigma);
  s.converge_min_order = cfg.get_double("converge.min_order", s.converge_min_order);

  s.gradcheck_eps = cfg.get_double("gradcheck.eps", s.gradcheck_eps);
  s.gradcheck_samples = to_int(cfg.get_int("gradcheck.samples", s.gradcheck_samples), "gradcheck.samples");
  s.gradcheck_tol = cfg.get_double("gradcheck.tol", s.gradcheck_tol);
  return s;
}

GaugedFields initial_fields(const Grid& g, const Settings& s) {
  if (s.init == "zero") return {GaugeField(g), SectionField(g)};
  if (s.init == "random") {
    Rng rng(s.seed);
    auto a = random_gauge(g, rng, s.amplitude);
    auto sigma = random_section(g, rng, s.sigma_amplitude);
    return {std::move(a), std::move(sigma)};
  }
  GaugedFields f{gauge_from_snapshot(g, read_snapshot(s.init_gauge)), SectionField(g)};
  if (!s.init_section.empty()) f.sigma = section_from_snapshot(g, read_snapshot(s.init_section));
  if (!all_finite(f.a) || !all_finite(f.sigma)) fail(ErrorCode::kNumeric, "initial snapshot contains NaN or Inf");
  return f;
}

// ---- commands --------------------------------------------------------------------

int cmd_check(const CommandOptions& opts, const CheckFaults& faults) {
  const ConfigFile cfg = load_config(opts);
  const std::uint64_t seed = opts.seed ? *opts.seed : cfg.get_uint("run.seed", kDefaultCheckSeed);
  CheckFaults active = faults;
  const std::string fault = cfg.get_string("check.inject_fault", "none");
  if (fault == "flip_tau_sign") {
    active.flip_tau_sign = true;
  } else if (fault != "none") {
    fail(ErrorCode::kConfig, cfg.source() + ": key 'check.inject_fault' must be none or flip_tau_sign, got '" +
                                 fault + "'");
  }
  const auto results = run_check_suites(seed, active);

  json summary;
  summary["command"] = "check";
  summary["seed"] = seed;
  bool ok = true;
  json first_failure = nullptr;
  json suites = json::array();
  for (const auto& r : results) {
    suites.push_back(suite_json(r));
    if (!r.passed && ok) first_failure = r.name;
    ok = ok && r.passed;
  }
  summary["status"] = ok ? "pass" : "fail";
  summary["first_failure"] = first_failure;
  summary["suites"] = suites;
  summary_stream(opts) << summary.dump() << "\n";

  const std::string out = !opts.out_dir.empty() ? opts.out_dir : cfg.get_string("output.dir", "");
  if (!out.empty()) {
    Settings s;
    s.out_dir = out;
    write_json(prepare_out_dir(s) / "check.json", summary);
  }
  return ok ? 0 : 2;
}

int cmd_minimize(const CommandOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigFile cfg = load_config(opts);
  const Settings s = resolve_settings(cfg, opts, true);
  const Grid g(s.dims, s.h);
  const auto init = initial_fields(g, s);
  const fs::path dir = prepare_out_dir(s);

  const auto res = minimize(g, s.run, init.a, init.sigma);
  write_trace_csv((dir / "trace.csv").string(), s.run.objective.objective, res.trace);

  auto tag = [&](SnapshotData d, int iter) {
    d.meta.info["command"] = "minimize";
    d.meta.info["iter"] = std::to_string(iter);
    return d;
  };
  write_snapshot((dir / "final_gauge.snap").string(), tag(make_snapshot(g, res.fields.a, s.seed), res.iterations));
  write_snapshot((dir / "final_section.snap").string(), tag(make_snapshot(g, res.fields.sigma, s.seed), res.iterations));
  json snap_files = json::array();
  if (s.write_snapshots) {
    const fs::path snap_dir = dir / "snapshots";
    fs::create_directories(snap_dir);
    for (const auto& sn : res.snapshots) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "iter_%07d", sn.iter);
      const std::string base = (snap_dir / stem).string();
      write_snapshot(base + "_gauge.snap", tag(make_snapshot(g, sn.fields.a, s.seed), sn.iter));
      write_snapshot(base + "_section.snap", tag(make_snapshot(g, sn.fields.sigma, s.seed), sn.iter));
      write_snapshot(base + "_transform.snap", tag(make_snapshot(g, sn.transform, s.seed), sn.iter));
      snap_files.push_back(std::string("snapshots/") + stem);
    }
  }

  const auto& f = res.fields;
  const ObjectiveSpec& spec = s.run.objective;
  const auto grad = grad_energy(g, f.a, f.sigma, spec);
  json report;
  report["command"] = "minimize";
  report["config"] = settings_echo(s);
  report["result"] = json{{"stop_reason", to_string(res.stop)},
                          {"converged", res.converged()},
                          {"iterations", res.iterations},
                          {"trace_file", "trace.csv"},
                          {"snapshots", snap_files}};
  report["energy"] = json{{"initial_objective", res.trace.front().energy_total},
                          {"objective", objective_value(g, f.a, f.sigma, spec)},
                          {"first_order", breakdown_json(energy_first(g, f.a, f.sigma))},
                          {"second_order", breakdown_json(energy_second(g, f.a, f.sigma, spec.ric))},
                          {"penalty", penalty_energy(g, f.sigma, spec.lambda0, spec.penalty_weight)}};
  report["gradient"] = json{{"norm", grad.norm},
                            {"definition", "joint lattice l2 norm of (g_a, g_sigma), gradients in the h^n-weighted dual pairing"},
                            {"fd_check", fd_json(fd_check(g, f.a, f.sigma, spec, 1e-5, 16, s.seed))}};
  report["v"] = v_json(v_membership(g, f.sigma, spec.lambda0));
  report["bridge"] = bridge_json(bridge_check(g, f.a, f.sigma));
  json gauge = gauge_diagnostics(g, f.a);
  gauge["max_regauge_drift"] = res.max_regauge_drift;
  report["gauge"] = gauge;
  report["w12"] = w12_json(g, f);
  const auto el = el_residual_continuum(g, f.a, f.sigma, spec.ric);
  report["el_residual"] = json{{"l2_a", el.l2_a}, {"l2_sigma", el.l2_sigma}};
  report["bochner_l2"] = bochner_residual(g, f.a, f.sigma, spec.ric).l2;
  if (res.snapshots.size() >= 2) {
    const auto ps = palais_smale_report(g, res.trace, res.snapshots, s.run.cauchy_k);
    report["palais_smale"] = json{{"cauchy_tail", ps.cauchy_tail},
                                  {"cauchy_tail_a", ps.cauchy_tail_a},
                                  {"cauchy_tail_sigma", ps.cauchy_tail_sigma},
                                  {"grad_tail", ps.grad_tail},
                                  {"snapshots_used", ps.snapshots_used}};
  } else {
    report["palais_smale"] = json{{"grad_tail", res.trace.back().grad_norm}, {"note", "fewer than two snapshots"}};
  }
  write_json(dir / "report.json", report);
  write_timing(dir, seconds_since(t0));

  summary_stream(opts) << json{{"command", "minimize"},
                               {"status", to_string(res.stop)},
                               {"iterations", res.iterations},
                               {"energy", res.trace.back().energy_total},
                               {"grad_norm", res.trace.back().grad_norm},
                               {"out", s.out_dir}}
                              .dump()
                       << "\n";
  return res.converged() ? 0 : 2;
}

int cmd_converge(const CommandOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigFile cfg = load_config(opts);
  const Settings s = resolve_settings(cfg, opts, false);
  if (s.converge_sizes.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "converge needs at least two grid sizes in converge.sizes");
  }
  const auto table = converge_study(s.converge_sizes, s.converge_dim, s.converge_length, s.converge_family,
                                    s.converge_amp_a, s.converge_amp_sigma, s.converge_min_order);
  const fs::path dir = prepare_out_dir(s);

  std::ostringstream csv;
  csv << "n_sites,h,weitzenbock_gap,coupling_identity_gap,convention_gap,bochner_l2\n";
  for (const auto& r : table.rows) {
    csv << r.n_sites << ',' << format_double(r.h) << ',' << format_double(r.weitzenbock_gap) << ','
        << format_double(r.coupling_identity_gap) << ',' << format_double(r.convention_gap) << ','
        << format_double(r.bochner_l2) << '\n';
  }
  csv << "order,";
  for (const auto& f : table.fits) csv << ',' << (f.exact ? std::string("exact") : format_double(f.order));
  csv << '\n';
  write_text(dir / "converge.csv", csv.str());

  json fits = json::array();
  for (const auto& f : table.fits) {
    fits.push_back(json{{"column", f.column},
                        {"order", f.exact ? json("exact") : json(f.order)},
                        {"passed", f.passed}});
  }
  json report;
  report["command"] = "converge";
  report["config"] = settings_echo(s);
  report["table_file"] = "converge.csv";
  report["fits"] = fits;
  report["passed"] = table.passed();
  write_json(dir / "report.json", report);
  write_timing(dir, seconds_since(t0));
  summary_stream(opts) << json{{"command", "converge"}, {"status", table.passed() ? "pass" : "fail"}, {"fits", fits}}.dump()
                       << "\n";
  return table.passed() ? 0 : 2;
}

int cmd_gradcheck(const CommandOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigFile cfg = load_config(opts);
  const Settings s = resolve_settings(cfg, opts, true);
  const Grid g(s.dims, s.h);
  const auto f = initial_fields(g, s);
  const ObjectiveSpec& spec = s.run.objective;

  const auto rep = fd_check(g, f.a, f.sigma, spec, s.gradcheck_eps, s.gradcheck_samples, s.seed);
  json sweep = json::array();
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    sweep.push_back(fd_json(fd_check(g, f.a, f.sigma, spec, eps, s.gradcheck_samples, s.seed)));
  }
  const bool ok = rep.max_rel_err() <= s.gradcheck_tol;
  const fs::path dir = prepare_out_dir(s);
  json report;
  report["command"] = "gradcheck";
  report["config"] = settings_echo(s);
  report["fd_check"] = fd_json(rep);
  report["eps_sweep"] = sweep;
  report["gradient_norm"] = grad_energy(g, f.a, f.sigma, spec).norm;
  report["passed"] = ok;
  write_json(dir / "report.json", report);
  write_timing(dir, seconds_since(t0));
  summary_stream(opts) << json{{"command", "gradcheck"}, {"status", ok ? "pass" : "fail"}, {"max_rel_err", rep.max_rel_err()}}.dump()
                       << "\n";
  return ok ? 0 : 2;
}

int cmd_gaugefix(const CommandOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigFile cfg = load_config(opts);
  const Settings s = resolve_settings(cfg, opts, true);
  const Grid g(s.dims, s.h);
  const auto f = initial_fields(g, s);

  PoissonStats stats;
  const auto fixed = coulomb_fix(g, f.a);
  stats = fixed.stats;
  const auto rg = regauge(g, f.a, f.sigma);
  const auto hodge = hodge_split(g, f.a);
  const auto coer = coercivity_check(g, f.a);

  // Reassembly and orthogonality of the Hodge parts.
  const auto exact = grad_scalar(g, hodge.exact_potential);
  GaugeField harmonic(g);
  double reassembly = 0.0;
  for (std::size_t x = 0; x < g.sites(); ++x) {
    for (int mu = 0; mu < g.dim(); ++mu) {
      harmonic(x, mu) = hodge.harmonic[static_cast<std::size_t>(mu)];
      reassembly = std::max(reassembly, std::abs(exact(x, mu) + harmonic(x, mu) + hodge.coexact_remainder(x, mu) - f.a(x, mu)));
    }
  }
  const double d_star_after = l2_norm(g, div_oneform(g, rg.fields.a));
  const auto means = holonomy_means(g, rg.fields.a);
  bool in_domain = true;
  for (int mu = 0; mu < g.dim(); ++mu) {
    const double half = std::numbers::pi / g.length(mu);
    in_domain = in_domain && means[static_cast<std::size_t>(mu)] >= -half && means[static_cast<std::size_t>(mu)] < half;
  }
  const bool ok = d_star_after <= 1e-10 && in_domain && coer.holds();

  const fs::path dir = prepare_out_dir(s);
  write_snapshot((dir / "fixed_gauge.snap").string(), make_snapshot(g, rg.fields.a, s.seed));
  write_snapshot((dir / "fixed_section.snap").string(), make_snapshot(g, rg.fields.sigma, s.seed));
  write_snapshot((dir / "transform.snap").string(), make_snapshot(g, rg.transform, s.seed));

  json report;
  report["command"] = "gaugefix";
  report["config"] = settings_echo(s);
  report["poisson"] = json{{"method", stats.method == PoissonMethod::kFft ? "fft" : "cg"},
                           {"iterations", stats.iterations},
                           {"relative_residual", stats.relative_residual}};
  report["before"] = gauge_diagnostics(g, f.a);
  report["after"] = gauge_diagnostics(g, rg.fields.a);
  report["winding"] = rg.transform.winding;
  report["holonomy_in_domain"] = in_domain;
  report["hodge"] = json{{"harmonic", hodge.harmonic},
                         {"exact_l2", l2_norm(g, exact)},
                         {"harmonic_l2", l2_norm(g, harmonic)},
                         {"coexact_l2", l2_norm(g, hodge.coexact_remainder)},
                         {"reassembly_max_error", reassembly},
                         {"inner_exact_harmonic", inner(g, exact, harmonic)},
                         {"inner_exact_coexact", inner(g, exact, hodge.coexact_remainder)},
                         {"inner_harmonic_coexact", inner(g, harmonic, hodge.coexact_remainder)}};
  report["coercivity"] = json{{"lhs", coer.lhs},
                              {"rhs_bound", coer.rhs_bound},
                              {"constant_estimate", coer.constant_estimate},
                              {"curvature_l2", coer.curvature_l2},
                              {"holds", coer.holds()}};
  report["energy_drift"] = json{
      {"first", std::abs(energy_first(g, rg.fields.a, rg.fields.sigma).total - energy_first(g, f.a, f.sigma).total)},
      {"second", std::abs(energy_second(g, rg.fields.a, rg.fields.sigma, s.run.objective.ric).total -
                          energy_second(g, f.a, f.sigma, s.run.objective.ric).total)}};
  report["passed"] = ok;
  write_json(dir / "report.json", report);
  write_timing(dir, seconds_since(t0));
  summary_stream(opts) << json{{"command", "gaugefix"}, {"status", ok ? "pass" : "fail"}, {"d_star_a_norm", d_star_after}}.dump()
                       << "\n";
  return ok ? 0 : 2;
}

int cmd_bridge(const CommandOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigFile cfg = load_config(opts);
  const Settings s = resolve_settings(cfg, opts, true);
  const Grid g(s.dims, s.h);
  const auto f = initial_fields(g, s);
  const auto rep = bridge_check(g, f.a, f.sigma);
  const fs::path dir = prepare_out_dir(s);
  json report;
  report["command"] = "bridge";
  report["config"] = settings_echo(s);
  report["bridge"] = bridge_json(rep);
  write_json(dir / "report.json", report);
  write_timing(dir, seconds_since(t0));
  summary_stream(opts) << json{{"command", "bridge"}, {"status", rep.holds() ? "pass" : "fail"}, {"gap", rep.gap}}.dump() << "\n";
  return rep.holds() ? 0 : 2;
}

int run_command(const std::string& name, const CommandOptions& opts) {
  if (name == "check") return cmd_check(opts);
  if (name == "minimize") return cmd_minimize(opts);
  if (name == "converge") return cmd_converge(opts);
  if (name == "gradcheck") return cmd_gradcheck(opts);
  if (name == "gaugefix") return cmd_gaugefix(opts);
  if (name == "bridge") return cmd_bridge(opts);
  fail(ErrorCode::kInvalidArgument, "unknown command '" + name + "'");
}

}  // namespace swlat
