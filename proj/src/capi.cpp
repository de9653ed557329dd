#include "swlat/swlat.h"

#include <memory>
#include <new>
#include <string>

#include "swlat/commands.hpp"
#include "swlat/gradient.hpp"
#include "swlat/io.hpp"
#include "swlat/random.hpp"
#include "swlat/ym_bridge.hpp"

struct swlat_grid {
  swlat::Grid grid;
};

struct swlat_fields {
  swlat::Grid grid;
  swlat::GaugeField a;
  swlat::SectionField sigma;
};

namespace {

thread_local std::string g_last_error;

swlat_status record(swlat_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <class F>
swlat_status guarded(F&& body) {
  try {
    body();
    return SWLAT_OK;
  } catch (const swlat::Error& e) {
    return record(static_cast<swlat_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(SWLAT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(SWLAT_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(SWLAT_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool cond, const char* what) {
  if (!cond) swlat::fail(swlat::ErrorCode::kInvalidArgument, what);
}

swlat::Objective objective_of(swlat_objective o) {
  require(o == SWLAT_OBJECTIVE_FIRST || o == SWLAT_OBJECTIVE_SECOND, "unknown objective");
  return o == SWLAT_OBJECTIVE_FIRST ? swlat::Objective::kFirst : swlat::Objective::kSecond;
}

}  // namespace

extern "C" {

const char* swlat_version(void) { return "1.0.0"; }

const char* swlat_last_error(void) { return g_last_error.c_str(); }

const char* swlat_status_name(swlat_status status) {
  switch (status) {
    case SWLAT_OK: return "ok";
    case SWLAT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SWLAT_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case SWLAT_ERR_IO: return "i/o error";
    case SWLAT_ERR_FORMAT: return "format error";
    case SWLAT_ERR_CONFIG: return "configuration error";
    case SWLAT_ERR_SOLVER: return "solver failure";
    case SWLAT_ERR_NUMERIC: return "numeric failure";
    case SWLAT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

swlat_status swlat_set_threads(int threads) {
  return guarded([&] {
    require(threads >= 1, "thread count must be at least 1");
    swlat::set_thread_count(threads);
  });
}

int swlat_get_threads(void) { return swlat::thread_count(); }

swlat_status swlat_grid_create(int n, const int* dims, double h, swlat_grid** out) {
  return guarded([&] {
    require(out != nullptr && dims != nullptr, "null argument");
    require(n >= 2 && n <= 4, "grid dimension must be 2, 3 or 4");
    *out = new swlat_grid{swlat::Grid(std::vector<int>(dims, dims + n), h)};
  });
}

void swlat_grid_destroy(swlat_grid* grid) { delete grid; }

swlat_status swlat_grid_sites(const swlat_grid* grid, size_t* sites) {
  return guarded([&] {
    require(grid != nullptr && sites != nullptr, "null argument");
    *sites = grid->grid.sites();
  });
}

swlat_status swlat_fields_create_zero(const swlat_grid* grid, swlat_fields** out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "null argument");
    const auto& g = grid->grid;
    *out = new swlat_fields{g, swlat::GaugeField(g), swlat::SectionField(g)};
  });
}

swlat_status swlat_fields_create_random(const swlat_grid* grid, uint64_t seed, double amp_a, double amp_sigma,
                                        swlat_fields** out) {
  return guarded([&] {
    require(grid != nullptr && out != nullptr, "null argument");
    require(amp_a >= 0.0 && amp_sigma >= 0.0, "amplitudes must be non-negative");
    const auto& g = grid->grid;
    swlat::Rng rng(seed);
    auto a = swlat::random_gauge(g, rng, amp_a);
    auto s = swlat::random_section(g, rng, amp_sigma);
    *out = new swlat_fields{g, std::move(a), std::move(s)};
  });
}

void swlat_fields_destroy(swlat_fields* fields) { delete fields; }

swlat_status swlat_fields_get_gauge(const swlat_fields* fields, double* buf, size_t len) {
  return guarded([&] {
    require(fields != nullptr && buf != nullptr, "null argument");
    if (len != fields->a.size()) swlat::fail(swlat::ErrorCode::kShapeMismatch, "gauge buffer length mismatch");
    std::copy(fields->a.values().begin(), fields->a.values().end(), buf);
  });
}

swlat_status swlat_fields_set_gauge(swlat_fields* fields, const double* buf, size_t len) {
  return guarded([&] {
    require(fields != nullptr && buf != nullptr, "null argument");
    if (len != fields->a.size()) swlat::fail(swlat::ErrorCode::kShapeMismatch, "gauge buffer length mismatch");
    std::copy(buf, buf + len, fields->a.values().begin());
  });
}

swlat_status swlat_fields_get_section(const swlat_fields* fields, double* buf, size_t len) {
  return guarded([&] {
    require(fields != nullptr && buf != nullptr, "null argument");
    if (len != 2 * fields->sigma.size()) swlat::fail(swlat::ErrorCode::kShapeMismatch, "section buffer length mismatch");
    for (std::size_t i = 0; i < fields->sigma.size(); ++i) {
      buf[2 * i] = fields->sigma.values()[i].real();
      buf[2 * i + 1] = fields->sigma.values()[i].imag();
    }
  });
}

swlat_status swlat_fields_set_section(swlat_fields* fields, const double* buf, size_t len) {
  return guarded([&] {
    require(fields != nullptr && buf != nullptr, "null argument");
    if (len != 2 * fields->sigma.size()) swlat::fail(swlat::ErrorCode::kShapeMismatch, "section buffer length mismatch");
    for (std::size_t i = 0; i < fields->sigma.size(); ++i) fields->sigma.values()[i] = swlat::cplx(buf[2 * i], buf[2 * i + 1]);
  });
}

swlat_status swlat_energy(const swlat_fields* fields, swlat_objective objective, double* total) {
  return guarded([&] {
    require(fields != nullptr && total != nullptr, "null argument");
    swlat::ObjectiveSpec spec;
    spec.objective = objective_of(objective);
    *total = swlat::objective_value(fields->grid, fields->a, fields->sigma, spec);
  });
}

swlat_status swlat_gradient_norm(const swlat_fields* fields, swlat_objective objective, double* norm) {
  return guarded([&] {
    require(fields != nullptr && norm != nullptr, "null argument");
    swlat::ObjectiveSpec spec;
    spec.objective = objective_of(objective);
    *norm = swlat::grad_energy(fields->grid, fields->a, fields->sigma, spec).norm;
  });
}

swlat_status swlat_weitzenbock_gap(const swlat_fields* fields, double* gap) {
  return guarded([&] {
    require(fields != nullptr && gap != nullptr, "null argument");
    *gap = swlat::weitzenbock_gap(fields->grid, fields->a, fields->sigma);
  });
}

swlat_status swlat_bridge_gap(const swlat_fields* fields, double* gap, double* h_first_noncompact) {
  return guarded([&] {
    require(fields != nullptr && gap != nullptr, "null argument");
    const auto rep = swlat::bridge_check(fields->grid, fields->a, fields->sigma);
    *gap = rep.gap;
    if (h_first_noncompact) *h_first_noncompact = rep.h_first_noncompact;
  });
}

swlat_status swlat_regauge(swlat_fields* fields, double* d_star_a_norm) {
  return guarded([&] {
    require(fields != nullptr, "null argument");
    auto rg = swlat::regauge(fields->grid, fields->a, fields->sigma);
    fields->a = std::move(rg.fields.a);
    fields->sigma = std::move(rg.fields.sigma);
    if (d_star_a_norm) *d_star_a_norm = swlat::l2_norm(fields->grid, swlat::div_oneform(fields->grid, fields->a));
  });
}

swlat_status swlat_snapshot_write(const swlat_fields* fields, const char* gauge_path, const char* section_path,
                                  uint64_t seed) {
  return guarded([&] {
    require(fields != nullptr && gauge_path != nullptr && section_path != nullptr, "null argument");
    swlat::write_snapshot(gauge_path, swlat::make_snapshot(fields->grid, fields->a, seed));
    swlat::write_snapshot(section_path, swlat::make_snapshot(fields->grid, fields->sigma, seed));
  });
}

swlat_status swlat_snapshot_read(const char* gauge_path, const char* section_path, swlat_grid** grid_out,
                                 swlat_fields** fields_out) {
  return guarded([&] {
    require(gauge_path != nullptr && section_path != nullptr && fields_out != nullptr, "null argument");
    const auto ga = swlat::read_snapshot(std::string(gauge_path));
    const swlat::Grid g = swlat::snapshot_grid(ga.meta);
    auto a = swlat::gauge_from_snapshot(g, ga);
    auto s = swlat::section_from_snapshot(g, swlat::read_snapshot(std::string(section_path)));
    auto fields = std::make_unique<swlat_fields>(swlat_fields{g, std::move(a), std::move(s)});
    if (grid_out) *grid_out = new swlat_grid{g};
    *fields_out = fields.release();
  });
}

swlat_status swlat_run_command(const char* name, const swlat_command_options* options, int* exit_code) {
  return guarded([&] {
    require(name != nullptr && exit_code != nullptr, "null argument");
    swlat::CommandOptions opts;
    if (options) {
      if (options->config_path) opts.config_path = options->config_path;
      if (options->out_dir) opts.out_dir = options->out_dir;
      if (options->has_seed) opts.seed = options->seed;
    }
    *exit_code = swlat::run_command(name, opts);
  });
}

}  // extern "C"
