#ifndef SWLAT_SWLAT_H
#define SWLAT_SWLAT_H

/* C interface of the swlat shared library.
 *
 * Every function returns a swlat_status. On failure the message of the most
 * recent error on the calling thread is available from swlat_last_error().
 * Handles are opaque and owned by the caller; destroy functions accept NULL. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SWLAT_API __declspec(dllexport)
#else
#define SWLAT_API __attribute__((visibility("default")))
#endif

typedef enum swlat_status {
  SWLAT_OK = 0,
  SWLAT_ERR_INVALID_ARGUMENT = 1,
  SWLAT_ERR_SHAPE_MISMATCH = 2,
  SWLAT_ERR_IO = 3,
  SWLAT_ERR_FORMAT = 4,
  SWLAT_ERR_CONFIG = 5,
  SWLAT_ERR_SOLVER = 6,
  SWLAT_ERR_NUMERIC = 7,
  SWLAT_ERR_INTERNAL = 8
} swlat_status;

typedef enum swlat_objective { SWLAT_OBJECTIVE_FIRST = 0, SWLAT_OBJECTIVE_SECOND = 1 } swlat_objective;

typedef struct swlat_grid swlat_grid;
/* A connection coefficient a together with a section sigma on one grid. */
typedef struct swlat_fields swlat_fields;

SWLAT_API const char* swlat_version(void);
SWLAT_API const char* swlat_last_error(void);
SWLAT_API const char* swlat_status_name(swlat_status status);

/* Worker threads for site loops; results do not depend on it. */
SWLAT_API swlat_status swlat_set_threads(int threads);
SWLAT_API int swlat_get_threads(void);

SWLAT_API swlat_status swlat_grid_create(int n, const int* dims, double h, swlat_grid** out);
SWLAT_API void swlat_grid_destroy(swlat_grid* grid);
SWLAT_API swlat_status swlat_grid_sites(const swlat_grid* grid, size_t* sites);

SWLAT_API swlat_status swlat_fields_create_zero(const swlat_grid* grid, swlat_fields** out);
/* i.i.d. uniform in [-amp, amp] per real degree of freedom. */
SWLAT_API swlat_status swlat_fields_create_random(const swlat_grid* grid, uint64_t seed, double amp_a,
                                                  double amp_sigma, swlat_fields** out);
SWLAT_API void swlat_fields_destroy(swlat_fields* fields);

/* a has sites * n doubles; sigma has sites * n complex values stored as
 * (re, im) pairs, i.e. 2 * sites * n doubles. */
SWLAT_API swlat_status swlat_fields_get_gauge(const swlat_fields* fields, double* buf, size_t len);
SWLAT_API swlat_status swlat_fields_set_gauge(swlat_fields* fields, const double* buf, size_t len);
SWLAT_API swlat_status swlat_fields_get_section(const swlat_fields* fields, double* buf, size_t len);
SWLAT_API swlat_status swlat_fields_set_section(swlat_fields* fields, const double* buf, size_t len);

/* Energy of the chosen form with flat Ricci term. */
SWLAT_API swlat_status swlat_energy(const swlat_fields* fields, swlat_objective objective, double* total);
SWLAT_API swlat_status swlat_gradient_norm(const swlat_fields* fields, swlat_objective objective, double* norm);
SWLAT_API swlat_status swlat_weitzenbock_gap(const swlat_fields* fields, double* gap);
SWLAT_API swlat_status swlat_bridge_gap(const swlat_fields* fields, double* gap, double* h_first_noncompact);
/* Replaces the fields by their Coulomb, reduced-holonomy representative. */
SWLAT_API swlat_status swlat_regauge(swlat_fields* fields, double* d_star_a_norm);

SWLAT_API swlat_status swlat_snapshot_write(const swlat_fields* fields, const char* gauge_path,
                                            const char* section_path, uint64_t seed);
SWLAT_API swlat_status swlat_snapshot_read(const char* gauge_path, const char* section_path,
                                           swlat_grid** grid_out, swlat_fields** fields_out);

typedef struct swlat_command_options {
  const char* config_path; /* may be NULL */
  const char* out_dir;     /* may be NULL: output.dir from the config applies */
  int has_seed;
  uint64_t seed;
} swlat_command_options;

/* Runs check, minimize, converge, gradcheck, gaugefix or bridge. On SWLAT_OK
 * exit_code is 0 (success) or 2 (criterion not met); any error status
 * corresponds to exit code 1. */
SWLAT_API swlat_status swlat_run_command(const char* name, const swlat_command_options* options, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
