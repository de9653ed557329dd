/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "swlat/swlat.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  const int dims[3] = {4, 4, 4};
  swlat_grid* grid = NULL;
  swlat_fields* fields = NULL;
  size_t sites = 0;
  double e = -1.0, norm = -1.0, gap = -1.0, h1 = 0.0, dstar = 1.0;
  double* buf;
  size_t n;

  EXPECT(strlen(swlat_version()) > 0);
  EXPECT(swlat_grid_create(3, dims, 0.5, &grid) == SWLAT_OK);
  EXPECT(swlat_grid_sites(grid, &sites) == SWLAT_OK && sites == 64);

  EXPECT(swlat_fields_create_zero(grid, &fields) == SWLAT_OK);
  EXPECT(swlat_energy(fields, SWLAT_OBJECTIVE_SECOND, &e) == SWLAT_OK && e == 0.0);
  swlat_fields_destroy(fields);

  EXPECT(swlat_fields_create_random(grid, 7, 0.5, 0.5, &fields) == SWLAT_OK);
  EXPECT(swlat_energy(fields, SWLAT_OBJECTIVE_FIRST, &e) == SWLAT_OK && e > 0.0);
  EXPECT(swlat_gradient_norm(fields, SWLAT_OBJECTIVE_FIRST, &norm) == SWLAT_OK && norm > 0.0);
  EXPECT(swlat_weitzenbock_gap(fields, &gap) == SWLAT_OK && gap >= 0.0);
  EXPECT(swlat_bridge_gap(fields, &gap, &h1) == SWLAT_OK && gap <= 1e-12 * (1.0 + h1));

  n = 2 * sites * 3;
  buf = (double*)malloc(n * sizeof(double));
  EXPECT(swlat_fields_get_section(fields, buf, n) == SWLAT_OK);
  buf[0] += 1.0;
  EXPECT(swlat_fields_set_section(fields, buf, n) == SWLAT_OK);
  EXPECT(swlat_fields_get_section(fields, buf, n - 1) == SWLAT_ERR_SHAPE_MISMATCH);
  EXPECT(strstr(swlat_last_error(), "length") != NULL);
  EXPECT(swlat_fields_get_gauge(fields, buf, sites * 3) == SWLAT_OK);
  free(buf);

  EXPECT(swlat_energy(fields, SWLAT_OBJECTIVE_SECOND, &e) == SWLAT_OK);
  EXPECT(swlat_regauge(fields, &dstar) == SWLAT_OK && dstar <= 1e-10);
  {
    double e2 = 0.0;
    EXPECT(swlat_energy(fields, SWLAT_OBJECTIVE_SECOND, &e2) == SWLAT_OK);
    EXPECT(fabs(e2 - e) <= 1e-12 * (1.0 + e));
  }

  EXPECT(swlat_set_threads(0) == SWLAT_ERR_INVALID_ARGUMENT);
  EXPECT(swlat_set_threads(2) == SWLAT_OK && swlat_get_threads() == 2);
  EXPECT(swlat_set_threads(1) == SWLAT_OK);

  {
    const int bad[3] = {2, 4, 4};
    swlat_grid* g2 = NULL;
    EXPECT(swlat_grid_create(3, bad, 1.0, &g2) == SWLAT_ERR_INVALID_ARGUMENT);
    EXPECT(g2 == NULL);
  }

  {
    swlat_command_options opts;
    int code = -1;
    memset(&opts, 0, sizeof opts);
    opts.config_path = "/nonexistent/swlat.cfg";
    EXPECT(swlat_run_command("minimize", &opts, &code) == SWLAT_ERR_IO);
    EXPECT(swlat_run_command("frobnicate", &opts, &code) == SWLAT_ERR_INVALID_ARGUMENT);
    EXPECT(strcmp(swlat_status_name(SWLAT_ERR_CONFIG), "configuration error") == 0);
  }

  swlat_fields_destroy(fields);
  swlat_grid_destroy(grid);
  swlat_fields_destroy(NULL);
  swlat_grid_destroy(NULL);

  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi ok\n");
  return 0;
}
