/* pexfem — contrast-independent partially explicit multiscale FEM engine.
 *
 * C interface to the solver library: opaque handles, integer status codes,
 * and a thread-local error message. All heavy objects live behind handles;
 * results are written as CSV/SVG files into the configured output directory
 * and surfaced as named scalars through pexfem_report.
 */
#ifndef PEXFEM_H
#define PEXFEM_H

#include <stddef.h>

#if defined(_WIN32)
#define PEXFEM_API __declspec(dllexport)
#else
#define PEXFEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pexfem_config pexfem_config;
typedef struct pexfem_report pexfem_report;

typedef enum pexfem_status {
  PEXFEM_OK = 0,
  PEXFEM_ERR_CONFIG = 2,  /* bad keys, values, file formats, sizes */
  PEXFEM_ERR_NUMERIC = 3, /* solver failure, rank deficiency, blow-up */
  PEXFEM_ERR_IO = 4,      /* filesystem failure */
  PEXFEM_ERR_ARGUMENT = 5 /* null handle or bad call */
} pexfem_status;

PEXFEM_API const char* pexfem_version(void);

/* Message for the most recent failing call on this thread. */
PEXFEM_API const char* pexfem_last_error(void);

/* Configuration: defaults, then optionally a flat key-value file, then
 * individual overrides. Unknown keys are errors. */
PEXFEM_API pexfem_status pexfem_config_create(pexfem_config** out);
PEXFEM_API pexfem_status pexfem_config_load(pexfem_config* cfg,
                                            const char* path);
PEXFEM_API pexfem_status pexfem_config_set(pexfem_config* cfg, const char* key,
                                           const char* value);
PEXFEM_API void pexfem_config_destroy(pexfem_config* cfg);

/* Verbs. Each validates the config, runs, writes files under output_dir and,
 * where a report handle is requested, returns named scalars. */
PEXFEM_API pexfem_status pexfem_assemble_check(const pexfem_config* cfg);
PEXFEM_API pexfem_status pexfem_build_spaces(const pexfem_config* cfg,
                                             pexfem_report** out);
PEXFEM_API pexfem_status pexfem_run_example(const pexfem_config* cfg,
                                            pexfem_report** out);
PEXFEM_API pexfem_status pexfem_sweep(const pexfem_config* cfg,
                                      pexfem_report** out);
PEXFEM_API pexfem_status pexfem_elliptic(const pexfem_config* cfg,
                                         pexfem_report** out);

/* Renders an error-series or trajectory CSV as a log-scale SVG chart. */
PEXFEM_API pexfem_status pexfem_plot(const char* csv_path,
                                     const char* svg_path);

/* Report access: ordered (key, value) pairs. */
PEXFEM_API size_t pexfem_report_size(const pexfem_report* rep);
PEXFEM_API pexfem_status pexfem_report_key(const pexfem_report* rep,
                                           size_t index, char* buffer,
                                           size_t buffer_size);
PEXFEM_API pexfem_status pexfem_report_get(const pexfem_report* rep,
                                           const char* key, double* out);
PEXFEM_API void pexfem_report_destroy(pexfem_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* PEXFEM_H */
