/* SPDX-License-Identifier: Apache-2.0 */

/* sfsim: stochastic fluid-structure interaction simulator.
 *
 * C interface to the simulation core. The model is a 2D time-dependent
 * Stokes flow on a rectangle, coupled along the top edge to a 1D wave
 * equation membrane driven by scalar white noise, advanced by a
 * three-stage operator splitting (membrane update, noise kick, fluid
 * solve) and instrumented with exact discrete energy balances.
 *
 * All entry points return sfsim_status; every non-OK return leaves a
 * human-readable message retrievable with sfsim_last_error() (thread
 * local). Handles are opaque and must be released with the matching
 * *_free function. The library is thread safe as long as each handle is
 * used from one thread at a time; distinct handles are independent.
 */

#ifndef SFSIM_H
#define SFSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfsim_status {
  SFSIM_OK = 0,
  SFSIM_ERR_INVALID_ARG = 1, /* null pointer, bad index, bad handle      */
  SFSIM_ERR_CONFIG = 2,      /* config file/JSON rejected by validation  */
  SFSIM_ERR_RUNTIME = 3,     /* solver or contract failure during a run  */
  SFSIM_ERR_IO = 4           /* file could not be read or written        */
} sfsim_status;

/* Opaque run configuration (domain, discretization, ensemble, outputs). */
typedef struct sfsim_config sfsim_config;

/* Opaque result of run/verify/converge: a JSON document plus the CSV
 * tables that sfsim_report_write lays down next to it. */
typedef struct sfsim_report sfsim_report;

/* Library version string, static storage. */
const char* sfsim_version(void);

/* Message for the most recent failure on this thread, static storage
 * valid until the next failing call. Never NULL. */
const char* sfsim_last_error(void);

/* Configuration ---------------------------------------------------- */

/* Creates a config holding the documented defaults. */
sfsim_status sfsim_config_create(sfsim_config** out);

/* Parses a JSON config file. Unknown keys are rejected. */
sfsim_status sfsim_config_load_file(const char* path, sfsim_config** out);

/* Same, from an in-memory JSON string. */
sfsim_status sfsim_config_load_json(const char* json_text, sfsim_config** out);

/* Overrides one scalar field by name ("seed", "N", "n_paths", "threads",
 * "out_dir", ...). The value is parsed with the same validation as the
 * config file. */
sfsim_status sfsim_config_set(sfsim_config* cfg, const char* key,
                              const char* value);

/* Serializes the validated config back to canonical JSON. The returned
 * string lives until the config is freed or re-serialized. */
sfsim_status sfsim_config_json(sfsim_config* cfg, const char** out_json);

void sfsim_config_free(sfsim_config* cfg);

/* Execution --------------------------------------------------------- */

/* Runs the Monte Carlo ensemble described by the config. */
sfsim_status sfsim_run(const sfsim_config* cfg, sfsim_report** out);

/* Runs the verification suite (energy identities, operator checks,
 * noise statistics, reproducibility). The report carries one named
 * check per row; sfsim_report_passed tells whether all passed. */
sfsim_status sfsim_verify(const sfsim_config* cfg, sfsim_report** out);

/* Runs the coupled time-refinement convergence study. */
sfsim_status sfsim_converge(const sfsim_config* cfg, sfsim_report** out);

/* Writes a single Brownian path table (columns n,t,W) for the config's
 * seed and step count to `path` as CSV. */
sfsim_status sfsim_path_dump(const sfsim_config* cfg, const char* path);

/* Reports ------------------------------------------------------------ */

/* Full report as JSON. String owned by the report. */
sfsim_status sfsim_report_json(const sfsim_report* rep, const char** out_json);

/* 1 if every contained check passed (or the report has no checks),
 * else 0. */
int sfsim_report_passed(const sfsim_report* rep);

int sfsim_report_check_count(const sfsim_report* rep);

/* Borrowing accessors for one check row; any out pointer may be NULL. */
sfsim_status sfsim_report_check(const sfsim_report* rep, int index,
                                const char** name, int* passed,
                                const char** detail);

/* Writes report.json plus whichever CSV tables the report carries
 * (ledger.csv, convergence.csv) into the directory, creating it if
 * needed. */
sfsim_status sfsim_report_write(const sfsim_report* rep, const char* dir);

void sfsim_report_free(sfsim_report* rep);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SFSIM_H */
