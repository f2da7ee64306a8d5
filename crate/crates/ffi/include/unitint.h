#ifndef UNITINT_H
#define UNITINT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define UNITINT_OK 0

/**
 * The operation ran but reported a failure (failing verification checks,
 * or a run whose oracle deviation exceeds the flag threshold).
 */
#define UNITINT_ERR_FAILURE 1

/**
 * Invalid configuration or arguments (null pointers, bad UTF-8, unknown
 * preset names, malformed config files).
 */
#define UNITINT_ERR_CONFIG 2

/**
 * Numerical or I/O failure while running.
 */
#define UNITINT_ERR_RUNTIME 3

/**
 * An internal invariant was violated (a bug; the message has details).
 */
#define UNITINT_ERR_PANIC 4

/**
 * Opaque finished-run handle owning all result buffers.
 */
typedef struct UnitintRun UnitintRun;

/**
 * Opaque scenario configuration handle.
 */
typedef struct UnitintScenario UnitintScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent failure message for the calling thread (never null; empty
 * before the first failure).  Valid until the next failing call here.
 */
const char *unitint_last_error_message(void);

/**
 * New scenario with the default configuration.  Never fails.
 */
struct UnitintScenario *unitint_scenario_new(void);

/**
 * New scenario from a named preset (`fig1-3`, `fig4-6`, `fig7-9`).
 * Returns null on an unknown name.
 *
 * # Safety
 * `name` must be null or a valid NUL-terminated string.
 */
struct UnitintScenario *unitint_scenario_preset(const char *name);

/**
 * New scenario parsed and validated from a TOML file.  Returns null on
 * parse or validation errors.
 *
 * # Safety
 * `path` must be null or a valid NUL-terminated string.
 */
struct UnitintScenario *unitint_scenario_from_file(const char *path);

/**
 * Set the uniform damping rate (1/ns); must be finite and nonnegative.
 *
 * # Safety
 * `scenario` must be a live handle from a scenario constructor.
 */
int32_t unitint_scenario_set_gamma(struct UnitintScenario *scenario, double value);

/**
 * Set the phase offset (radians) of the first junction drive.
 *
 * # Safety
 * `scenario` must be a live handle from a scenario constructor.
 */
int32_t unitint_scenario_set_delta(struct UnitintScenario *scenario, double value);

/**
 * Set the adaptive solver tolerance; must be positive.
 *
 * # Safety
 * `scenario` must be a live handle from a scenario constructor.
 */
int32_t unitint_scenario_set_solver_tol(struct UnitintScenario *scenario, double value);

/**
 * Release a scenario handle; a null pointer is ignored.
 *
 * # Safety
 * `scenario` must be null or a live handle not freed before.
 */
void unitint_scenario_free(struct UnitintScenario *scenario);

/**
 * Run a scenario: integrate the evolution, cross-check it against the
 * brute-force propagator, and evolve the observables.  On success stores
 * a new run handle in `*out` and returns zero; `UNITINT_ERR_FAILURE`
 * means the run finished but its oracle deviation exceeded the accuracy
 * flag (the handle is still stored for inspection).
 *
 * # Safety
 * `scenario` must be a live scenario handle; `out` must point to
 * writable storage for one pointer.
 */
int32_t unitint_scenario_run(const struct UnitintScenario *scenario, struct UnitintRun **out);

/**
 * Sample positions in modulation cycles (length `unitint_run_len`).
 * Returns null if `run` is null.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
const double *unitint_run_x(const struct UnitintRun *run);

/**
 * Density-matrix diagonals, row-major `len x 4`.  Returns null if `run`
 * is null.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
const double *unitint_run_diagonals(const struct UnitintRun *run);

/**
 * Real parts of the six upper off-diagonal entries, row-major `len x 6`,
 * pair order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).  Returns null if `run`
 * is null.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
const double *unitint_run_offdiag_re(const struct UnitintRun *run);

/**
 * Imaginary parts matching `unitint_run_offdiag_re`.  Returns null if
 * `run` is null.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
const double *unitint_run_offdiag_im(const struct UnitintRun *run);

/**
 * Von Neumann entropy at each sample (length `unitint_run_len`).
 * Returns null if `run` is null.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
const double *unitint_run_entropy(const struct UnitintRun *run);

/**
 * Number of samples in a run (zero if `run` is null).
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
uintptr_t unitint_run_len(const struct UnitintRun *run);

/**
 * Largest Frobenius deviation from the brute-force propagator (NaN if
 * `run` is null).
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
double unitint_run_oracle_deviation(const struct UnitintRun *run);

/**
 * Largest unitarity defect over all evolution samples (NaN if `run` is
 * null).
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
double unitint_run_unitarity_defect(const struct UnitintRun *run);

/**
 * Number of restart segments the integration needed (zero if `run` is
 * null).
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
uintptr_t unitint_run_segment_count(const struct UnitintRun *run);

/**
 * Write the run's CSV files and JSON report under `prefix`, exactly as
 * the command-line runner does.
 *
 * # Safety
 * `run` must be a live run handle; `prefix` must be null or a valid
 * NUL-terminated string.
 */
int32_t unitint_run_write_outputs(const struct UnitintRun *run, const char *prefix);

/**
 * Release a run handle; a null pointer is ignored.
 *
 * # Safety
 * `run` must be null or a live handle not freed before.
 */
void unitint_run_free(struct UnitintRun *run);

/**
 * Run the full structural verification suite (commutator table,
 * sub-algebra closures, pseudo-spin relations, coherence round trip).
 * Returns zero when every check passes; otherwise the number of failing
 * checks, with their names in the error message.
 */
int32_t unitint_verify(void);

/**
 * Export the 15x15 commutator table as CSV to `path`.
 *
 * # Safety
 * `path` must be null or a valid NUL-terminated string.
 */
int32_t unitint_export_table(const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNITINT_H */
