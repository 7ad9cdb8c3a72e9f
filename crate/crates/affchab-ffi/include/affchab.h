#ifndef AFFCHAB_H
#define AFFCHAB_H

/* Generated by cbindgen from crates/affchab-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Library errors map one-to-one onto the variants of the
 * Rust error type.
 */
enum AffchabStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  AFFCHAB_STATUS_OK = 0,
  /**
   * The run finished but some discs could not be resolved.
   */
  AFFCHAB_STATUS_PARTIAL = 1,
  AFFCHAB_STATUS_NULL_ARGUMENT = -1,
  AFFCHAB_STATUS_INVALID_UTF8 = -2,
  AFFCHAB_STATUS_PANIC = -3,
  AFFCHAB_STATUS_ZERO_INPUT = -10,
  AFFCHAB_STATUS_NOT_A_UNIT = -11,
  AFFCHAB_STATUS_NON_SEPARABLE_REDUCTION = -12,
  AFFCHAB_STATUS_DIVERGENT_SUBSTITUTION = -13,
  AFFCHAB_STATUS_INDISTINGUISHABLE_FROM_ZERO = -14,
  AFFCHAB_STATUS_PRECISION_LOSS = -15,
  AFFCHAB_STATUS_PRECISION_EXCEEDED = -16,
  AFFCHAB_STATUS_NOT_SYMMETRIC = -17,
  AFFCHAB_STATUS_UNSUPPORTED_FAMILY = -18,
  AFFCHAB_STATUS_BAD_REDUCTION = -19,
  AFFCHAB_STATUS_POLE_ON_DISC = -20,
  AFFCHAB_STATUS_DIFFERENT_DISCS = -21,
  AFFCHAB_STATUS_ENDPOINT_RESTRICTION = -22,
  AFFCHAB_STATUS_MISSING_INCIDENCE = -23,
  AFFCHAB_STATUS_NEEDS_OVERRIDE = -24,
  AFFCHAB_STATUS_NOT_TRANSVERSAL = -25,
  AFFCHAB_STATUS_DIMENSION_MISMATCH = -26,
  AFFCHAB_STATUS_INVALID = -27,
};
#ifndef __cplusplus
typedef int32_t AffchabStatus;
#endif // __cplusplus

/**
 * A parsed problem file.
 */
typedef struct AffchabProblem AffchabProblem;

/**
 * The JSON output of a solve or verify run.
 */
typedef struct AffchabReport AffchabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *affchab_version(void);

/**
 * Name of a status code, e.g. "BadReduction". Unknown codes give "Unknown".
 */
const char *affchab_status_name(int32_t status);

/**
 * Message of the last error on this thread, or "". The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *affchab_last_error(void);

/**
 * Parses a problem file from a JSON string.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
AffchabStatus affchab_problem_parse(const char *json, struct AffchabProblem **out);

/**
 * Reads a problem file from disk.
 *
 * # Safety
 * `path` must be a valid C string and `out` a valid pointer.
 */
AffchabStatus affchab_problem_read(const char *path, struct AffchabProblem **out);

/**
 * # Safety
 * `problem` must come from `affchab_problem_parse` or `affchab_problem_read`
 * and not have been freed. Null is ignored.
 */
void affchab_problem_free(struct AffchabProblem *problem);

/**
 * Runs the solver. `p == 0` and `precision <= 0` keep the values from the
 * file; `sigma < 0` runs every reduction type. A report is stored in `out`
 * whenever the arguments are valid, including when the run itself fails,
 * so the error details can be read from its JSON.
 *
 * # Safety
 * `problem` must be a live handle and `out` a valid pointer.
 */
AffchabStatus affchab_solve(const struct AffchabProblem *problem,
                            uint32_t p,
                            int64_t precision,
                            int64_t sigma,
                            struct AffchabReport **out);

/**
 * Checks the known points and determinants, as `affchab verify` does.
 *
 * # Safety
 * As for [`affchab_solve`].
 */
AffchabStatus affchab_verify(const struct AffchabProblem *problem,
                             uint32_t p,
                             int64_t precision,
                             struct AffchabReport **out);

/**
 * The report as JSON, owned by the report.
 *
 * # Safety
 * `report` must be a live handle or null (which gives null).
 */
const char *affchab_report_json(const struct AffchabReport *report);

/**
 * 0 complete, 1 error, 2 partial: the exit codes of the command line tool.
 * Null gives 1.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
int32_t affchab_report_outcome(const struct AffchabReport *report);

/**
 * # Safety
 * `report` must come from a solve or verify call and not have been freed.
 * Null is ignored.
 */
void affchab_report_free(struct AffchabReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFFCHAB_H */
