#ifndef KNOTMESH_H
#define KNOTMESH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define KM_PLACEMENT_UNIFORM 0

#define KM_PLACEMENT_CHEBYSHEV 1

#define KM_FORMAT_CSV 0

#define KM_FORMAT_MARKDOWN 1

typedef enum KmStatus {
  KM_STATUS_OK = 0,
  KM_STATUS_NULL_POINTER = 1,
  KM_STATUS_INVALID_ARGUMENT = 2,
  KM_STATUS_DOMAIN = 3,
  KM_STATUS_NUMERIC = 4,
  KM_STATUS_UNSUPPORTED = 5,
  KM_STATUS_PANIC = 6,
} KmStatus;

/**
 * An error table for a benchmark run.
 */
typedef struct KmReport KmReport;

/**
 * A solved benchmark case.
 */
typedef struct KmSolution KmSolution;

/**
 * Run settings. `placement` is a `KM_PLACEMENT_*` code;
 * `literal_kernel` is nonzero to select the printed frozen-velocity
 * kernel (burger case only).
 */
typedef struct KmCaseConfig {
  size_t boundary;
  size_t interior;
  double shape_c;
  uint32_t placement;
  uint8_t literal_kernel;
} KmCaseConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; valid until the next
 * failing call on the same thread. Never null.
 */
const char *km_last_error(void);

/**
 * J0(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_j0(double x, double *out);

/**
 * J1(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_j1(double x, double *out);

/**
 * Y0(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_y0(double x, double *out);

/**
 * Y1(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_y1(double x, double *out);

/**
 * I0(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_i0(double x, double *out);

/**
 * I1(x) into `out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum KmStatus km_bessel_i1(double x, double *out);

/**
 * Number of registered benchmark cases.
 */
size_t km_case_count(void);

/**
 * Static name of case `index`, or null when out of range.
 */
const char *km_case_name(size_t index);

/**
 * Writes the default configuration of the named case into `out`.
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `out` must be null or
 * valid for writes.
 */
enum KmStatus km_case_default_config(const char *name, struct KmCaseConfig *out);

/**
 * Solves the named case. On success `*out` owns a handle to release with
 * [`km_solution_free`]. A null `config` selects the case defaults.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `config` null or readable, and
 * `out` valid for writes.
 */
enum KmStatus km_solution_new(const char *name,
                              const struct KmCaseConfig *config,
                              struct KmSolution **out);

/**
 * Releases a solution handle. Null is ignored.
 *
 * # Safety
 * `sol` must be null or a handle from [`km_solution_new`] not yet freed.
 */
void km_solution_free(struct KmSolution *sol);

/**
 * Evaluates the solution at (x, y).
 *
 * # Safety
 * `sol` must be a live handle and `out` valid for writes.
 */
enum KmStatus km_solution_eval(const struct KmSolution *sol, double x, double y, double *out);

/**
 * Exact solution of the case the handle was solved for.
 *
 * # Safety
 * `sol` must be a live handle and `out` valid for writes.
 */
enum KmStatus km_solution_exact(const struct KmSolution *sol, double x, double y, double *out);

/**
 * Condition estimate of the final linear system.
 *
 * # Safety
 * `sol` must be a live handle and `out` valid for writes.
 */
enum KmStatus km_solution_condition(const struct KmSolution *sol, double *out);

/**
 * Copies up to `cap` expansion coefficients into `buf` and stores the
 * full count in `len`. Pass `buf = NULL` to query the count.
 *
 * # Safety
 * `sol` must be a live handle, `len` valid for writes, and `buf` null or
 * valid for `cap` writes.
 */
enum KmStatus km_solution_coefficients(const struct KmSolution *sol,
                                       double *buf,
                                       size_t cap,
                                       size_t *len);

/**
 * Runs the named case and renders its error table in `format`
 * (`KM_FORMAT_*`). A null `config` selects the case defaults.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `config` null or readable, and
 * `out` valid for writes.
 */
enum KmStatus km_report_new(const char *name,
                            const struct KmCaseConfig *config,
                            uint32_t format,
                            struct KmReport **out);

/**
 * Report text, owned by the handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
const char *km_report_text(const struct KmReport *report);

/**
 * Average relative error over the report's consistent points.
 *
 * # Safety
 * `report` must be a live handle and `out` valid for writes.
 */
enum KmStatus km_report_average_rel_err(const struct KmReport *report, double *out);

/**
 * Releases a report handle. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle from [`km_report_new`] not yet freed.
 */
void km_report_free(struct KmReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTMESH_H */
