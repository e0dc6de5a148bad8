#ifndef SPECTRA_TRACE_H
#define SPECTRA_TRACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_ARGUMENT = 2,
  ST_STATUS_PARSE_ERROR = 3,
  /**
   * A tolerance could not be certified or a contour came too close to a zero.
   */
  ST_STATUS_NUMERICAL_FAILURE = 4,
  ST_STATUS_OUT_OF_RANGE = 5,
  ST_STATUS_PANIC = 6,
} StStatus;

/**
 * Opaque eigenvalue set handle.
 */
typedef struct StEigenvalues StEigenvalues;

/**
 * Opaque potential handle.
 */
typedef struct StPotential StPotential;

typedef struct StComplex {
  double re;
  double im;
} StComplex;

typedef struct StNorms {
  double l1_norm;
  double weighted_norm;
  struct StComplex q0;
  struct StComplex big_q0;
  /**
   * NaN components when ∫q² diverges.
   */
  struct StComplex big_q2;
  double r_c;
  double rouche_a;
} StNorms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *st_last_error(void);

/**
 * Parses a potential from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum StStatus st_potential_from_json(const char *json, struct StPotential **out);

/**
 * Constant complex height on [a, b].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StStatus st_potential_box(struct StComplex height,
                               double a,
                               double b,
                               struct StPotential **out);

/**
 * c·t·x^{t²−1} on (0, 1).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StStatus st_potential_paper_power(struct StComplex amplitude,
                                       double t,
                                       struct StPotential **out);

/**
 * Piecewise-linear potential through (xs[i], qs[i]), zero outside.
 *
 * # Safety
 * `xs` and `qs` must point to `n` elements each and `out` must be valid.
 */
enum StStatus st_potential_grid(const double *xs,
                                const struct StComplex *qs,
                                uintptr_t n,
                                struct StPotential **out);

/**
 * # Safety
 * `p` must come from a constructor of this library and not be used afterwards.
 */
void st_potential_free(struct StPotential *p);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_norms(const struct StPotential *p, struct StNorms *out);

/**
 * w(k) = f₋f₊′ − f₋′f₊ at x = 0 with its error bound. `tol` ≤ 0 selects
 * the default.
 *
 * # Safety
 * `p` must be a live handle; `w` and `err` valid pointers.
 */
enum StStatus st_wronskian(const struct StPotential *p,
                           struct StComplex k,
                           double tol,
                           struct StComplex *w,
                           double *err);

/**
 * Eigenvalue momenta in the upper half-plane.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_locate_eigenvalues(const struct StPotential *p, struct StEigenvalues **out);

/**
 * Number of distinct eigenvalues (0 for NULL).
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
uintptr_t st_eigenvalues_len(const struct StEigenvalues *s);

/**
 * # Safety
 * `s` must be a live handle; `k` and `multiplicity` valid pointers.
 */
enum StStatus st_eigenvalues_get(const struct StEigenvalues *s,
                                 uintptr_t index,
                                 struct StComplex *k,
                                 uint32_t *multiplicity);

/**
 * # Safety
 * `s` must come from `st_locate_eigenvalues` and not be used afterwards.
 */
void st_eigenvalues_free(struct StEigenvalues *s);

/**
 * J₀ = (1/π)∫₀^∞ log|ψ(t)ψ(−t)| dt. `tol` ≤ 0 selects the default.
 *
 * # Safety
 * `p` must be a live handle; `value` and `err` valid pointers.
 */
enum StStatus st_j0(const struct StPotential *p, double tol, double *value, double *err);

/**
 * Full trace report as JSON; release with `st_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_trace_report_json(const struct StPotential *p, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void st_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRA_TRACE_H */
