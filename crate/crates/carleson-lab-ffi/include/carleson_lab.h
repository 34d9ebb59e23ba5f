#ifndef CARLESON_LAB_H
#define CARLESON_LAB_H

#pragma once

/* Generated by cbindgen from carleson-lab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every fallible call.
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_ARGUMENT = 2,
  CL_STATUS_SINGULARITY = 3,
  CL_STATUS_ALIASING = 4,
  CL_STATUS_PARSE_ERROR = 5,
  CL_STATUS_CONTRACT_FAILED = 6,
  CL_STATUS_INTERNAL_ERROR = 7,
} ClStatus;

// Opaque 2π-periodic signal.
typedef struct ClSignal ClSignal;

// Opaque finite doubling metric measure space.
typedef struct ClSpace ClSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on the calling thread. The pointer
// stays valid until the next failing call on the same thread.
const char *cl_last_error_message(void);

// Truncated Hilbert kernel κ(x).
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_hilbert_kappa(double x, double *out_re, double *out_im);

// Dirichlet kernel K_N(x) in the exponential-sum form
// (`closed_form = false`) or the closed secant form, which fails with
// `CL_STATUS_SINGULARITY` inside the guard band around e^{ix} = 1.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_dirichlet_kernel(uint32_t n,
                                  double x,
                                  bool closed_form,
                                  double *out_re,
                                  double *out_im);

// Periodic bump kernel k_r(x) = min(1/r, 1 + r/|1-e^{ix}|²), 0 < r < 1.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_bump_kernel(double r, double x, double *out);

// Lower secant bound data: writes |1-e^{ix}| and 2η/π. The first is
// guaranteed to dominate the second on the admissible range.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_lower_secant_bound(double eta, double x, double *out_lhs, double *out_rhs);

// Averaged Dirichlet kernel L'(x) for the truncation parameter r.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_dirichlet_approx_lprime(double r, double x, double *out_re, double *out_im);

// Parse a space from the JSON document
// `{"points": [...], "metric": "euclidean1d"|"table", "dist": [[...]],
//   "weights": [...], "o": 0, "a": 4}`. The constructor validates the
// metric and doubling axioms and refuses violating spaces.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_space_from_json(const char *json, struct ClSpace **out);

// Release a space handle. Null is a no-op.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
void cl_space_free(struct ClSpace *space);

// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_space_point_count(const struct ClSpace *space, uintptr_t *out);

// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_space_total_measure(const struct ClSpace *space, double *out);

// μ of the open ball B(center, radius).
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_space_ball_measure(const struct ClSpace *space,
                                    uintptr_t center,
                                    double radius,
                                    double *out);

// Global maximal function M(|w|^{p1})^{1/p1} over the generated dyadic
// ball family. `values` and `out` must hold `len` doubles, with `len`
// equal to the point count.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_space_global_maximal(const struct ClSpace *space,
                                      const double *values,
                                      uintptr_t len,
                                      double p1,
                                      double *out);

// Construct a named builtin signal sampled at M points (power of two).
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_signal_builtin(const char *name, uintptr_t m, struct ClSignal **out);

// Parse a signal from
// `{"kind": "builtin:<name>" | "samples", "M": ..., "values": [...]}`.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_signal_from_json(const char *json, struct ClSignal **out);

// Release a signal handle. Null is a no-op.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
void cl_signal_free(struct ClSignal *signal);

// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_signal_eval(const struct ClSignal *signal,
                             double x,
                             double *out_re,
                             double *out_im);

// Fourier coefficient with the anti-aliasing guard |n| ≤ M/4.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_signal_fourier_coeff(const struct ClSignal *signal,
                                      int64_t n,
                                      double *out_re,
                                      double *out_im);

// N-th partial Fourier sum at x, by coefficients or by convolution with
// the Dirichlet kernel.
// # Safety
// Pointer arguments must be valid for the access documented above;
// handles must originate from this library and be live.
enum ClStatus cl_signal_partial_sum(const struct ClSignal *signal,
                                    uint32_t n,
                                    double x,
                                    bool convolution,
                                    double *out_re,
                                    double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARLESON_LAB_H */
