#ifndef CEIG_H
#define CEIG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/* Status codes are returned by every fallible function; on a nonzero
   status ceig_last_error_message() describes the failure. */

typedef enum CeigStatus {
  CEIG_STATUS_OK = 0,
  CEIG_STATUS_NULL_POINTER = 1,
  CEIG_STATUS_INVALID_INPUT = 2,
  CEIG_STATUS_SYMMETRY_VIOLATION = 3,
  CEIG_STATUS_DIMENSION_MISMATCH = 4,
  CEIG_STATUS_NO_CONVERGENCE = 5,
  CEIG_STATUS_NUMERICAL_DOMAIN = 6,
  CEIG_STATUS_BUFFER_TOO_SMALL = 7,
  CEIG_STATUS_PANIC = 8,
} CeigStatus;

// Opaque handle to a piezoelectric-type tensor.
typedef struct CeigPiezoTensor CeigPiezoTensor;

typedef struct CeigSolverConfig {
  size_t starts;
  double tol;
  size_t max_iters;
  uint64_t seed;
  // True selects the fixed global shift instead of the adaptive one.
  bool static_shift;
} CeigSolverConfig;

typedef struct CeigInterval {
  double lo;
  double hi;
} CeigInterval;

typedef struct CeigBoundReport {
  double lambda_a;
  double lambda_e;
  double norm_e2;
  double zmin_diff;
  double zmax_diff;
  struct CeigInterval additive;
  struct CeigInterval spectral;
  struct CeigInterval quadratic;
} CeigBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ceig_version(void);

// Message for the last failure on this thread, or an empty string. The
// pointer stays valid until the next `ceig_*` call on the same thread.
const char *ceig_last_error_message(void);

struct CeigSolverConfig ceig_solver_config_default(void);

// Builds a tensor from `n³` row-major values (`a_ijk` at `(i·n + j)·n + k`).
// With `strict` false the values are symmetrized over `(j, k)`; otherwise
// asymmetric input is rejected.
//
// # Safety
// `data` must point to `len` readable doubles and `out` must be writable.
enum CeigStatus ceig_tensor_new(size_t n,
                                const double *data,
                                size_t len,
                                bool strict,
                                struct CeigPiezoTensor **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `tensor` must come from [`ceig_tensor_new`] and not be freed twice.
void ceig_tensor_free(struct CeigPiezoTensor *tensor);

// # Safety
// `tensor` must be a live handle and `out` writable.
enum CeigStatus ceig_tensor_dim(const struct CeigPiezoTensor *tensor, size_t *out);

// Largest C-eigenvalue via the lifted fourth-order tensor. `config` may be
// null for defaults; `x` and `y` may be null, otherwise they need `len ≥ n`.
//
// # Safety
// Pointers must be null or valid for the sizes described above.
enum CeigStatus ceig_c_max(const struct CeigPiezoTensor *tensor,
                           const struct CeigSolverConfig *config,
                           double *lambda,
                           double *x,
                           double *y,
                           size_t len);

// Same contract as [`ceig_c_max`], solved by alternating ascent on the
// trilinear form.
//
// # Safety
// See [`ceig_c_max`].
enum CeigStatus ceig_c_max_alternating(const struct CeigPiezoTensor *tensor,
                                       const struct CeigSolverConfig *config,
                                       double *lambda,
                                       double *x,
                                       double *y,
                                       size_t len);

// Spectral norm of the `n × n²` slice unfolding.
//
// # Safety
// `tensor` must be a live handle and `out` writable.
enum CeigStatus ceig_spectral_norm(const struct CeigPiezoTensor *tensor, double *out);

// The three perturbation intervals for `a + e`. `config` may be null.
//
// # Safety
// `a` and `e` must be live handles and `out` writable.
enum CeigStatus ceig_bound_report(const struct CeigPiezoTensor *a,
                                  const struct CeigPiezoTensor *e,
                                  const struct CeigSolverConfig *config,
                                  struct CeigBoundReport *out);

// Writes whether quadratic ⊆ additive ⊆ spectral holds for `report`.
//
// # Safety
// `report` must be readable and `out` writable.
enum CeigStatus ceig_check_nesting(const struct CeigBoundReport *report, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CEIG_H */
