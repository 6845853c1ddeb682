#ifndef QKALEIDO_H
#define QKALEIDO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QK_MATRIX_QFT 0

#define QK_MATRIX_CLOCK 1

#define QK_MATRIX_SHIFT 2

#define QK_MATRIX_B_SYMMETRIC 3

#define QK_MATRIX_BDAG_SYMMETRIC 4

#define QK_MATRIX_B_NONSYMMETRIC 5

#define QK_MATRIX_BDAG_NONSYMMETRIC 6

/**
 * Hamiltonian with `hbar omega = 1`.
 */
#define QK_MATRIX_HAMILTONIAN 7

typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_ORDER = 2,
  QK_STATUS_INVALID_RESIDUE = 3,
  QK_STATUS_INVALID_ARGUMENT = 4,
  QK_STATUS_OVERFLOW = 5,
  QK_STATUS_DIVERGENT = 6,
  QK_STATUS_DEGENERATE = 7,
  QK_STATUS_DIMENSION_MISMATCH = 8,
  QK_STATUS_BUFFER_TOO_SMALL = 9,
  QK_STATUS_UNSUPPORTED = 10,
  QK_STATUS_PANIC = 11,
} QkStatus;

/**
 * Opaque kaleidoscope basis.
 */
typedef struct QkBasis QkBasis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *qk_status_message(enum QkStatus status);

const char *qk_version(void);

/**
 * Builds the basis for `(n, alpha)`. `dim = 0` picks the truncation from
 * `tol` (pass `1e-12` for the library default). `route` is 0 for the
 * direct series construction and 1 for the Fourier superposition.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QkStatus qk_basis_new(size_t n,
                           double alpha_re,
                           double alpha_im,
                           size_t dim,
                           double tol,
                           uint32_t route,
                           struct QkBasis **out);

/**
 * # Safety
 * `basis` must come from [`qk_basis_new`] and not be freed twice. Null is ignored.
 */
void qk_basis_free(struct QkBasis *basis);

/**
 * # Safety
 * `basis` must be a live handle and `n`, `dim` valid out pointers.
 */
enum QkStatus qk_basis_shape(const struct QkBasis *basis, size_t *n, size_t *dim);

/**
 * Copies the Fock amplitudes of `|s>` into `re` and `im`, each of length
 * at least `dim`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum QkStatus qk_basis_amplitudes(const struct QkBasis *basis,
                                  size_t s,
                                  double *re,
                                  double *im,
                                  size_t len);

/**
 * `N_s`; `QK_STATUS_DIVERGENT` at `alpha = 0` for `s > 0`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QkStatus qk_basis_norm(const struct QkBasis *basis, size_t s, double *out);

/**
 * `max |<s|t> - delta_st|`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QkStatus qk_basis_orthonormality(const struct QkBasis *basis, double *out);

/**
 * Real mod-n exponential `f_s(x)` from the power series.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QkStatus qk_mod_exp(size_t n, size_t s, double x, double *out);

/**
 * `<s|N|s>` at `|alpha|^2 = alpha_sq`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QkStatus qk_photon_expectation(size_t n, size_t s, double alpha_sq, double *out);

/**
 * Writes the `n x n` matrix `which` (a `QK_MATRIX_*` constant) in row-major
 * order into `re` and `im`, each holding at least `n * n` doubles.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum QkStatus qk_matrix(size_t n, uint32_t which, double *re, double *im, size_t len);

/**
 * The `n` q-oscillator levels `E_0 .. E_(n-1)`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum QkStatus qk_spectrum(size_t n, double hbar_omega, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKALEIDO_H */
