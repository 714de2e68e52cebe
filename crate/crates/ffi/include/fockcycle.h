#ifndef FOCKCYCLE_H
#define FOCKCYCLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pass as `cap` to use the Poisson truncation budget.
 */
#define FC_CAP_AUTO ~0

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_INPUT = 2,
  FC_STATUS_RESOURCE_CAP = 3,
  FC_STATUS_TRUNCATION_BUDGET = 4,
  FC_STATUS_NUMERICAL = 5,
  FC_STATUS_PANIC = 6,
} FcStatus;

/**
 * A truncated Fock basis.
 */
typedef struct FcBasis FcBasis;

/**
 * A finitely presented group with an orthogonal representation.
 */
typedef struct FcRep FcRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fc_last_error_message(void);

/**
 * Builds the basis of the symmetric Fock space over `modes` modes, truncated
 * at total degree `cap`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FcStatus fc_basis_new(uintptr_t modes, uintptr_t cap, struct FcBasis **out);

/**
 * # Safety
 * `basis` must be null or come from [`fc_basis_new`] and not be used again.
 */
void fc_basis_free(struct FcBasis *basis);

/**
 * Number of basis vectors; 0 for a null handle.
 *
 * # Safety
 * `basis` must be null or a live handle.
 */
uintptr_t fc_basis_len(const struct FcBasis *basis);

/**
 * `⟨s(ξ)ⁿΩ, Ω⟩` for the real vector `xi[0..len]` on `basis`.
 *
 * # Safety
 * `basis` must be a live handle, `xi` valid for `len` reads and `out` for a
 * write.
 */
enum FcStatus fc_moment(const struct FcBasis *basis,
                        const double *xi,
                        uintptr_t len,
                        uintptr_t n,
                        double *out);

/**
 * `⟨ω Ω, Ω⟩` for `ω = exp(−i s(ξ))` with `‖ξ‖ = norm`. `cap` may be
 * [`FC_CAP_AUTO`]; the cap used is written to `out_cap` when non-null.
 *
 * # Safety
 * The output pointers must be valid for writes (`out_cap` may be null).
 */
enum FcStatus fc_ps_trace(double norm,
                          uintptr_t cap,
                          double *out_re,
                          double *out_im,
                          uintptr_t *out_cap);

/**
 * Deformation correlation `⟨θ_t(ω⊗1)Ω, (ω⊗1)Ω⟩` for `‖b‖ = norm`; the
 * exact value is `exp(−(1 − cos t)·norm²)`.
 *
 * # Safety
 * The output pointers must be valid for writes (`out_cap` may be null).
 */
enum FcStatus fc_deformation_correlation(double norm,
                                         double t,
                                         uintptr_t cap,
                                         double *out_re,
                                         double *out_im,
                                         uintptr_t *out_cap);

/**
 * Parses `{"generators", "relators", "matrices"}` JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum FcStatus fc_rep_from_json(const char *json, struct FcRep **out);

/**
 * # Safety
 * `rep` must be null or come from [`fc_rep_from_json`] and not be used again.
 */
void fc_rep_free(struct FcRep *rep);

/**
 * Dimension of the representation space; 0 for a null handle.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
uintptr_t fc_rep_dim(const struct FcRep *rep);

/**
 * `dim Z¹`, `dim B¹` and `dim H¹` of the representation.
 *
 * # Safety
 * `rep` must be a live handle and the outputs valid for writes.
 */
enum FcStatus fc_rep_h1(const struct FcRep *rep,
                        uintptr_t *out_z1,
                        uintptr_t *out_b1,
                        uintptr_t *out_h1);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOCKCYCLE_H */
