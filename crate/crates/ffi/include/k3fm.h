#ifndef K3FM_H
#define K3FM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum K3fmStatus {
  K3FM_STATUS_OK = 0,
  K3FM_STATUS_INVALID_ARGUMENT = 1,
  K3FM_STATUS_NULL_POINTER = 2,
  K3FM_STATUS_BOUND_EXCEEDED = 3,
  K3FM_STATUS_OVERFLOW = 4,
  K3FM_STATUS_BUFFER_TOO_SMALL = 5,
  K3FM_STATUS_NOT_FOUND = 6,
  K3FM_STATUS_INTERNAL = 99,
} K3fmStatus;

/**
 * Opaque even lattice.
 */
typedef struct K3fmLattice K3fmLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length in bytes of the last error message of this thread, excluding the
 * terminating NUL.
 */
size_t k3fm_last_error_length(void);

/**
 * Copies the last error message, NUL-terminated and truncated to `cap`
 * bytes. Returns the number of bytes written excluding the NUL.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes of writes.
 */
size_t k3fm_last_error_message(char *buf, size_t cap);

/**
 * Brute-force bound on discriminant group orders used when callers pass 0.
 */
uint64_t k3fm_default_isometry_bound(void);

/**
 * Builds a lattice from a row-major `rank × rank` Gram matrix.
 *
 * # Safety
 * `gram` must point to `rank * rank` values; `out_lattice` must be writable.
 */
enum K3fmStatus k3fm_lattice_new(const int64_t *gram,
                                 size_t rank,
                                 struct K3fmLattice **out_lattice);

/**
 * Builds a named standard lattice (`U`, `E8_minus`, `rank1`, `lambda_n`,
 * `lambda_K3`, `extended_NS`). `param` is ignored unless `has_param`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out_lattice` must be writable.
 */
enum K3fmStatus k3fm_lattice_standard(const char *name,
                                      int64_t param,
                                      bool has_param,
                                      struct K3fmLattice **out_lattice);

/**
 * Releases a lattice; null is a no-op.
 *
 * # Safety
 * `lattice` must come from this library and not be used afterwards.
 */
void k3fm_lattice_free(struct K3fmLattice *lattice);

/**
 * # Safety
 * Pointers must be valid.
 */
enum K3fmStatus k3fm_lattice_rank(const struct K3fmLattice *lattice, size_t *out_rank);

/**
 * Fails with `Overflow` when the determinant does not fit in 64 bits.
 *
 * # Safety
 * Pointers must be valid.
 */
enum K3fmStatus k3fm_lattice_determinant(const struct K3fmLattice *lattice, int64_t *out_det);

/**
 * # Safety
 * Pointers must be valid.
 */
enum K3fmStatus k3fm_lattice_signature(const struct K3fmLattice *lattice,
                                       size_t *out_positive,
                                       size_t *out_negative);

/**
 * Orders of the cyclic factors of the discriminant group, each dividing the
 * next. `out_len` always receives the number of factors.
 *
 * # Safety
 * `buf` must be valid for `cap` writes; `out_len` must be writable.
 */
enum K3fmStatus k3fm_lattice_discriminant_orders(const struct K3fmLattice *lattice,
                                                 uint64_t *buf,
                                                 size_t cap,
                                                 size_t *out_len);

/**
 * Equal signatures and isomorphic discriminant forms. `bound` limits the
 * group order searched; 0 selects the default.
 *
 * # Safety
 * Pointers must be valid.
 */
enum K3fmStatus k3fm_lattice_same_genus(const struct K3fmLattice *first,
                                        const struct K3fmLattice *second,
                                        uint64_t bound,
                                        bool *out_same);

/**
 * Number of partners of a K3 surface with Picard lattice `⟨2n⟩`.
 *
 * # Safety
 * `out_count` must be writable.
 */
enum K3fmStatus k3fm_partner_count(uint64_t n, uint64_t *out_count);

/**
 * The pairs `(r, s)` with `rs = n`, `gcd(r, s) = 1`, `r ≥ s`, by descending
 * `r`. Both buffers hold `cap` entries.
 *
 * # Safety
 * `r_buf` and `s_buf` must be valid for `cap` writes.
 */
enum K3fmStatus k3fm_partners(uint64_t n,
                              uint64_t *r_buf,
                              uint64_t *s_buf,
                              size_t cap,
                              size_t *out_len);

/**
 * Double-coset partner count for Picard lattice `⟨2n⟩`, `n ≥ 2`.
 *
 * # Safety
 * `out_count` must be writable.
 */
enum K3fmStatus k3fm_rank1_count(uint64_t n, uint64_t bound, uint64_t *out_count);

/**
 * Partner count for the rank-two Picard lattice of discriminant `p`, a
 * prime `≡ 1 mod 4`.
 *
 * # Safety
 * `out_count` must be writable.
 */
enum K3fmStatus k3fm_rank2_count(uint64_t p, uint64_t *out_count);

/**
 * # Safety
 * `out_h` must be writable.
 */
enum K3fmStatus k3fm_narrow_class_number(int64_t d, uint64_t *out_h);

/**
 * Class number of the real quadratic field of fundamental discriminant `d`.
 *
 * # Safety
 * `out_h` must be writable.
 */
enum K3fmStatus k3fm_wide_class_number(int64_t d, uint64_t *out_h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* K3FM_H */
