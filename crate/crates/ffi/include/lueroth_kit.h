#ifndef LUEROTH_KIT_H
#define LUEROTH_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum LkStatus {
  LK_STATUS_OK = 0,
  LK_STATUS_NULL_POINTER = 1,
  LK_STATUS_INVALID_UTF8 = 2,
  LK_STATUS_PARSE = 3,
  LK_STATUS_DEGREE = 4,
  LK_STATUS_FIELD = 5,
  LK_STATUS_DEGENERATE = 6,
  LK_STATUS_RANK = 7,
  LK_STATUS_NUMERIC = 8,
  /**
   * A check ran and did not hold.
   */
  LK_STATUS_CHECK_FAILED = 9,
  LK_STATUS_INTERNAL = 10,
} LkStatus;

/**
 * Variable group of a form: points `x1..x3` or dual coordinates `e1..e3`.
 */
typedef enum LkGroup {
  LK_GROUP_X = 0,
  LK_GROUP_E = 1,
} LkGroup;

/**
 * A homogeneous ternary form.
 */
typedef struct LkForm LkForm;

/**
 * An 18-coordinate point tensor.
 */
typedef struct LkTuple LkTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *lk_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *lk_version(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lk_string_free(char *s);

/**
 * Parses a form such as `"x1^4 + 2*x2^2*x3^2"`.
 *
 * `radicand` selects the field: 0 for the rationals, otherwise a
 * square-free `d` for Q(sqrt(d)), whose generator is written `t`.
 *
 * # Safety
 * `expr` must be a nul-terminated string; `out_form` must be writable.
 */
enum LkStatus lk_form_parse(const char *expr,
                            int64_t radicand,
                            enum LkGroup group,
                            uint32_t degree,
                            struct LkForm **out_form);

/**
 * # Safety
 * `form` must come from this library and not have been freed; null is
 * ignored.
 */
void lk_form_free(struct LkForm *form);

/**
 * Degree of a form.
 *
 * # Safety
 * `form` must be a live handle; `out_degree` must be writable.
 */
enum LkStatus lk_form_degree(const struct LkForm *form, uint32_t *out_degree);

/**
 * The form as text, in the syntax accepted by [`lk_form_parse`].
 *
 * # Safety
 * `form` must be a live handle; `out_text` must be writable.
 */
enum LkStatus lk_form_to_string(const struct LkForm *form, char **out_text);

/**
 * Whether two forms are equal, written as 0 or 1.
 *
 * # Safety
 * Both handles must be live; `out_equal` must be writable.
 */
enum LkStatus lk_form_equal(const struct LkForm *a, const struct LkForm *b, int32_t *out_equal);

/**
 * Determinant and rank of the catalecticant of a quartic in x. The
 * determinant is written as an exact decimal fraction.
 *
 * # Safety
 * `quartic` must be a live handle; the out pointers must be writable.
 */
enum LkStatus lk_catalecticant(const struct LkForm *quartic, char **out_det, size_t *out_rank);

/**
 * The degree-4 covariant of a quartic in x.
 *
 * # Safety
 * `quartic` must be a live handle; `out_form` must be writable.
 */
enum LkStatus lk_scorza(const struct LkForm *quartic, struct LkForm **out_form);

/**
 * The tuple of a conic in x and a cubic in x; the adjugate of the conic is
 * paired with the cubic.
 *
 * # Safety
 * Both handles must be live; `out_tuple` must be writable.
 */
enum LkStatus lk_bateman_tuple(const struct LkForm *conic,
                               const struct LkForm *cubic,
                               struct LkTuple **out_tuple);

/**
 * The tuple of a dual conic in e and a cubic in x.
 *
 * # Safety
 * Both handles must be live; `out_tuple` must be writable.
 */
enum LkStatus lk_pairing(const struct LkForm *dual_conic,
                         const struct LkForm *cubic,
                         struct LkTuple **out_tuple);

/**
 * A tuple from 18 integers `d_i_jk`, ordered by `i` and then by
 * `jk = 11, 12, 13, 22, 23, 33`.
 *
 * # Safety
 * `coords` must point at 18 readable integers; `out_tuple` must be
 * writable.
 */
enum LkStatus lk_tuple_from_integers(const int64_t *coords, struct LkTuple **out_tuple);

/**
 * # Safety
 * `tuple` must come from this library and not have been freed; null is
 * ignored.
 */
void lk_tuple_free(struct LkTuple *tuple);

/**
 * The tuple as a JSON object keyed `d_i_jk`.
 *
 * # Safety
 * `tuple` must be a live handle; `out_json` must be writable.
 */
enum LkStatus lk_tuple_to_json(const struct LkTuple *tuple, char **out_json);

/**
 * Rank and Pfaffian of the skew matrix of a tuple.
 *
 * # Safety
 * `tuple` must be a live handle; the out pointers must be writable.
 */
enum LkStatus lk_morley(const struct LkTuple *tuple, size_t *out_rank, char **out_pfaffian);

/**
 * The kernel of the skew matrix as a pencil of dual conics, in reduced
 * echelon order. Fails with `Rank` unless the matrix has rank 4.
 *
 * # Safety
 * `tuple` must be a live handle; the out pointers must be writable.
 */
enum LkStatus lk_morley_kernel(const struct LkTuple *tuple,
                               struct LkForm **out_first,
                               struct LkForm **out_second);

/**
 * Rank of the linearized system at a dual conic in e and a cubic in x.
 *
 * # Safety
 * Both handles must be live; `out_rank` must be writable.
 */
enum LkStatus lk_tangent_rank(const struct LkForm *dual_conic,
                              const struct LkForm *cubic,
                              size_t *out_rank);

/**
 * Runs the regression suite and writes its JSON report. `only` may be null
 * or the name of one group. Returns `CheckFailed` when a statement fails;
 * the report is written either way.
 *
 * # Safety
 * `only` must be null or a nul-terminated string; `out_json` must be
 * writable.
 */
enum LkStatus lk_verify(uint64_t seed, const char *only, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LUEROTH_KIT_H */
