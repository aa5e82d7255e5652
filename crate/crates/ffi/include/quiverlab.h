#ifndef QUIVERLAB_H
#define QUIVERLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  QL_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input: syntax, unknown ids, shapes.
   */
  QL_STATUS_PARSE = 3,
  /**
   * Well-formed input violating a hypothesis of the operation.
   */
  QL_STATUS_PRECONDITION = 4,
  QL_STATUS_PANIC = 5,
} QlStatus;

typedef enum QlDirection {
  /**
   * Reflection at a sink.
   */
  QL_DIRECTION_PLUS = 0,
  /**
   * Reflection at a source.
   */
  QL_DIRECTION_MINUS = 1,
} QlDirection;

/**
 * Opaque representation handle.
 */
typedef struct QlRep QlRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a representation from the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum QlStatus ql_rep_parse(const char *text, struct QlRep **out);

/**
 * # Safety
 * `rep` must be null or a handle from this library that has not been freed.
 */
void ql_rep_free(struct QlRep *rep);

/**
 * Serialize to the text format; release the string with `ql_string_free`.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum QlStatus ql_rep_to_text(const struct QlRep *rep, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void ql_string_free(char *s);

/**
 * Dimension of the endomorphism algebra.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum QlStatus ql_rep_end_dim(const struct QlRep *rep, size_t *out);

/**
 * Whether the endomorphism algebra is the scalars.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum QlStatus ql_rep_is_transitive(const struct QlRep *rep, bool *out);

/**
 * Randomized search for a nontrivial idempotent endomorphism, seeded.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum QlStatus ql_rep_is_indecomposable(const struct QlRep *rep, uint64_t seed, bool *out);

/**
 * Reflect at a sink (`PLUS`) or source (`MINUS`); the result is a new handle.
 *
 * # Safety
 * `rep` must be a live handle; `vertex` a NUL-terminated string; `out` writable.
 */
enum QlStatus ql_rep_reflect(const struct QlRep *rep,
                             const char *vertex,
                             enum QlDirection direction,
                             struct QlRep **out);

/**
 * Conjugate-transpose dual on the opposite quiver.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum QlStatus ql_rep_dual(const struct QlRep *rep, struct QlRep **out);

/**
 * Extended Dynkin representation for `family` (`d4tilde`, `dNtilde`, `e6tilde`,
 * `e7tilde`, `e8tilde`) and an operator fixture such as `jordan:3`.
 *
 * # Safety
 * `family` and `op` must be NUL-terminated strings; `out` must be writable.
 */
enum QlStatus ql_build_extended_dynkin(const char *family, const char *op, struct QlRep **out);

/**
 * Message of the last failed call on this thread, or an empty string. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *ql_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUIVERLAB_H */
