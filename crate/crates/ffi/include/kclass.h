#ifndef KCLASS_H
#define KCLASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum KcStatus {
  KC_STATUS_OK = 0,
  KC_STATUS_NULL_POINTER = 1,
  KC_STATUS_INVALID_ARGUMENT = 2,
  KC_STATUS_INVALID_DISCRIMINANT = 3,
  KC_STATUS_INSUFFICIENT_DATA = 4,
  KC_STATUS_MALFORMED_BUNDLE = 5,
  KC_STATUS_INTERNAL_CONTRADICTION = 6,
  KC_STATUS_INVALID_UTF8 = 7,
  KC_STATUS_PANIC = 8,
} KcStatus;

/**
 * An invariant bundle.
 */
typedef struct KcBundle KcBundle;

/**
 * A realised field specification.
 */
typedef struct KcField KcField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Release with
 * [`kc_string_free`].
 */
char *kc_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void kc_string_free(char *s);

/**
 * Imaginary quadratic field of fundamental discriminant `d < 0`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum KcStatus kc_field_from_discriminant(int64_t d, struct KcField **out);

/**
 * Synthetic field from the JSON spec format used by `kclass --spec`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
enum KcStatus kc_field_from_synthetic_json(const char *json, struct KcField **out);

/**
 * # Safety
 * `f` must be NULL or a handle from this library, not yet freed.
 */
void kc_field_free(struct KcField *f);

/**
 * # Safety
 * `f` must be a live field handle and `out` a valid pointer.
 */
enum KcStatus kc_field_class_number(const struct KcField *f, size_t *out);

/**
 * Class group as text, e.g. `Z/2 ⊕ Z/4` or `trivial`.
 *
 * # Safety
 * `f` must be a live field handle and `out` a valid pointer.
 */
enum KcStatus kc_field_class_group(const struct KcField *f, char **out);

/**
 * Lazy bundle over every prime ideal of norm `≤ prime_bound`; entries
 * beyond `∅` and the singletons are evaluated on demand.
 *
 * # Safety
 * `f` must be a live field handle and `out` a valid pointer.
 */
enum KcStatus kc_bundle_build(const struct KcField *f, uint64_t prime_bound, struct KcBundle **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
enum KcStatus kc_bundle_from_json(const char *json, struct KcBundle **out);

/**
 * Entries evaluated so far, in the bundle file format.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum KcStatus kc_bundle_to_json(const struct KcBundle *b, char **out);

/**
 * # Safety
 * `b` must be NULL or a handle from this library, not yet freed.
 */
void kc_bundle_free(struct KcBundle *b);

/**
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum KcStatus kc_bundle_class_number(const struct KcBundle *b, size_t *out);

/**
 * Norm of `label` as a decimal string.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum KcStatus kc_bundle_recover_norm(const struct KcBundle *b, uint32_t label, char **out);

/**
 * Blind reconstruction; writes the report file as JSON. A `zeta_bound` of
 * 0 selects the default bound.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum KcStatus kc_reconstruct(const struct KcBundle *b, size_t zeta_bound, char **out);

/**
 * Round trip against the ground truth; writes the report as JSON and
 * whether every verdict passed.
 *
 * # Safety
 * `f` must be a live field handle; `out` and `passed` valid pointers.
 */
enum KcStatus kc_roundtrip(const struct KcField *f,
                           uint64_t prime_bound,
                           size_t zeta_bound,
                           char **out,
                           bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCLASS_H */
