#ifndef POISSON_FORGE_H
#define POISSON_FORGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_UTF8 = 2,
  /**
   * Configuration could not be read, parsed or validated.
   */
  PF_STATUS_CONFIG = 3,
  /**
   * A computation rejected its input.
   */
  PF_STATUS_COMPUTE = 4,
  /**
   * A named check does not exist.
   */
  PF_STATUS_UNKNOWN_CHECK = 5,
  /**
   * The output buffer is too small; the required length was written.
   */
  PF_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A verification ran and at least one check failed.
   */
  PF_STATUS_CHECK_FAILED = 7,
  PF_STATUS_PANIC = 99,
} PfStatus;

/**
 * Poisson structure together with its coordinate names.
 */
typedef struct PfStructure PfStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *pf_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` is null or a pointer obtained from this library and not yet freed.
 */
void pf_string_free(char *s);

/**
 * Lie-Poisson structure of a builtin algebra: `so3`, `heisenberg`, `so3+r`
 * or `abelian:<n>`.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is writable.
 */
enum PfStatus pf_structure_linear(const char *name, struct PfStructure **out);

/**
 * Structure described by the `[algebra]` and `[structure]` sections of a
 * TOML or JSON run configuration.
 *
 * # Safety
 * `path` is a NUL-terminated string; `out` is writable.
 */
enum PfStatus pf_structure_from_config(const char *path, struct PfStructure **out);

/**
 * # Safety
 * `s` is null or a handle from this library not yet freed.
 */
void pf_structure_free(struct PfStructure *s);

/**
 * Number of coordinates, or 0 for a null handle.
 *
 * # Safety
 * `s` is null or a live handle.
 */
size_t pf_structure_dim(const struct PfStructure *s);

/**
 * `{F, G}` as text in the structure's coordinate names.
 *
 * # Safety
 * `s` is a live handle; `f`, `g` are NUL-terminated; `out` is writable.
 */
enum PfStatus pf_bracket(const struct PfStructure *s, const char *f, const char *g, char **out);

/**
 * Exact Jacobiator `{F,{G,H}} + {G,{H,F}} + {H,{F,G}}` as text.
 *
 * # Safety
 * `s` is a live handle; `f`, `g`, `h` are NUL-terminated; `out` is writable.
 */
enum PfStatus pf_jacobiator(const struct PfStructure *s,
                            const char *f,
                            const char *g,
                            const char *h,
                            char **out);

/**
 * Runs every task of a configuration and writes the JSON report to
 * `report`. Returns `CheckFailed` (with the report still written) when any
 * check fails.
 *
 * # Safety
 * `path` is NUL-terminated; `report` is writable.
 */
enum PfStatus pf_verify(const char *path, bool parallel, char **report);

/**
 * Anchor and identity of a named check, one per line.
 *
 * # Safety
 * `name` is NUL-terminated; `out` is writable.
 */
enum PfStatus pf_explain(const char *name, char **out);

/**
 * Holonomy over `[0, time]` of a trigonometric loop given as JSON
 * (`{"k": .., "N": .., "a0": [..], "cos": [[n, [..]]], "sin": [[n, [..]]]}`)
 * in the builtin group `group` (`so2`, `so3`, `su2`, `u2`, `torus2`).
 * Writes the row-major matrix into `buf` and its side length to `side`.
 *
 * # Safety
 * `group`, `loop_json` are NUL-terminated; `buf` holds `cap` doubles;
 * `side` is writable.
 */
enum PfStatus pf_holonomy(const char *group,
                          const char *loop_json,
                          double time,
                          double step,
                          double *buf,
                          size_t cap,
                          size_t *side);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POISSON_FORGE_H */
