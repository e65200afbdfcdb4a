#ifndef SNFC_H
#define SNFC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SnfcStatus {
  SNFC_STATUS_OK = 0,
  SNFC_STATUS_NULL_ARGUMENT = 1,
  SNFC_STATUS_INVALID_UTF8 = 2,
  SNFC_STATUS_MALFORMED_INPUT = 3,
  /**
   * Cycles, misplaced sources or sinks, nodes cut off from the sink.
   */
  SNFC_STATUS_INVALID_NETWORK = 4,
  SNFC_STATUS_UNKNOWN_NAME = 5,
  SNFC_STATUS_FIELD_ERROR = 6,
  SNFC_STATUS_LINEAR_ALGEBRA = 7,
  SNFC_STATUS_CUT_ERROR = 8,
  SNFC_STATUS_TOO_LARGE = 9,
  SNFC_STATUS_RATE_INFEASIBLE = 10,
  SNFC_STATUS_CONSTRUCTION_FAILED = 11,
  SNFC_STATUS_SHAPE_MISMATCH = 12,
  SNFC_STATUS_IO = 13,
  SNFC_STATUS_PANIC = 14,
} SnfcStatus;

/**
 * A secure sum code together with the network it runs on.
 */
typedef struct SnfcCode SnfcCode;

/**
 * A validated network.
 */
typedef struct SnfcNetwork SnfcNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a network from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SnfcStatus snfc_network_from_json(const char *json, struct SnfcNetwork **out);

/**
 * One of the built-in networks: "line", "n1", "butterfly", "fig2".
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SnfcStatus snfc_network_builtin(const char *name, struct SnfcNetwork **out);

/**
 * # Safety
 * `net` must come from this library and not be used afterwards; null is ignored.
 */
void snfc_network_free(struct SnfcNetwork *net);

/**
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_network_edge_count(const struct SnfcNetwork *net, size_t *out);

/**
 * Minimum over the sources of the source-to-sink min-cut.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_c_min(const struct SnfcNetwork *net, size_t *out);

/**
 * Size of the smallest cut set C whose upstream sources are all cut off.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_c_min_bar(const struct SnfcNetwork *net, size_t *out);

/**
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_upper_bound(const struct SnfcNetwork *net, size_t r, size_t *out);

/**
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_lower_bound(const struct SnfcNetwork *net, size_t r, size_t *out);

/**
 * Full bound report as JSON. Free the string with [`snfc_string_free`].
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_bound_json(const struct SnfcNetwork *net, size_t r, char **out);

/**
 * Builds a secure code at security level `r`. `rate` 0 picks C_min;
 * `field` may be null (search over GF(2^L)) or a string like "2^4".
 *
 * # Safety
 * `net` must be a live handle, `field` null or a NUL-terminated string,
 * and `out` a valid pointer.
 */
enum SnfcStatus snfc_construct(const struct SnfcNetwork *net,
                               size_t r,
                               size_t rate,
                               const char *field,
                               uint64_t seed,
                               struct SnfcCode **out);

/**
 * Loads a code file for `net`.
 *
 * # Safety
 * `net` must be a live handle, `json` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum SnfcStatus snfc_code_from_json(const struct SnfcNetwork *net,
                                    const char *json,
                                    struct SnfcCode **out);

/**
 * Serializes a code. Free the string with [`snfc_string_free`].
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum SnfcStatus snfc_code_to_json(const struct SnfcCode *code, char **out);

/**
 * # Safety
 * `code` must come from this library and not be used afterwards; null is ignored.
 */
void snfc_code_free(struct SnfcCode *code);

/**
 * Runs the verification checks at security level `r` and writes the JSON
 * report. With `exhaustive`, the brute-force pass runs when the state
 * count is at most `cap` (0 means the default cap).
 *
 * # Safety
 * `code` must be a live handle; `out_json` and `all_pass` valid pointers
 * (either may be null to skip it).
 */
enum SnfcStatus snfc_verify(const struct SnfcCode *code,
                            size_t r,
                            bool exhaustive,
                            uint64_t cap,
                            bool *all_pass,
                            char **out_json);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void snfc_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *snfc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNFC_H */
