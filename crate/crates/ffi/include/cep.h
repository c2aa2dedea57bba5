#ifndef CEP_H
#define CEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an order query.
 */
typedef enum CepOrder {
  CEP_ORDER_HOLDS = 0,
  CEP_ORDER_FAILS = 1,
  CEP_ORDER_NOT_APPLICABLE = 2,
  CEP_ORDER_UNKNOWN = 3,
} CepOrder;

/**
 * Result of a library call.
 */
typedef enum CepStatus {
  CEP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CEP_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CEP_STATUS_INVALID_UTF8 = 2,
  /**
   * The proof document could not be read.
   */
  CEP_STATUS_PARSE = 3,
  /**
   * A node or value name does not exist in the proof.
   */
  CEP_STATUS_UNKNOWN_NAME = 4,
  /**
   * The analysis itself failed.
   */
  CEP_STATUS_ANALYSIS = 5,
  /**
   * An internal error; the library state is unaffected.
   */
  CEP_STATUS_PANIC = 6,
} CepStatus;

/**
 * A parsed proof graph.
 */
typedef struct CepProof CepProof;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *cep_version(void);

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. Valid until the next library call on the same thread.
 */
const char *cep_last_error(void);

/**
 * Parses a JSON proof document of `len` bytes into a new handle.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be writable.
 */
enum CepStatus cep_proof_parse(const uint8_t *data, size_t len, struct CepProof **out);

/**
 * Releases a proof handle. Null is ignored.
 *
 * # Safety
 * `proof` must come from `cep_proof_parse` and not be freed twice.
 */
void cep_proof_free(struct CepProof *proof);

/**
 * Number of nodes, 0 for a null handle.
 *
 * # Safety
 * `proof` must be null or a live handle.
 */
size_t cep_proof_node_count(const struct CepProof *proof);

/**
 * Checks well-formedness. Either output may be null.
 *
 * # Safety
 * `proof` must be a live handle; non-null outputs must be writable.
 */
enum CepStatus cep_proof_validate(const struct CepProof *proof,
                                  bool *out_clean,
                                  bool *out_trace_injective);

/**
 * Checks global soundness. When `out_report` is not null it receives a
 * JSON report to be released with `cep_string_free`.
 *
 * # Safety
 * `proof` must be a live handle; non-null outputs must be writable.
 */
enum CepStatus cep_soundness(const struct CepProof *proof, bool *out_sound, char **out_report);

/**
 * Decides whether consequent value `con` is below antecedent value `ant`
 * at `node`, strictly when `strict` is set. `lag_cap` 0 picks the default
 * cap. When `out_report` is not null it receives a JSON report to be
 * released with `cep_string_free`.
 *
 * # Safety
 * `proof` must be a live handle, the names NUL-terminated strings and
 * non-null outputs writable.
 */
enum CepStatus cep_decide_order(const struct CepProof *proof,
                                const char *node,
                                const char *ant,
                                const char *con,
                                bool strict,
                                uint64_t lag_cap,
                                enum CepOrder *out_order,
                                char **out_report);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CEP_H */
