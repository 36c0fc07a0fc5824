#ifndef MEALYDC_H
#define MEALYDC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MdcStatus {
  /**
   * The operation succeeded; for law checks, the laws hold.
   */
  MDC_STATUS_OK = 0,
  /**
   * The laws were checked and fail; the report carries a witness.
   */
  MDC_STATUS_VIOLATION = 1,
  /**
   * Malformed JSON, a bad document, or mismatched boundaries.
   */
  MDC_STATUS_INVALID_INPUT = 2,
  /**
   * A required pointer argument was null.
   */
  MDC_STATUS_NULL_POINTER = 3,
  /**
   * The requested enumeration exceeds the candidate budget.
   */
  MDC_STATUS_BUDGET_EXCEEDED = 4,
  /**
   * An internal invariant failed; the handle is still valid.
   */
  MDC_STATUS_INTERNAL_ERROR = 5,
} MdcStatus;

/**
 * Opaque handle to a Mealy machine.
 */
typedef struct MdcMachine MdcMachine;

/**
 * Opaque handle to a monad in the double category.
 */
typedef struct MdcMonad MdcMonad;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *mdc_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void mdc_string_free(char *s);

/**
 * Parses a machine document. On success writes a new handle to `out`.
 */
enum MdcStatus mdc_machine_from_json(const char *json, struct MdcMachine **out);

/**
 * Serializes a machine back to its JSON document.
 */
enum MdcStatus mdc_machine_to_json(const struct MdcMachine *machine, char **out);

/**
 * Releases a machine handle. Null is ignored.
 */
void mdc_machine_free(struct MdcMachine *machine);

/**
 * Input alphabet size; 0 when the handle is null.
 */
size_t mdc_machine_input_size(const struct MdcMachine *machine);

/**
 * Output alphabet size; 0 when the handle is null.
 */
size_t mdc_machine_output_size(const struct MdcMachine *machine);

/**
 * State count; 0 when the handle is null.
 */
size_t mdc_machine_state_count(const struct MdcMachine *machine);

/**
 * Runs a machine from `state` over `word` (length `len`). Writes the
 * output word to `out_word`, which must hold `len` entries, and the
 * final state to `out_state`. `word` and `out_word` may be null when
 * `len` is 0.
 */
enum MdcStatus mdc_machine_run(const struct MdcMachine *machine,
                               size_t state,
                               const size_t *word,
                               size_t len,
                               size_t *out_word,
                               size_t *out_state);

/**
 * Cascade composition: the output of `first` feeds `second`. Fails with
 * `MDC_STATUS_INVALID_INPUT` when the boundaries do not match.
 */
enum MdcStatus mdc_machine_compose(const struct MdcMachine *first,
                                   const struct MdcMachine *second,
                                   struct MdcMachine **out);

/**
 * Parses a monad document. On success writes a new handle to `out`.
 */
enum MdcStatus mdc_monad_from_json(const char *json, struct MdcMonad **out);

/**
 * Releases a monad handle. Null is ignored.
 */
void mdc_monad_free(struct MdcMonad *monad);

/**
 * Checks the monad laws. Returns `MDC_STATUS_OK` when they hold and
 * `MDC_STATUS_VIOLATION` otherwise; when `report` is non-null a JSON
 * report with the failing axiom and witness is written to it either way.
 */
enum MdcStatus mdc_monad_check(const struct MdcMonad *monad, char **report);

/**
 * Counts the monads on the identity machine profile with the given
 * alphabet and state sizes. Fails with `MDC_STATUS_BUDGET_EXCEEDED`
 * when the candidate space is too large to enumerate.
 */
enum MdcStatus mdc_enumerate_monads_count(size_t alphabet, size_t states, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEALYDC_H */
