#ifndef REVTIDY_H
#define REVTIDY_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RevtidyStatus {
  REVTIDY_STATUS_OK = 0,
  REVTIDY_STATUS_NULL_ARGUMENT = 1,
  REVTIDY_STATUS_INVALID_UTF8 = 2,
  REVTIDY_STATUS_PARSE_ERROR = 3,
  REVTIDY_STATUS_INVALID_INPUT = 4,
  REVTIDY_STATUS_NOT_REVERSIBLE = 5,
  REVTIDY_STATUS_NO_TIDIER = 6,
  REVTIDY_STATUS_PANIC = 7,
} RevtidyStatus;

/**
 * A reversible circuit.
 */
typedef struct RevtidyCircuit RevtidyCircuit;

/**
 * A parsed boolean program.
 */
typedef struct RevtidyProgram RevtidyProgram;

/**
 * A validated branch specification.
 */
typedef struct RevtidySpec RevtidySpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next `revtidy_*` call on the same thread.
 */
const char *revtidy_last_error(void);

/**
 * Frees a string returned by this library.
 */
void revtidy_string_free(char *s);

enum RevtidyStatus revtidy_program_parse(const char *src, struct RevtidyProgram **out);

void revtidy_program_free(struct RevtidyProgram *p);

/**
 * Compiles a program into a reversible circuit with role annotations.
 */
enum RevtidyStatus revtidy_program_embed(const struct RevtidyProgram *p,
                                         struct RevtidyCircuit **out);

enum RevtidyStatus revtidy_circuit_parse(const char *src, struct RevtidyCircuit **out);

void revtidy_circuit_free(struct RevtidyCircuit *c);

enum RevtidyStatus revtidy_circuit_width(const struct RevtidyCircuit *c, size_t *out);

enum RevtidyStatus revtidy_circuit_reverse(const struct RevtidyCircuit *c,
                                           struct RevtidyCircuit **out);

enum RevtidyStatus revtidy_circuit_tidy(const struct RevtidyCircuit *c,
                                        struct RevtidyCircuit **out);

/**
 * Evaluates the circuit on `width` bytes of 0/1 in `input`, writing `width`
 * bytes to `output`.
 */
enum RevtidyStatus revtidy_circuit_evaluate(const struct RevtidyCircuit *c,
                                            const uint8_t *input,
                                            uint8_t *output,
                                            size_t width);

/**
 * Serializes the circuit in `.rvc` text form. Free with
 * [`revtidy_string_free`].
 */
enum RevtidyStatus revtidy_circuit_to_text(const struct RevtidyCircuit *c, char **out);

enum RevtidyStatus revtidy_spec_parse_json(const char *src, struct RevtidySpec **out);

void revtidy_spec_free(struct RevtidySpec *s);

/**
 * Full analyzer report as JSON. Free with [`revtidy_string_free`].
 */
enum RevtidyStatus revtidy_spec_analyze_json(const struct RevtidySpec *s, double tol, char **out);

/**
 * Writes whether a tidier exists and the largest `|⟨i|j⟩(1 − ⟨O(i)|O(j)⟩)|`.
 */
enum RevtidyStatus revtidy_spec_check_tidy(const struct RevtidySpec *s,
                                           double tol,
                                           bool *possible,
                                           double *residual);

/**
 * Constructs and verifies a tidying procedure, returned as JSON.
 */
enum RevtidyStatus revtidy_spec_tidier_json(const struct RevtidySpec *s, double tol, char **out);

/**
 * Landauer cost in units of kT·ln2 of resetting the aux register.
 */
enum RevtidyStatus revtidy_spec_erasure_cost(const struct RevtidySpec *s, bool tidied, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REVTIDY_H */
