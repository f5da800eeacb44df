#ifndef JACOBI_CIRCUIT_H
#define JACOBI_CIRCUIT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JcOracle {
  JC_ORACLE_CLASSICAL = 0,
  JC_ORACLE_SIMULATOR = 1,
} JcOracle;

typedef enum JcStatus {
  JC_STATUS_OK = 0,
  JC_STATUS_NULL_POINTER = 1,
  JC_STATUS_INVALID_ARGUMENT = 2,
  JC_STATUS_BAD_MODULUS = 3,
  JC_STATUS_CAP_EXCEEDED = 4,
  JC_STATUS_INVARIANT_VIOLATION = 5,
  JC_STATUS_BUDGET_EXCEEDED = 6,
  JC_STATUS_PANIC = 7,
} JcStatus;

/**
 * Streamed Jacobi evaluator with a fixed block width.
 */
typedef struct JcEngine JcEngine;

/**
 * Result of a special-integer factorization.
 */
typedef struct JcFactorization JcFactorization;

/**
 * Result of one exact circuit simulation.
 */
typedef struct JcSimulation JcSimulation;

/**
 * Operation counts of one streamed evaluation.
 */
typedef struct JcCost {
  bool streamed;
  uint64_t block_bits;
  uint64_t n_padded;
  uint64_t block_iterations;
  uint64_t peak_window_bits;
  uint64_t mbit_mults;
  uint64_t mbit_adds;
  uint64_t base_case_bits;
} JcCost;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *jc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void jc_string_free(char *s);

/**
 * Reference Jacobi symbol `(x / n)` written to `out` as -1, 0 or 1.
 *
 * # Safety
 * `x` and `n` must be NUL-terminated strings; `out` must be writable.
 */
enum JcStatus jc_jacobi(const char *x, const char *n, int32_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum JcStatus jc_engine_new(uint64_t block_bits, struct JcEngine **out);

/**
 * Streamed `(x / n)`; `cost` may be null.
 *
 * # Safety
 * `engine` must come from [`jc_engine_new`]; `x`, `n` must be NUL-terminated
 * strings; `out` must be writable and `cost` null or writable.
 */
enum JcStatus jc_engine_eval(const struct JcEngine *engine,
                             const char *x,
                             const char *n,
                             int32_t *out,
                             struct JcCost *cost);

/**
 * # Safety
 * `engine` must be null or come from [`jc_engine_new`], not yet freed.
 */
void jc_engine_free(struct JcEngine *engine);

/**
 * Exact simulation of the factoring circuit on odd `n` with bound `b_max`.
 * `ell = 0` derives the register width from `b_max`; `cutoff` is the
 * trial-division bound applied first.
 *
 * # Safety
 * `n`, `b_max` must be NUL-terminated strings; `out` must be writable.
 */
enum JcStatus jc_simulation_run(const char *n,
                                const char *b_max,
                                uint32_t ell,
                                uint64_t cutoff,
                                struct JcSimulation **out);

/**
 * Probability that post-processing returns the true squarefree part.
 *
 * # Safety
 * `sim` must come from [`jc_simulation_run`]; `out` must be writable.
 */
enum JcStatus jc_simulation_success_prob(const struct JcSimulation *sim, double *out);

/**
 * Full simulation report as a JSON string, freed with [`jc_string_free`].
 *
 * # Safety
 * `sim` must come from [`jc_simulation_run`]; `out` must be writable.
 */
enum JcStatus jc_simulation_json(const struct JcSimulation *sim, char **out);

/**
 * # Safety
 * `sim` must be null or come from [`jc_simulation_run`], not yet freed.
 */
void jc_simulation_free(struct JcSimulation *sim);

/**
 * Factors `n`, whose prime exponents must be pairwise distinct. `t = 0`
 * picks the default repetition count. Aborted runs still return a handle;
 * check [`jc_factorization_ok`].
 *
 * # Safety
 * `n` must be a NUL-terminated string; `out` must be writable.
 */
enum JcStatus jc_special_factor(const char *n,
                                enum JcOracle oracle,
                                uint32_t t,
                                uint64_t seed,
                                struct JcFactorization **out);

/**
 * True when the run finished and the factorization multiplies back to `n`.
 *
 * # Safety
 * `f` must be null or come from [`jc_special_factor`].
 */
bool jc_factorization_ok(const struct JcFactorization *f);

/**
 * Number of distinct primes found.
 *
 * # Safety
 * `f` must be null or come from [`jc_special_factor`].
 */
size_t jc_factorization_len(const struct JcFactorization *f);

/**
 * Number of boosted-oracle invocations the run made.
 *
 * # Safety
 * `f` must be null or come from [`jc_special_factor`].
 */
uint32_t jc_factorization_oracle_calls(const struct JcFactorization *f);

/**
 * Entry `index` in ascending prime order. The prime string is freed with
 * [`jc_string_free`].
 *
 * # Safety
 * `f` must come from [`jc_special_factor`]; `prime` and `exponent` must be writable.
 */
enum JcStatus jc_factorization_entry(const struct JcFactorization *f,
                                     size_t index,
                                     char **prime,
                                     uint32_t *exponent);

/**
 * # Safety
 * `f` must be null or come from [`jc_special_factor`], not yet freed.
 */
void jc_factorization_free(struct JcFactorization *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JACOBI_CIRCUIT_H */
