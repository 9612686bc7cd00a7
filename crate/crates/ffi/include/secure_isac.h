#ifndef SECURE_ISAC_H
#define SECURE_ISAC_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum IsacStatus {
  ISAC_STATUS_OK = 0,
  ISAC_STATUS_NULL_POINTER = 1,
  ISAC_STATUS_INVALID_UTF8 = 2,
  ISAC_STATUS_PARSE_ERROR = 3,
  ISAC_STATUS_DOMAIN_ERROR = 4,
  ISAC_STATUS_INVALID_PMF = 5,
  ISAC_STATUS_ALPHABET_MISMATCH = 6,
  ISAC_STATUS_CARDINALITY_EXCEEDED = 7,
  ISAC_STATUS_SOLVER_FAILURE = 8,
  ISAC_STATUS_EMPTY_SWEEP = 9,
  ISAC_STATUS_INVALID_ARGUMENT = 10,
  ISAC_STATUS_IO_ERROR = 11,
  ISAC_STATUS_PANIC = 12,
} IsacStatus;

/**
 * A channel specification together with its input law.
 */
typedef struct IsacChannel IsacChannel;

/**
 * Bounds of one of the four modes for the handle's law. `r1_max` is NaN
 * under full secrecy (modes 3 and 4).
 */
typedef struct IsacBounds {
  double r1_max;
  double r2_prime;
  double r_sec;
  double sum_cap;
  double rate;
  double d1_min;
  double d2_min;
  bool degraded;
  double degraded_residual;
} IsacBounds;

typedef struct IsacDegradedness {
  bool physical;
  double physical_residual;
  bool reverse;
  double reverse_residual;
  bool stochastic;
  double stochastic_residual;
} IsacDegradedness;

/**
 * Rate bound, distortions and the five entropy terms of the binary example:
 * H(S1|Y2,S2), H(Y1|S1,Y2,S2), H(S1|Y1,Y2,S2,X,A), H(X,A), H(X,A|Y1,S1).
 */
typedef struct IsacLemma1 {
  double r_max;
  double d1_min;
  double d2_min;
  double terms[5];
} IsacLemma1;

typedef struct IsacSimulation {
  double d1_analytic;
  double d1_empirical;
  double d2_analytic;
  double d2_empirical;
  double l1_gap;
} IsacSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code (taken as a plain integer so any
 * value is safe to pass). Never null.
 */
const char *isac_status_string(int32_t status);

/**
 * Copies the last error message of the calling thread into `buf` (NUL
 * terminated, truncated to `len` bytes) and returns the full message length
 * excluding the terminator. Passing a null `buf` only queries the length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t isac_last_error(char *buf, size_t len);

/**
 * Parses a TOML channel specification.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IsacStatus isac_channel_from_toml(const char *text, struct IsacChannel **out);

/**
 * Loads a TOML channel specification file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IsacStatus isac_channel_from_file(const char *path, struct IsacChannel **out);

/**
 * The multiplicative-Bernoulli example channel with its input law.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IsacStatus isac_channel_binary_example(double lambda,
                                            double alpha,
                                            double p,
                                            double q,
                                            struct IsacChannel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ch` must be null or a handle from an `isac_channel_*` constructor that
 * has not been freed.
 */
void isac_channel_free(struct IsacChannel *ch);

/**
 * Evaluates mode `theorem` (1-4) for the handle's law.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum IsacStatus isac_theorem_bounds(const struct IsacChannel *ch,
                                    uint8_t theorem,
                                    struct IsacBounds *out);

/**
 * Degradedness checks on the support of the handle's law, or on every input
 * pair when `strict`.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum IsacStatus isac_check_degraded(const struct IsacChannel *ch,
                                    bool strict,
                                    double tol,
                                    struct IsacDegradedness *out);

/**
 * Distortions of the optimal per-letter estimators.
 *
 * # Safety
 * `ch` must be a live handle; `d1` and `d2` valid pointers.
 */
enum IsacStatus isac_minimal_distortions(const struct IsacChannel *ch, double *d1, double *d2);

/**
 * Closed-form rate bound and distortions of the binary example.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IsacStatus isac_lemma1_closed_form(double lambda,
                                        double alpha,
                                        double p,
                                        double q,
                                        struct IsacLemma1 *out);

/**
 * The same quantities from the generic entropy and estimator engine.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IsacStatus isac_lemma1_oracle(double lambda,
                                   double alpha,
                                   double p,
                                   double q,
                                   struct IsacLemma1 *out);

/**
 * Monte Carlo comparison of empirical and analytic distortions with `n`
 * draws; deterministic in `seed`.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum IsacStatus isac_simulate(const struct IsacChannel *ch,
                              uint64_t n,
                              uint64_t seed,
                              struct IsacSimulation *out);

/**
 * Binary entropy in bits of `x` in [0, 1].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IsacStatus isac_binary_entropy(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECURE_ISAC_H */
