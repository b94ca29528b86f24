#ifndef EXPLANATION_SEARCH_H
#define EXPLANATION_SEARCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EsStatus {
  EsStatus_Ok = 0,
  /**
   * A pointer argument was null.
   */
  EsStatus_NullPointer = 1,
  /**
   * An argument was out of range or malformed.
   */
  EsStatus_InvalidArgument = 2,
  /**
   * The requested overlap placement cannot be satisfied.
   */
  EsStatus_InfeasiblePlacement = 3,
  /**
   * Internal failure (including caught panics).
   */
  EsStatus_Internal = 4,
} EsStatus;

/**
 * Opaque belief state over the overlap size.
 */
typedef struct EsPrior EsPrior;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if the last
 * call succeeded. Valid until the next library call on the same thread.
 */
const char *es_last_error_message(void);

/**
 * Expected number of draws until the first explanatory node is found when
 * sampling uniformly without replacement. `n_k` of the `n_r - 1` non-target
 * nodes are explanatory.
 */
enum EsStatus es_expected_time(uintptr_t n_r, uintptr_t n_k, double *out);

/**
 * Number of pmf entries for the success-time distribution: support is
 * `1..=n_r - n_k`.
 */
enum EsStatus es_time_pmf_len(uintptr_t n_r, uintptr_t n_k, uintptr_t *out);

/**
 * Writes the success-time pmf into `out`, which must hold `len` doubles
 * with `len` equal to `es_time_pmf_len`. Entry `i` is the probability that
 * the first explanatory node is drawn at step `i + 1`.
 */
enum EsStatus es_time_pmf(uintptr_t n_r, uintptr_t n_k, double *out, uintptr_t len);

/**
 * Probability that a searcher who stops after `t_stop` unsuccessful draws
 * never finds an explanatory node.
 */
enum EsStatus es_abandonment_probability(uintptr_t n_r,
                                         uintptr_t n_k,
                                         uintptr_t t_stop,
                                         double *out);

/**
 * Uniform prior over overlap sizes `0..=n_r - 1`.
 */
enum EsStatus es_prior_uniform(uintptr_t n_r, struct EsPrior **out);

/**
 * Normal density with the given mean and variance, discretised on
 * `0..=max_size` and renormalised.
 */
enum EsStatus es_prior_truncated_normal(double mean,
                                        double variance,
                                        uintptr_t max_size,
                                        struct EsPrior **out);

/**
 * Prior from explicit non-negative masses over sizes `0..len - 1`;
 * masses are renormalised.
 */
enum EsStatus es_prior_from_masses(const double *masses, uintptr_t len, struct EsPrior **out);

/**
 * Releases a prior handle. Null is ignored.
 */
void es_prior_free(struct EsPrior *prior);

/**
 * Mean overlap size under the prior.
 */
enum EsStatus es_prior_mean(const struct EsPrior *prior, double *out);

/**
 * Expected benefit of the next draw: `b * mean / pool`, where `pool` is
 * the number of unvisited non-target nodes.
 */
enum EsStatus es_prior_expected_benefit(const struct EsPrior *prior,
                                        uintptr_t pool,
                                        double b,
                                        double *out);

/**
 * Posterior after one failed draw from a pool of `pool` candidates,
 * returned as a new handle.
 */
enum EsStatus es_prior_after_failure(const struct EsPrior *prior,
                                     uintptr_t pool,
                                     struct EsPrior **out);

/**
 * First step `t` in `1..=n_r - 1` at which the expected benefit of draw
 * `t` no longer exceeds the constant per-draw cost `c`. Writes 0 to `out`
 * when no such step exists within the horizon.
 */
enum EsStatus es_myopic_stop_time(const struct EsPrior *prior,
                                  uintptr_t n_r,
                                  double b,
                                  double c,
                                  uintptr_t *out);

/**
 * Runs a replicated simulation described by a JSON experiment config and
 * returns the full output (summary plus per-episode records) as JSON.
 * The returned string must be released with `es_string_free`.
 */
enum EsStatus es_simulate_json(const char *config_json, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void es_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPLANATION_SEARCH_H */
