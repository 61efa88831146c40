#ifndef SIIRV_H
#define SIIRV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SiirvStatus {
  SIIRV_STATUS_OK = 0,
  SIIRV_STATUS_NULL_POINTER = 1,
  SIIRV_STATUS_INVALID_ARGUMENT = 2,
  SIIRV_STATUS_INVALID_MODEL = 3,
  SIIRV_STATUS_INSUFFICIENT_SAMPLES = 4,
  SIIRV_STATUS_BUDGET_EXCEEDED = 5,
  SIIRV_STATUS_UNSUPPORTED = 6,
  SIIRV_STATUS_NUMERICAL = 7,
  SIIRV_STATUS_IO = 8,
  SIIRV_STATUS_BUFFER_TOO_SMALL = 9,
  SIIRV_STATUS_PANIC = 10,
} SiirvStatus;

typedef enum SiirvAlgorithm {
  SIIRV_ALGORITHM_FOURIER = 0,
  SIIRV_ALGORITHM_EMPIRICAL = 1,
  SIIRV_ALGORITHM_OPTIMAL2 = 2,
  SIIRV_ALGORITHM_OPTIMAL_K = 3,
  SIIRV_ALGORITHM_HEAVY = 4,
  SIIRV_ALGORITHM_SPARSE_FT = 5,
} SiirvAlgorithm;

/*
 A learned hypothesis (dense, sparse-Fourier or Gaussian plus IRV).
 */
typedef struct SiirvHypothesis SiirvHypothesis;

/*
 A k-SIIRV: an ordered list of independent k-IRVs.
 */
typedef struct SiirvModel SiirvModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null if it succeeded.
 The pointer stays valid until the next library call on this thread.
 */
const char *siirv_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must be null or a pointer obtained from this library and not yet freed.
 */
void siirv_string_free(char *s);

/*
 Builds a model from `n` rows of `k` probabilities, stored row-major.

 # Safety
 `probs` must point to `n * k` doubles; `model` must be writable.
 */
enum SiirvStatus siirv_model_new(size_t k,
                                 size_t n,
                                 const double *probs,
                                 struct SiirvModel **model);

/*
 Parses a model from its JSON form `{"k": .., "components": [[..], ..]}`.

 # Safety
 `json` must be a NUL-terminated string; `model` must be writable.
 */
enum SiirvStatus siirv_model_from_json(const char *json, struct SiirvModel **model);

/*
 Serializes a model to JSON; free the result with `siirv_string_free`.

 # Safety
 `model` must be a live handle; `json` must be writable.
 */
enum SiirvStatus siirv_model_to_json(const struct SiirvModel *model, char **json);

/*
 # Safety
 `model` must be null or a live handle, which becomes invalid.
 */
void siirv_model_free(struct SiirvModel *model);

/*
 Support size `k` and number of components `n`.

 # Safety
 `model` must be a live handle; `k` and `n` must be writable.
 */
enum SiirvStatus siirv_model_shape(const struct SiirvModel *model, size_t *k, size_t *n);

/*
 Exact pmf on `0..=n(k-1)`. Writes the required length to `len`; if
 `capacity` is smaller, nothing else is written and `BufferTooSmall` is
 returned, so a call with a null buffer and zero capacity queries the size.

 # Safety
 `model` must be a live handle; `buf` must hold `capacity` doubles.
 */
enum SiirvStatus siirv_model_pmf(const struct SiirvModel *model,
                                 double *buf,
                                 size_t capacity,
                                 size_t *len);

/*
 Draws `count` samples using the generator for `seed`.

 # Safety
 `model` must be a live handle; `buf` must hold `count` values.
 */
enum SiirvStatus siirv_model_sample(const struct SiirvModel *model,
                                    uint64_t seed,
                                    size_t count,
                                    int64_t *buf);

/*
 Learns a hypothesis from draws of `model` (seeded by `seed`). `n_samples`
 may be null; otherwise it receives the number of draws used.

 # Safety
 `model` must be a live handle; `hypothesis` must be writable.
 */
enum SiirvStatus siirv_learn_from_model(const struct SiirvModel *model,
                                        enum SiirvAlgorithm algorithm,
                                        double epsilon,
                                        uint64_t seed,
                                        struct SiirvHypothesis **hypothesis,
                                        size_t *n_samples);

/*
 Learns a hypothesis from a recorded sample stream, consumed in order.
 `Empirical` uses every sample; other algorithms fail with
 `InsufficientSamples` if the stream runs out.

 # Safety
 `samples` must hold `len` values; `hypothesis` must be writable.
 */
enum SiirvStatus siirv_learn_from_samples(const int64_t *samples,
                                          size_t len,
                                          size_t k,
                                          enum SiirvAlgorithm algorithm,
                                          double epsilon,
                                          struct SiirvHypothesis **hypothesis);

/*
 Parses any of the hypothesis JSON forms.

 # Safety
 `json` must be a NUL-terminated string; `hypothesis` must be writable.
 */
enum SiirvStatus siirv_hypothesis_from_json(const char *json, struct SiirvHypothesis **hypothesis);

/*
 # Safety
 `hypothesis` must be a live handle; `json` must be writable.
 */
enum SiirvStatus siirv_hypothesis_to_json(const struct SiirvHypothesis *hypothesis, char **json);

/*
 # Safety
 `hypothesis` must be null or a live handle, which becomes invalid.
 */
void siirv_hypothesis_free(struct SiirvHypothesis *hypothesis);

/*
 Inclusive support window `[lo, hi]`.

 # Safety
 `hypothesis` must be a live handle; `lo` and `hi` must be writable.
 */
enum SiirvStatus siirv_hypothesis_window(const struct SiirvHypothesis *hypothesis,
                                         int64_t *lo,
                                         int64_t *hi);

/*
 Pseudo-pmf value and CDF at `x` (zero / one outside the window as appropriate).
 Either output may be null.

 # Safety
 `hypothesis` must be a live handle.
 */
enum SiirvStatus siirv_hypothesis_eval(const struct SiirvHypothesis *hypothesis,
                                       int64_t x,
                                       double *pmf,
                                       double *cdf);

/*
 Draws `count` values with the binary-search sampler at accuracy `epsilon`.

 # Safety
 `hypothesis` must be a live handle; `buf` must hold `count` values.
 */
enum SiirvStatus siirv_hypothesis_sample(const struct SiirvHypothesis *hypothesis,
                                         double epsilon,
                                         uint64_t seed,
                                         size_t count,
                                         int64_t *buf);

/*
 Total variation distance between a model and a hypothesis (negative
 hypothesis values count at face value).

 # Safety
 Both handles must be live; `tv` must be writable.
 */
enum SiirvStatus siirv_tv_distance(const struct SiirvModel *model,
                                   const struct SiirvHypothesis *hypothesis,
                                   double *tv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIIRV_H */
