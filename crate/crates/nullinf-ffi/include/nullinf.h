#ifndef NULLINF_H
#define NULLINF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NullinfStatus {
  NULLINF_STATUS_OK = 0,
  NULLINF_STATUS_NULL_POINTER = 1,
  NULLINF_STATUS_INVALID_ARGUMENT = 2,
  NULLINF_STATUS_CONFIG = 3,
  NULLINF_STATUS_DOMAIN = 4,
  NULLINF_STATUS_THRESHOLD_VIOLATION = 5,
  NULLINF_STATUS_NUMERICAL = 6,
  NULLINF_STATUS_IO = 7,
  NULLINF_STATUS_NOT_FOUND = 8,
  NULLINF_STATUS_PANIC = 9,
} NullinfStatus;

typedef enum NullinfChart {
  NULLINF_CHART_NEAR_I0 = 0,
  NULLINF_CHART_NEAR_IPLUS = 1,
} NullinfChart;

// Parsed and validated experiment configuration.
typedef struct NullinfConfig NullinfConfig;

// Tables and summary values of one experiment run.
typedef struct NullinfResults NullinfResults;

// Orders and weights for threshold checks; same meaning as the `[weights]`
// config section.
typedef struct NullinfWeights {
  double s;
  double s0;
  double alpha0;
  double alpha_i;
  double alpha_plus;
  double p1bar;
  double p1bar_plus;
  uint32_t n;
  double gamma_i;
  double im_lambda;
} NullinfWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if there was none.
// The pointer stays valid until the next failing call on the same thread.
const char *nullinf_last_error(void);

// Library version as a static string.
const char *nullinf_version(void);

// Parse a TOML experiment configuration. `origin` labels error locations and
// may be null.
//
// # Safety
// `text` and `origin` are null or NUL-terminated; `out` is null or writable.
enum NullinfStatus nullinf_config_parse(const char *text,
                                        const char *origin,
                                        struct NullinfConfig **out);

// Override the random seed of a parsed configuration.
//
// # Safety
// `config` is null or a live handle from [`nullinf_config_parse`].
enum NullinfStatus nullinf_config_set_seed(struct NullinfConfig *config, uint64_t seed);

// # Safety
// `config` is null or a live handle; it must not be used afterwards.
void nullinf_config_free(struct NullinfConfig *config);

// Run the experiment named by the configuration's `kind`.
//
// # Safety
// `config` is null or a live handle; `out` is null or writable.
enum NullinfStatus nullinf_run(const struct NullinfConfig *config, struct NullinfResults **out);

// # Safety
// `results` is null or a live handle; it must not be used afterwards.
void nullinf_results_free(struct NullinfResults *results);

// Numeric summary value `key`; booleans read as 0 or 1.
//
// # Safety
// `results` is null or a live handle; `key` is null or NUL-terminated;
// `value` is null or writable.
enum NullinfStatus nullinf_results_summary(const struct NullinfResults *results,
                                           const char *key,
                                           double *value);

// Number of rows of table `table`.
//
// # Safety
// Pointers are null or valid as for [`nullinf_results_summary`].
enum NullinfStatus nullinf_results_rows(const struct NullinfResults *results,
                                        const char *table,
                                        size_t *rows);

// Copy a numeric column into `buf`. `len` receives the row count; when it
// exceeds `capacity` nothing is copied and `NULLINF_STATUS_INVALID_ARGUMENT`
// is returned. Non-numeric cells are copied as NaN.
//
// # Safety
// `buf` is null (with `capacity` 0) or has room for `capacity` doubles;
// other pointers as for [`nullinf_results_summary`].
enum NullinfStatus nullinf_results_column(const struct NullinfResults *results,
                                          const char *table,
                                          const char *column,
                                          double *buf,
                                          size_t capacity,
                                          size_t *len);

// The full result set as JSON; release with [`nullinf_string_free`].
//
// # Safety
// `results` is null or a live handle; `out` is null or writable.
enum NullinfStatus nullinf_results_to_json(const struct NullinfResults *results, char **out);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void nullinf_string_free(char *s);

// Chart coordinates `(rho, x)` of the point at time `t` and radius `r`.
//
// # Safety
// `rho` and `x` are null or writable.
enum NullinfStatus nullinf_to_chart(enum NullinfChart chart,
                                    double t_shift,
                                    double t,
                                    double r,
                                    double *rho,
                                    double *x);

// Time `t` and radius `r` of the interior chart point `(rho, x)`.
//
// # Safety
// `t` and `r` are null or writable.
enum NullinfStatus nullinf_from_chart(enum NullinfChart chart,
                                      double t_shift,
                                      double rho,
                                      double x,
                                      double *t,
                                      double *r);

// Default weights (`s = 1`, `s0 = 1/2`, `n = 3`, all others 0).
struct NullinfWeights nullinf_weights_default(void);

// Evaluate the conditions of theorem `tag`. `pass` is set to whether all hold;
// `failed` (optional) receives the number of failing conditions. A failing
// check is not an error; the failing names are available from
// [`nullinf_last_error`] only when `pass` is false.
//
// # Safety
// `tag` is null or NUL-terminated; `weights` is null or readable; `pass` is
// null or writable; `failed` is null or writable.
enum NullinfStatus nullinf_threshold_check(const char *tag,
                                           const struct NullinfWeights *weights,
                                           bool *pass,
                                           size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NULLINF_H */
