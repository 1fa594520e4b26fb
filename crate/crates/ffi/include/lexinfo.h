#ifndef LEXINFO_H
#define LEXINFO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  LEXINFO_STATUS_OK = 0,
  LEXINFO_STATUS_NULL_POINTER = 1,
  LEXINFO_STATUS_INVALID_ARGUMENT = 2,
  LEXINFO_STATUS_IO = 3,
  LEXINFO_STATUS_PARSE = 4,
  LEXINFO_STATUS_CONFIG = 5,
  LEXINFO_STATUS_DATA = 6,
  LEXINFO_STATUS_NOT_FOUND = 7,
  LEXINFO_STATUS_OUT_OF_RANGE = 8,
  LEXINFO_STATUS_PANIC = 9,
} LexinfoStatus;

/**
 * Opaque corpus analysis: cleaned rounds, denotations and word scores.
 */
typedef struct LexinfoAnalysis LexinfoAnalysis;

typedef struct {
  double l;
  double a;
  double b;
} LexinfoLab;

typedef struct {
  /**
   * NUL-terminated UTF-8, owned by the analysis handle.
   */
  const char *word;
  double spread;
  double i_w;
  size_t n_chips;
  bool sampled;
} LexinfoWordInfo;

typedef struct {
  double accuracy;
  double i_l;
  size_t n_interactions;
  size_t vocab_size;
} LexinfoSimResult;

/**
 * Random-intercept fit of informativeness on context ease, with the OLS
 * slope alongside.
 */
typedef struct {
  double intercept;
  double slope;
  double se_slope;
  double t_slope;
  double p_slope;
  double sigma2_residual;
  double sigma2_group;
  double ols_slope;
  double ols_t_slope;
  size_t n;
  size_t n_groups;
  bool converged;
} LexinfoRegression;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none.
 */
const char *lexinfo_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lexinfo_version(void);

/**
 * HSL (hue in degrees, saturation and lightness in [0, 1]) to CIELAB.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_hsl_to_lab(double h, double s, double l, LexinfoLab *out);

/**
 * sRGB channels in [0, 1] to CIELAB (D65).
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_srgb_to_lab(double r, double g, double b, LexinfoLab *out);

double lexinfo_lab_distance(LexinfoLab a, LexinfoLab b);

/**
 * Exact mean pairwise distance of `n` chips.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_spread(const LexinfoLab *chips_ptr, size_t n, double *out);

/**
 * Word informativeness of a chip set with the default sampling settings.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_informativeness(const LexinfoLab *chips_ptr,
                                      size_t n,
                                      uint64_t seed,
                                      double *out);

/**
 * Loads the corpus named by a TOML run config and scores its words.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_analysis_open(const char *config_path, LexinfoAnalysis **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
void lexinfo_analysis_free(LexinfoAnalysis *h);

/**
 * Number of clean rounds, or 0 for a null handle.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
size_t lexinfo_analysis_round_count(const LexinfoAnalysis *h);

/**
 * Number of scored words, or 0 for a null handle.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
size_t lexinfo_analysis_word_count(const LexinfoAnalysis *h);

/**
 * Word at `index` in descending informativeness order.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_analysis_word_info(const LexinfoAnalysis *h,
                                         size_t index,
                                         LexinfoWordInfo *out);

/**
 * Informativeness of a word by name.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_analysis_word_iw(const LexinfoAnalysis *h, const char *word, double *out);

/**
 * `variant` is a `LexinfoVariant` value.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_analysis_simulate(const LexinfoAnalysis *h,
                                        uint32_t variant,
                                        LexinfoSimResult *out);

/**
 * `subset` is a `LexinfoSubset` value and `group` a `LexinfoGroupBy` value.
 *
 * # Safety
 * Pointer arguments must be null or valid for the reads and writes described.
 */
LexinfoStatus lexinfo_analysis_regress(const LexinfoAnalysis *h,
                                       uint32_t subset,
                                       uint32_t group,
                                       LexinfoRegression *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEXINFO_H */
