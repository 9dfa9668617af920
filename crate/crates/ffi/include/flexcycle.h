#ifndef FLEXCYCLE_H
#define FLEXCYCLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_ARGUMENT = 1,
  FC_STATUS_INVALID_UTF8 = 2,
  FC_STATUS_INVALID_MODEL = 3,
  FC_STATUS_DISCONNECTED_STRUCTURE = 4,
  FC_STATUS_MULTIGRAPH = 5,
  FC_STATUS_DOMAIN = 6,
  FC_STATUS_EMPTY_GRAPH = 7,
  FC_STATUS_INSUFFICIENT_CYCLES = 8,
  FC_STATUS_UNSUPPORTED3D = 9,
  FC_STATUS_RANK_DEFICIENT = 10,
  FC_STATUS_LOAD_ON_GROUND = 11,
  FC_STATUS_DIMENSION = 12,
  FC_STATUS_NOT_SYMMETRIC = 13,
  FC_STATUS_NOT_POSITIVE_DEFINITE = 14,
  FC_STATUS_ZERO_ROW = 15,
  FC_STATUS_CHOPPED_PIVOT_BREAKDOWN = 16,
  FC_STATUS_PARSE = 17,
  FC_STATUS_IO = 18,
  FC_STATUS_USAGE = 19,
  FC_STATUS_BUFFER_TOO_SMALL = 20,
  FC_STATUS_OUT_OF_RANGE = 21,
  FC_STATUS_PANIC = 22,
} FcStatus;

/**
 * Section pattern codes for [`fc_model_grid`].
 */
typedef enum FcPattern {
  FC_PATTERN_HOMOGENEOUS = 0,
  FC_PATTERN_WEAK_BEAMS = 1,
  FC_PATTERN_WEAK_COLUMNS = 2,
  FC_PATTERN_CHECKER = 3,
} FcPattern;

typedef struct FcBasis FcBasis;

/**
 * A frame and its grounded graph.
 */
typedef struct FcModel FcModel;

typedef struct FcReport FcReport;

typedef struct FcCondition {
  double pl;
  double pn;
  double pn_log10;
  double pdet;
  double pdet_log10;
} FcCondition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fc_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next `fc_*` call on the same thread.
 */
const char *fc_last_error_message(void);

/**
 * Parse a frame from TOML text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `out` must be writable.
 */
enum FcStatus fc_model_from_toml(const char *toml, struct FcModel **out);

/**
 * Read a frame file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FcStatus fc_model_from_file(const char *path, struct FcModel **out);

/**
 * Rectangular grid frame with 3 m bays and stories; `depth_spans == 0`
 * gives a planar frame. `pattern` is an [`FcPattern`] code.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcStatus fc_model_grid(uint32_t stories,
                            uint32_t spans,
                            uint32_t depth_spans,
                            uint32_t pattern,
                            struct FcModel **out);

/**
 * # Safety
 * `model` must come from an `fc_model_*` constructor or be NULL.
 */
void fc_model_free(struct FcModel *model);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_model_member_count(const struct FcModel *model, size_t *out);

/**
 * First Betti number of the grounded graph.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_model_cycle_rank(const struct FcModel *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_model_is_planar(const struct FcModel *model, bool *out);

/**
 * Cycle basis by algorithm 1–5 (5 with weight-descending order and
 * alpha 2), or the spanning-tree baseline for 0.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_basis_generate(const struct FcModel *model,
                                uint8_t algorithm,
                                struct FcBasis **out);

/**
 * # Safety
 * `basis` must come from [`fc_basis_generate`] or be NULL.
 */
void fc_basis_free(struct FcBasis *basis);

/**
 * # Safety
 * `basis` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_basis_len(const struct FcBasis *basis, size_t *out);

/**
 * Nonzero count of D = CCᵗ.
 *
 * # Safety
 * `basis` must be a live handle; `out` must be writable.
 */
enum FcStatus fc_basis_xd(const struct FcBasis *basis, size_t *out);

/**
 * Member positions (0-based, model order) of cycle `index`. `len` always
 * receives the cycle length; with a short buffer nothing is copied and
 * `FC_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `basis` must be a live handle; `buf` must hold `cap` elements (or be NULL
 * when `cap` is 0); `len` must be writable.
 */
enum FcStatus fc_basis_cycle_members(const struct FcBasis *basis,
                                     size_t index,
                                     size_t *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Flexibility matrix G = B₁ᵀFₘB₁ of a planar model, row-major. `dim`
 * always receives the order of G; `buf` must hold `dim * dim` values.
 *
 * # Safety
 * `model` and `basis` must be live handles, the basis generated from the
 * model; `buf` must hold `cap` values; `dim` must be writable.
 */
enum FcStatus fc_flexibility_matrix(const struct FcModel *model,
                                    const struct FcBasis *basis,
                                    double *buf,
                                    size_t cap,
                                    size_t *dim);

/**
 * PL, PN and PDET of a symmetric positive definite `n`×`n` row-major matrix.
 *
 * # Safety
 * `a` must hold `n * n` values; `out` must be writable.
 */
enum FcStatus fc_condition(const double *a, size_t n, struct FcCondition *out);

/**
 * Side-by-side comparison of `count` algorithms (0 = baseline, 1–5) as a
 * table, or CSV when `csv` is true.
 *
 * # Safety
 * `model` must be a live handle; `algorithms` must hold `count` entries;
 * `out` must be writable.
 */
enum FcStatus fc_report_compare(const struct FcModel *model,
                                const uint8_t *algorithms,
                                size_t count,
                                bool csv,
                                struct FcReport **out);

/**
 * Report text; valid while the report lives.
 *
 * # Safety
 * `report` must be a live handle or NULL.
 */
const char *fc_report_text(const struct FcReport *report);

/**
 * # Safety
 * `report` must come from [`fc_report_compare`] or be NULL.
 */
void fc_report_free(struct FcReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLEXCYCLE_H */
