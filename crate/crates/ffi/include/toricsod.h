#ifndef TORICSOD_H
#define TORICSOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsReportKind {
  TS_REPORT_KIND_ANALYZE = 0,
  TS_REPORT_KIND_RESOLVE = 1,
  TS_REPORT_KIND_SOD = 2,
  TS_REPORT_KIND_BRAUER = 3,
  TS_REPORT_KIND_GENERATORS = 4,
} TsReportKind;

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_FAN = 2,
  TS_STATUS_INVALID_ARGUMENT = 3,
  TS_STATUS_OBSTRUCTION = 4,
  TS_STATUS_INTERNAL = 5,
  TS_STATUS_PANIC = 6,
} TsStatus;

/**
 * Opaque handle to a validated complete fan.
 */
typedef struct TsFan TsFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *ts_last_error(void);

/**
 * Builds a fan from `n` rays stored as `xy[2k], xy[2k+1]`, counterclockwise.
 *
 * # Safety
 * `xy` must point to `2 * n` readable integers and `out` must be writable.
 */
enum TsStatus ts_fan_new(const int64_t *xy, size_t n, struct TsFan **out);

/**
 * Fan of the weighted projective plane with weights `(w0, w1, w2)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_fan_weighted(int64_t w0, int64_t w1, int64_t w2, struct TsFan **out);

/**
 * # Safety
 * `fan` must come from a constructor here and not be freed twice. NULL is ignored.
 */
void ts_fan_free(struct TsFan *fan);

/**
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TsStatus ts_fan_ray_count(const struct TsFan *fan, size_t *out);

/**
 * Order of the Brauer group.
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TsStatus ts_fan_brauer_order(const struct TsFan *fan, uint64_t *out);

/**
 * Writes true to `out` when the decomposition needs no Brauer twist.
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TsStatus ts_fan_is_untwisted(const struct TsFan *fan, bool *out);

/**
 * Dimension of the algebra attached to `1/r(1,a)`, counted from its monomial basis.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_kk_dimension(int64_t r, int64_t a, size_t *out);

/**
 * JSON report for the fan, the same document the command line prints.
 * Points are taken after rotating by `rotate` and optionally reflecting.
 * Free the string with [`ts_string_free`].
 *
 * # Safety
 * `fan` must be a live handle and `out` writable.
 */
enum TsStatus ts_report_json(const struct TsFan *fan,
                             enum TsReportKind kind,
                             size_t rotate,
                             bool reflect,
                             char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. NULL is ignored.
 */
void ts_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORICSOD_H */
