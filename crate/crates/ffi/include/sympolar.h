#ifndef SYMPOLAR_H
#define SYMPOLAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_UTF8 = 2,
  SP_STATUS_PARSE = 3,
  SP_STATUS_DEGENERATE = 4,
  SP_STATUS_DIMENSION_MISMATCH = 5,
  SP_STATUS_ODD_DIMENSION = 6,
  SP_STATUS_PRECONDITION = 7,
  SP_STATUS_CAPABILITY = 8,
  SP_STATUS_CONFIG = 9,
  // Numerical failure (optimizer, bracketing, refinement, inverted bracket).
  SP_STATUS_NUMERIC = 10,
  // Any other library error.
  SP_STATUS_OTHER = 11,
  // A Rust panic was caught at the boundary.
  SP_STATUS_PANIC = 12,
} SpStatus;

// Opaque body handle.
typedef struct SpBody SpBody;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread (empty after success).
const char *sp_last_error(void);

// Parses a body from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum SpStatus sp_body_from_json(const char *json, struct SpBody **out);

// Convex hull of `count` points of dimension `dim`, stored row-major.
//
// # Safety
// `coords` must hold `count * dim` doubles; `out` must be writable.
enum SpStatus sp_body_from_points(const double *coords,
                                  size_t count,
                                  size_t dim,
                                  struct SpBody **out);

// Euclidean ball of the given radius.
//
// # Safety
// `out` must be writable.
enum SpStatus sp_body_ball(size_t dim, double radius, struct SpBody **out);

// Releases a handle; null is ignored.
//
// # Safety
// `body` must come from this library and not be used afterwards.
void sp_body_free(struct SpBody *body);

// # Safety
// `body` must be a live handle; `out` must be writable.
enum SpStatus sp_body_dim(const struct SpBody *body, size_t *out);

// JSON form of a body; free the string with `sp_string_free`.
//
// # Safety
// `body` must be a live handle; `out` must be writable.
enum SpStatus sp_body_to_json(const struct SpBody *body, char **out);

// # Safety
// `s` must come from this library (or be null).
void sp_string_free(char *s);

// Symplectic polar `J X°`.
//
// # Safety
// `body` must be a live handle; `out` must be writable.
enum SpStatus sp_symplectic_polar(const struct SpBody *body, struct SpBody **out);

// Reduction along `v` (length must equal the body dimension).
//
// # Safety
// `v` must hold `len` doubles; `out` must be writable.
enum SpStatus sp_symplectic_reduction(const struct SpBody *body,
                                      const double *v,
                                      size_t len,
                                      struct SpBody **out);

// `c_J` of the body; `certified` is false for sampled estimates.
//
// # Safety
// `body` must be a live handle; the outputs must be writable.
enum SpStatus sp_c_j(const struct SpBody *body, double *value, bool *certified);

// Self-polarity residual; `self_polar` is `residual <= tol`.
//
// # Safety
// `body` must be a live handle; the outputs must be writable.
enum SpStatus sp_self_polarity(const struct SpBody *body,
                               double tol,
                               double *residual,
                               bool *self_polar);

// Volume (exact for polytopes and closed forms, Monte Carlo otherwise).
//
// # Safety
// `body` must be a live handle; `out` must be writable.
enum SpStatus sp_volume(const struct SpBody *body, uint64_t seed, double *out);

// Lower and upper bounds on the EHZ capacity.
//
// # Safety
// `body` must be a live handle; the outputs must be writable.
enum SpStatus sp_ehz_bracket(const struct SpBody *body,
                             size_t chains,
                             uint64_t seed,
                             double *lower,
                             double *upper);

// Null handle, for C callers that want an explicit initializer.
struct SpBody *sp_body_null(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMPOLAR_H */
