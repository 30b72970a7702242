#ifndef TDOPT_H
#define TDOPT_H

#include <stddef.h>
#include <stdbool.h>

// Solver modes for [`td_solve_json`].
typedef enum TdSolveMode {
  TD_SOLVE_MODE_EXACT = 0,
  TD_SOLVE_MODE_HEURISTIC = 1,
  TD_SOLVE_MODE_NONE = 2,
} TdSolveMode;

// Result codes.
typedef enum TdStatus {
  TD_STATUS_OK = 0,
  // A required pointer argument was null.
  TD_STATUS_NULL_ARGUMENT = 1,
  // Unparseable text, JSON or invalid instance.
  TD_STATUS_PARSE = 2,
  // Input beyond the exact-search limits.
  TD_STATUS_SIZE_LIMIT = 3,
  // Branch-depth above the requested bound.
  TD_STATUS_DEPTH_EXCEEDED = 4,
  // Any other library error.
  TD_STATUS_FAILED = 5,
  // A Rust panic was caught at the boundary.
  TD_STATUS_PANIC = 6,
} TdStatus;

// Opaque rational matrix.
typedef struct TdMatrix TdMatrix;

// Opaque transform result.
typedef struct TdTransform TdTransform;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *td_last_error(void);

// Parses a matrix in the text format (`m n` header, then rows) or as a
// JSON array of rows.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum TdStatus td_matrix_from_text(const char *text, struct TdMatrix **out);

// # Safety
// `m` must come from [`td_matrix_from_text`] and not be used afterwards.
void td_matrix_free(struct TdMatrix *m);

// # Safety
// `m` must be a live handle; `rows` and `cols` valid pointers.
enum TdStatus td_matrix_dims(const struct TdMatrix *m, size_t *rows, size_t *cols);

// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum TdStatus td_matrix_rank(const struct TdMatrix *m, size_t *out);

// Exact branch-depth of the column matroid.
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum TdStatus td_branch_depth(const struct TdMatrix *m, size_t *out);

// Tree-depth of the dual graph; `exact` is false when only the greedy
// upper bound was computed.
//
// # Safety
// `m` must be a live handle; `out` and `exact` valid pointers.
enum TdStatus td_dual_treedepth(const struct TdMatrix *m, size_t *out, bool *exact);

// Row-equivalent matrix of dual tree-depth at most the branch-depth, or
// [`TdStatus::DepthExceeded`] when the branch-depth is above `depth`.
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum TdStatus td_transform(const struct TdMatrix *m, size_t depth, struct TdTransform **out);

// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum TdStatus td_transform_depth(const struct TdTransform *t, size_t *out);

// The transform as JSON (same format as `tdopt transform`).
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum TdStatus td_transform_json(const struct TdTransform *t, char **out);

// # Safety
// `t` must come from [`td_transform`] and not be used afterwards.
void td_transform_free(struct TdTransform *t);

// Solves an instance given as JSON and writes the solution JSON. An
// infeasible instance is not an error; check the `status` field.
//
// # Safety
// `instance` must be a NUL-terminated string and `out` a valid pointer.
enum TdStatus td_solve_json(const char *instance, enum TdSolveMode mode, size_t depth, char **out);

// # Safety
// `s` must come from this library and not be used afterwards.
void td_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TDOPT_H */
