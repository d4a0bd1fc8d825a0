/* C interface to the gmzv library: graph-indexed multiple zeta values.
 *
 * Conventions:
 *   - Every function returns a GmzvStatus; 0 is success.
 *   - Strings returned through `char **` are UTF-8, NUL-terminated, and
 *     owned by the caller: release them with gmzv_string_free().
 *   - After any non-zero status, gmzv_last_error_message() returns an
 *     owned copy of a human-readable message for the calling thread.
 */

#ifndef GMZV_H
#define GMZV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result classification shared with the command-line tool's exit codes.
 */
typedef enum GmzvStatus {
  /**
   * Success.
   */
  GMZV_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  GMZV_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed input: unparsable JSON, invalid configuration, bad rational.
   */
  GMZV_STATUS_VALIDATION = 2,
  /**
   * The requested value does not converge (or quadrature gave up).
   */
  GMZV_STATUS_CONVERGENCE = 3,
  /**
   * Structural precondition violated (non-tree reduction, gamma pole, ...).
   */
  GMZV_STATUS_PRECONDITION = 4,
  /**
   * A verification ran to completion and did not pass.
   */
  GMZV_STATUS_VERIFY_FAILED = 5,
  /**
   * Internal invariant violation (a bug); the library state is unharmed.
   */
  GMZV_STATUS_PANIC = 6,
} GmzvStatus;

/**
 * Opaque handle to a parsed decorated graph.
 */
typedef struct GmzvGraph GmzvGraph;

/**
 * Result of a truncated series evaluation.
 */
typedef struct GmzvEval {
  /**
   * Real part of the truncated sum.
   */
  double value_re;
  /**
   * Imaginary part of the truncated sum.
   */
  double value_im;
  /**
   * Two-point truncation residual; negative when unavailable.
   */
  double residual;
  /**
   * 1 when the sign constraints admit any term, 0 otherwise.
   */
  uint8_t feasible;
  /**
   * Number of lattice points summed.
   */
  uint64_t terms;
} GmzvEval;

/**
 * Result of comparing the symbolic reduction against the direct series.
 */
typedef struct GmzvVerify {
  /**
   * Direct truncated series value (real, imaginary).
   */
  double direct_re;
  double direct_im;
  /**
   * Numeric value of the reduced combination (real, imaginary).
   */
  double combination_re;
  double combination_im;
  /**
   * Signed difference direct - combination (real, imaginary).
   */
  double diff_re;
  double diff_im;
  /**
   * Magnitude of the difference.
   */
  double abs_diff;
  /**
   * 1 when |diff| <= tol.
   */
  uint8_t pass;
} GmzvVerify;

/**
 * Both sides of the rank-r axis-integral identity.
 */
typedef struct GmzvTransform {
  /**
   * Adaptive-quadrature side (real, imaginary).
   */
  double lhs_re;
  double lhs_im;
  /**
   * Closed gamma-factor side (real, imaginary).
   */
  double rhs_re;
  double rhs_im;
  /**
   * |lhs - rhs|.
   */
  double abs_err;
  /**
   * |lhs - rhs| / |rhs|.
   */
  double rel_err;
} GmzvTransform;

/**
 * Both sides of the unit-torus average identity over a real quadratic field.
 */
typedef struct GmzvFormula {
  /**
   * Quadrature value of the truncated torus integral.
   */
  double lhs;
  /**
   * Gamma-factor multiple of the truncated partial zeta sum.
   */
  double rhs;
  /**
   * |lhs - rhs| / |rhs|.
   */
  double rel_err;
  /**
   * Quadrature nodes used.
   */
  uint32_t quadrature_nodes;
  /**
   * Unit orbits entering the partial zeta sum.
   */
  uint64_t orbits;
} GmzvFormula;

/**
 * A truncated dual-lattice Green-sum value.
 */
typedef struct GmzvGreen {
  /**
   * Real part of the truncated sum.
   */
  double value_re;
  /**
   * Imaginary part of the truncated sum.
   */
  double value_im;
  /**
   * Number of lattice points summed.
   */
  uint64_t terms;
} GmzvGreen;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a graph description (JSON) into a new handle.
 *
 * On success writes the handle to `out`; release it with
 * [`gmzv_graph_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated C string; `out` must be a valid pointer.
 */
enum GmzvStatus gmzv_graph_parse(const char *json, struct GmzvGraph **out);

/**
 * Release a graph handle.  NULL is accepted and ignored.
 *
 * # Safety
 * `g` must be NULL or a pointer returned by [`gmzv_graph_parse`] that has
 * not been freed before.
 */
void gmzv_graph_free(struct GmzvGraph *g);

/**
 * Report basic graph shape numbers.  Any out-pointer may be NULL to skip
 * that field.
 *
 * # Safety
 * `g` must be a live handle from [`gmzv_graph_parse`].
 */
enum GmzvStatus gmzv_graph_info(const struct GmzvGraph *g,
                                uint64_t *vertices,
                                uint64_t *edges,
                                uint64_t *rank,
                                uint64_t *total_weight);

/**
 * Evaluate the truncated constrained series of a graph.
 *
 * Decorations are given as parallel arrays of length `deco_len` (pass `0`
 * and NULL arrays for none): vertex name and the rational `num/den` in
 * Q/Z.  `free_signs != 0` sums over all sign patterns instead of the
 * per-edge cones.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid; decoration arrays must
 * match `deco_len`.
 */
enum GmzvStatus gmzv_eval(const struct GmzvGraph *g,
                          uint64_t n_max,
                          double eta,
                          uint8_t free_signs,
                          const char *const *deco_names,
                          const int64_t *deco_numers,
                          const int64_t *deco_denoms,
                          size_t deco_len,
                          struct GmzvEval *out);

/**
 * Reduce an undecorated tree graph to an integer combination of zeta
 * values, as text (one `<coeff> * zeta(...)` line per term).
 *
 * # Safety
 * `g` must be a live handle; `out_text` must be valid.  Free the returned
 * string with [`gmzv_string_free`].
 */
enum GmzvStatus gmzv_reduce_zeta(const struct GmzvGraph *g, char **out_text);

/**
 * Reduce a decorated tree graph to an integer combination of polylog
 * values at roots of unity, as text (one `<coeff> * li(...)` line per
 * term).  Decorations as in [`gmzv_eval`].
 *
 * # Safety
 * `g` must be a live handle; `out_text` must be valid.  Free the returned
 * string with [`gmzv_string_free`].
 */
enum GmzvStatus gmzv_reduce_polylog(const struct GmzvGraph *g,
                                    const char *const *deco_names,
                                    const int64_t *deco_numers,
                                    const int64_t *deco_denoms,
                                    size_t deco_len,
                                    char **out_text);

/**
 * Compare the symbolic reduction of a graph against its direct series.
 *
 * Fills `out` whenever the comparison runs to completion; returns
 * `VerifyFailed` (with `out->pass == 0`) when the difference exceeds
 * `tol`.  Decorations as in [`gmzv_eval`].
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid.
 */
enum GmzvStatus gmzv_verify(const struct GmzvGraph *g,
                            uint64_t n_max,
                            double tol,
                            const char *const *deco_names,
                            const int64_t *deco_numers,
                            const int64_t *deco_denoms,
                            size_t deco_len,
                            struct GmzvVerify *out);

/**
 * Evaluate a classical multiple zeta value `zeta(exps[0], ..., exps[len-1])`
 * (indices increase left to right; the last exponent must be >= 2).
 *
 * # Safety
 * `exps` must point to `len` values; `out_value` must be valid;
 * `out_residual` may be NULL.
 */
enum GmzvStatus gmzv_zeta(const uint32_t *exps,
                          size_t len,
                          uint64_t n_max,
                          double *out_value,
                          double *out_residual);

/**
 * Compare adaptive quadrature with the closed gamma-factor form of the
 * rank-r axis integral: `x` has `r` entries, `p` optional integer twists
 * (NULL for all zero), exponent `s = s_re + i*s_im`, quadrature tolerance
 * `tol` (pass 0 for the default).
 *
 * # Safety
 * `x` must point to `r` values; `p` must be NULL or point to `r` values;
 * `out` must be valid.
 */
enum GmzvStatus gmzv_hecke_transform(const double *x,
                                     const int64_t *p,
                                     size_t r,
                                     double s_re,
                                     double s_im,
                                     double tol,
                                     struct GmzvTransform *out);

/**
 * Compare both sides of the unit-torus average identity over the real
 * quadratic field of parameter `d` (supported: 2, 3, 5, 13; `d = 1` runs
 * the degenerate rank-one check over the rationals).
 *
 * # Safety
 * `out` must be valid.
 */
enum GmzvStatus gmzv_hecke_formula(int64_t d, double s, uint64_t bound, struct GmzvFormula *out);

/**
 * Evaluate the truncated dual-lattice Green sum over the real quadratic
 * field of parameter `d` at torus coordinate `v`, with decoration
 * `x = x1_num/x1_den + (x2_num/x2_den)*w` in the ring basis, multisign
 * bits `nu1, nu2`, convergence shift `eta > 0`, and truncation `radius`.
 *
 * # Safety
 * `out` must be valid.
 */
enum GmzvStatus gmzv_hecke_green(int64_t d,
                                 int64_t x1_num,
                                 int64_t x1_den,
                                 int64_t x2_num,
                                 int64_t x2_den,
                                 double v,
                                 uint8_t nu1,
                                 uint8_t nu2,
                                 double eta,
                                 double radius,
                                 struct GmzvGreen *out);

/**
 * Release a string returned by this library.  NULL is accepted and ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer returned by a `gmzv_*` function that has
 * not been freed before.
 */
void gmzv_string_free(char *s);

/**
 * Owned copy of the calling thread's last error message, or NULL when the
 * last call on this thread succeeded.  Free it with [`gmzv_string_free`].
 */
char *gmzv_last_error_message(void);

/**
 * Library version as a static NUL-terminated string (do not free).
 */
const char *gmzv_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GMZV_H */
