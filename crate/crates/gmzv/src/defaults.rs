//! Centralized defaults and tolerances.
//!
//! Every tolerance used by the CLI and the verification helpers lives here
//! with a justification, so that no magic number is buried at a call site.
//! Reports echo the values actually used.

/// Default truncation height for direct series evaluation.
///
/// With two-point tail extrapolation, rank-1 and rank-2 sums of minimal
/// weight reach absolute errors around `1e-6`..`1e-4` at this height while
/// staying well under a second of work.
pub const DEFAULT_N_MAX: u64 = 2000;

/// Default regularization exponent `eta` (none).  `eta > 0` raises every
/// edge factor to `|n_e|^{-k_e(1+eta)}`, sharpening convergence at the
/// cost of evaluating a shifted series.
pub const DEFAULT_ETA: f64 = 0.0;

/// Default verification tolerance for `verify`-style commands.
///
/// Chosen so that a correct implementation passes with an order of
/// magnitude of slack at the default `n_max`, while a wrong reduction
/// (whose error is a fixed nonzero constant) fails decisively.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-4;

/// Default absolute tolerance for adaptive quadrature in Hecke-type
/// integrals.  The integrands are smooth and exponentially decaying in
/// log coordinates, so this is reachable with a few thousand evaluations.
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

/// Default search box half-width for the sign-feasibility check.
///
/// Feasibility is decided relative to this box: a verdict of "infeasible"
/// means no witness with all coordinates in `[-B, B]` exists, and the
/// report says so explicitly.  Rank-`d` graphs of desk scale have
/// witnesses with tiny coordinates when they have any at all.
pub const DEFAULT_SIGN_BOX: i64 = 8;

/// Truncation height used by the fast tree evaluator when verifying
/// reductions numerically (`2^21`).  Prefix heights are capped at this
/// value; two-point extrapolation in the cap removes the leading `1/T`
/// tail term.
pub const TREE_FAST_CAP: usize = 1 << 21;

/// Default truncation height for streaming multiple-zeta / polylog
/// evaluation.  The last exponent is at least 2 (or the last argument is
/// off 1), so tails fall at least like `log^k N / N`; two-point
/// extrapolation is applied on top.
pub const MZV_N_MAX: u64 = 1_000_000;

/// Number of significant digits used for every floating-point field in
/// reports.  Fixed so that reports are byte-identical across runs.
pub const REPORT_SIG_DIGITS: usize = 12;

/// Environment variable consulted for the worker-thread count used by
/// partitioned direct summation.  Unset or unparsable means 1.
pub const WORKERS_ENV: &str = "GMZV_WORKERS";

/// Read the worker count from the environment (clamped to `1..=64`).
#[must_use]
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(1, |w| w.clamp(1, 64))
}
