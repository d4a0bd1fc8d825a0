//! C ABI for the `gmzv` library.
//!
//! Design rules for every exported function:
//!
//! * returns a [`GmzvStatus`] (`0` = success; other codes classify the
//!   failure the same way the command-line tool's exit codes do);
//! * never unwinds across the boundary (panics become
//!   [`GmzvStatus::Panic`]);
//! * writes results only through caller-provided out-pointers, and only on
//!   success (except where a field is documented otherwise);
//! * leaves a thread-local error message readable via
//!   [`gmzv_last_error_message`] whenever it returns a non-zero status.
//!
//! Returned strings are owned by the caller and must be released with
//! [`gmzv_string_free`].  The opaque [`GmzvGraph`] handle is created by
//! [`gmzv_graph_parse`] and released with [`gmzv_graph_free`].

use gmzv::defaults;
use gmzv::graph::{graph_from_json, homology_rank, DecoratedGraph};
use gmzv::mzv::{zeta_mzv, MzvError, TailMode};
use gmzv::quadratic::{
    hecke_formula_check, hecke_formula_check_r1, hecke_quadrature, hecke_rhs,
    plectic_green_numeric, GreenConfig, HeckeParams, QuadraticError, RealQuadraticField,
};
use gmzv::reduce::{
    gmzv_to_mzv, gmzv_to_polylog, mzv_combination_to_text, polylog_combination_to_text,
    ReduceError,
};
use gmzv::series::{
    higher_green_numeric, verify_graph, SeriesConfig, SeriesError, SignMode, TorsionDecoration,
};
use num::complex::Complex64;
use num::rational::Ratio;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

// ---------------------------------------------------------------------------
// Status codes and the thread-local error message
// ---------------------------------------------------------------------------

/// Result classification shared with the command-line tool's exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmzvStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Malformed input: unparsable JSON, invalid configuration, bad rational.
    Validation = 2,
    /// The requested value does not converge (or quadrature gave up).
    Convergence = 3,
    /// Structural precondition violated (non-tree reduction, gamma pole, ...).
    Precondition = 4,
    /// A verification ran to completion and did not pass.
    VerifyFailed = 5,
    /// Internal invariant violation (a bug); the library state is unharmed.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(code: GmzvStatus, msg: &str) -> GmzvStatus {
    set_last_error(msg);
    code
}

fn guard(f: impl FnOnce() -> GmzvStatus) -> GmzvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(GmzvStatus::Panic, "internal panic"),
    }
}

fn mzv_status(e: &MzvError) -> GmzvStatus {
    match e {
        MzvError::DivergentIndex | MzvError::DivergentTerm => GmzvStatus::Convergence,
        MzvError::ZeroExponent { .. }
        | MzvError::PhaseCountMismatch { .. }
        | MzvError::BadTruncation { .. }
        | MzvError::PhaseDenominatorTooLarge { .. } => GmzvStatus::Validation,
    }
}

fn reduce_status(e: &ReduceError) -> GmzvStatus {
    match e {
        ReduceError::DivergentTerm => GmzvStatus::Convergence,
        _ => GmzvStatus::Precondition,
    }
}

fn series_status(e: &SeriesError) -> GmzvStatus {
    match e {
        SeriesError::BadConfig(_)
        | SeriesError::UnknownVertex(_)
        | SeriesError::NotBoundaryVertex(_) => GmzvStatus::Validation,
        SeriesError::ConvergenceGuardFailed(_) => GmzvStatus::Convergence,
        SeriesError::Reduce(r) => reduce_status(r),
        SeriesError::Eval(m) => mzv_status(m),
    }
}

fn quadratic_status(e: &QuadraticError) -> GmzvStatus {
    match e {
        QuadraticError::UnsupportedField(_) | QuadraticError::BadParams(_) => {
            GmzvStatus::Validation
        }
        QuadraticError::QuadratureNonConvergent => GmzvStatus::Convergence,
        QuadraticError::GammaPole => GmzvStatus::Precondition,
        QuadraticError::Eval(m) => mzv_status(m),
    }
}

// ---------------------------------------------------------------------------
// Out-structs
// ---------------------------------------------------------------------------

/// Result of a truncated series evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmzvEval {
    /// Real part of the truncated sum.
    pub value_re: f64,
    /// Imaginary part of the truncated sum.
    pub value_im: f64,
    /// Two-point truncation residual; negative when unavailable.
    pub residual: f64,
    /// 1 when the sign constraints admit any term, 0 otherwise.
    pub feasible: u8,
    /// Number of lattice points summed.
    pub terms: u64,
}

/// Result of comparing the symbolic reduction against the direct series.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmzvVerify {
    /// Direct truncated series value (real, imaginary).
    pub direct_re: f64,
    pub direct_im: f64,
    /// Numeric value of the reduced combination (real, imaginary).
    pub combination_re: f64,
    pub combination_im: f64,
    /// Signed difference direct - combination (real, imaginary).
    pub diff_re: f64,
    pub diff_im: f64,
    /// Magnitude of the difference.
    pub abs_diff: f64,
    /// 1 when |diff| <= tol.
    pub pass: u8,
}

/// Both sides of the rank-r axis-integral identity.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmzvTransform {
    /// Adaptive-quadrature side (real, imaginary).
    pub lhs_re: f64,
    pub lhs_im: f64,
    /// Closed gamma-factor side (real, imaginary).
    pub rhs_re: f64,
    pub rhs_im: f64,
    /// |lhs - rhs|.
    pub abs_err: f64,
    /// |lhs - rhs| / |rhs|.
    pub rel_err: f64,
}

/// Both sides of the unit-torus average identity over a real quadratic field.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmzvFormula {
    /// Quadrature value of the truncated torus integral.
    pub lhs: f64,
    /// Gamma-factor multiple of the truncated partial zeta sum.
    pub rhs: f64,
    /// |lhs - rhs| / |rhs|.
    pub rel_err: f64,
    /// Quadrature nodes used.
    pub quadrature_nodes: u32,
    /// Unit orbits entering the partial zeta sum.
    pub orbits: u64,
}

/// A truncated dual-lattice Green-sum value.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmzvGreen {
    /// Real part of the truncated sum.
    pub value_re: f64,
    /// Imaginary part of the truncated sum.
    pub value_im: f64,
    /// Number of lattice points summed.
    pub terms: u64,
}

// ---------------------------------------------------------------------------
// Opaque graph handle
// ---------------------------------------------------------------------------

/// Opaque handle to a parsed decorated graph.
pub struct GmzvGraph {
    inner: DecoratedGraph,
}

/// Parse a graph description (JSON) into a new handle.
///
/// On success writes the handle to `out`; release it with
/// [`gmzv_graph_free`].
///
/// # Safety
/// `json` must be a NUL-terminated C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmzv_graph_parse(
    json: *const c_char,
    out: *mut *mut GmzvGraph,
) -> GmzvStatus {
    clear_last_error();
    if json.is_null() || out.is_null() {
        return fail(GmzvStatus::NullArgument, "json and out must be non-NULL");
    }
    let text = CStr::from_ptr(json);
    guard(|| {
        let Ok(text) = text.to_str() else {
            return fail(GmzvStatus::Validation, "graph JSON is not UTF-8");
        };
        match graph_from_json(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(GmzvGraph { inner: g }));
                GmzvStatus::Ok
            }
            Err(e) => fail(GmzvStatus::Validation, &format!("graph parse: {e}")),
        }
    })
}

/// Release a graph handle.  NULL is accepted and ignored.
///
/// # Safety
/// `g` must be NULL or a pointer returned by [`gmzv_graph_parse`] that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn gmzv_graph_free(g: *mut GmzvGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Report basic graph shape numbers.  Any out-pointer may be NULL to skip
/// that field.
///
/// # Safety
/// `g` must be a live handle from [`gmzv_graph_parse`].
#[no_mangle]
pub unsafe extern "C" fn gmzv_graph_info(
    g: *const GmzvGraph,
    vertices: *mut u64,
    edges: *mut u64,
    rank: *mut u64,
    total_weight: *mut u64,
) -> GmzvStatus {
    clear_last_error();
    if g.is_null() {
        return fail(GmzvStatus::NullArgument, "graph handle is NULL");
    }
    let graph = &(*g).inner;
    if !vertices.is_null() {
        *vertices = graph.vertex_count() as u64;
    }
    if !edges.is_null() {
        *edges = graph.edges().len() as u64;
    }
    if !rank.is_null() {
        *rank = homology_rank(graph) as u64;
    }
    if !total_weight.is_null() {
        *total_weight = graph.total_weight();
    }
    GmzvStatus::Ok
}

// ---------------------------------------------------------------------------
// Decoration arrays
// ---------------------------------------------------------------------------

/// Builds a decoration map from parallel C arrays
/// (`names[i] = numers[i] / denoms[i]`).
unsafe fn read_decorations(
    names: *const *const c_char,
    numers: *const i64,
    denoms: *const i64,
    len: usize,
) -> Result<TorsionDecoration, GmzvStatus> {
    let mut d = TorsionDecoration::new();
    if len == 0 {
        return Ok(d);
    }
    if names.is_null() || numers.is_null() || denoms.is_null() {
        return Err(fail(
            GmzvStatus::NullArgument,
            "decoration arrays must be non-NULL when the length is non-zero",
        ));
    }
    for i in 0..len {
        let name_ptr = *names.add(i);
        if name_ptr.is_null() {
            return Err(fail(GmzvStatus::NullArgument, "decoration name is NULL"));
        }
        let Ok(name) = CStr::from_ptr(name_ptr).to_str() else {
            return Err(fail(GmzvStatus::Validation, "decoration name is not UTF-8"));
        };
        let den = *denoms.add(i);
        if den == 0 {
            return Err(fail(GmzvStatus::Validation, "decoration denominator is zero"));
        }
        d.set(name, Ratio::new(*numers.add(i), den));
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Evaluation, reduction, verification
// ---------------------------------------------------------------------------

/// Evaluate the truncated constrained series of a graph.
///
/// Decorations are given as parallel arrays of length `deco_len` (pass `0`
/// and NULL arrays for none): vertex name and the rational `num/den` in
/// Q/Z.  `free_signs != 0` sums over all sign patterns instead of the
/// per-edge cones.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid; decoration arrays must
/// match `deco_len`.
#[no_mangle]
pub unsafe extern "C" fn gmzv_eval(
    g: *const GmzvGraph,
    n_max: u64,
    eta: f64,
    free_signs: u8,
    deco_names: *const *const c_char,
    deco_numers: *const i64,
    deco_denoms: *const i64,
    deco_len: usize,
    out: *mut GmzvEval,
) -> GmzvStatus {
    clear_last_error();
    if g.is_null() || out.is_null() {
        return fail(GmzvStatus::NullArgument, "graph and out must be non-NULL");
    }
    let graph = &(*g).inner;
    let deco = match read_decorations(deco_names, deco_numers, deco_denoms, deco_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let out = &mut *out;
    guard(|| {
        let cfg = SeriesConfig {
            n_max,
            eta,
            tail_mode: TailMode::TwoPoint,
            sign_mode: if free_signs != 0 { SignMode::Free } else { SignMode::Restricted },
        };
        match higher_green_numeric(graph, &deco, &cfg) {
            Ok(ev) => {
                *out = GmzvEval {
                    value_re: ev.value.re,
                    value_im: ev.value.im,
                    residual: ev.residual.unwrap_or(-1.0),
                    feasible: u8::from(ev.feasible),
                    terms: ev.terms,
                };
                GmzvStatus::Ok
            }
            Err(e) => fail(series_status(&e), &e.to_string()),
        }
    })
}

/// Reduce an undecorated tree graph to an integer combination of zeta
/// values, as text (one `<coeff> * zeta(...)` line per term).
///
/// # Safety
/// `g` must be a live handle; `out_text` must be valid.  Free the returned
/// string with [`gmzv_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gmzv_reduce_zeta(
    g: *const GmzvGraph,
    out_text: *mut *mut c_char,
) -> GmzvStatus {
    clear_last_error();
    if g.is_null() || out_text.is_null() {
        return fail(GmzvStatus::NullArgument, "graph and out_text must be non-NULL");
    }
    let graph = &(*g).inner;
    let out_text = &mut *out_text;
    guard(|| match gmzv_to_mzv(graph) {
        Ok(c) => {
            let text = mzv_combination_to_text(&c);
            match CString::new(text) {
                Ok(cs) => {
                    *out_text = cs.into_raw();
                    GmzvStatus::Ok
                }
                Err(_) => fail(GmzvStatus::Panic, "combination text contained NUL"),
            }
        }
        Err(e) => fail(reduce_status(&e), &e.to_string()),
    })
}

/// Reduce a decorated tree graph to an integer combination of polylog
/// values at roots of unity, as text (one `<coeff> * li(...)` line per
/// term).  Decorations as in [`gmzv_eval`].
///
/// # Safety
/// `g` must be a live handle; `out_text` must be valid.  Free the returned
/// string with [`gmzv_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gmzv_reduce_polylog(
    g: *const GmzvGraph,
    deco_names: *const *const c_char,
    deco_numers: *const i64,
    deco_denoms: *const i64,
    deco_len: usize,
    out_text: *mut *mut c_char,
) -> GmzvStatus {
    clear_last_error();
    if g.is_null() || out_text.is_null() {
        return fail(GmzvStatus::NullArgument, "graph and out_text must be non-NULL");
    }
    let graph = &(*g).inner;
    let deco = match read_decorations(deco_names, deco_numers, deco_denoms, deco_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let out_text = &mut *out_text;
    guard(|| {
        let xv = match deco.to_vertex_vec(graph) {
            Ok(v) => v,
            Err(e) => return fail(series_status(&e), &e.to_string()),
        };
        match gmzv_to_polylog(graph, &xv) {
            Ok(c) => {
                let text = polylog_combination_to_text(&c);
                match CString::new(text) {
                    Ok(cs) => {
                        *out_text = cs.into_raw();
                        GmzvStatus::Ok
                    }
                    Err(_) => fail(GmzvStatus::Panic, "combination text contained NUL"),
                }
            }
            Err(e) => fail(reduce_status(&e), &e.to_string()),
        }
    })
}

/// Compare the symbolic reduction of a graph against its direct series.
///
/// Fills `out` whenever the comparison runs to completion; returns
/// `VerifyFailed` (with `out->pass == 0`) when the difference exceeds
/// `tol`.  Decorations as in [`gmzv_eval`].
///
/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gmzv_verify(
    g: *const GmzvGraph,
    n_max: u64,
    tol: f64,
    deco_names: *const *const c_char,
    deco_numers: *const i64,
    deco_denoms: *const i64,
    deco_len: usize,
    out: *mut GmzvVerify,
) -> GmzvStatus {
    clear_last_error();
    if g.is_null() || out.is_null() {
        return fail(GmzvStatus::NullArgument, "graph and out must be non-NULL");
    }
    let graph = &(*g).inner;
    let deco = match read_decorations(deco_names, deco_numers, deco_denoms, deco_len) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let out = &mut *out;
    guard(|| {
        let cfg = SeriesConfig {
            n_max,
            eta: defaults::DEFAULT_ETA,
            tail_mode: TailMode::TwoPoint,
            sign_mode: SignMode::Restricted,
        };
        match verify_graph(
            graph,
            &deco,
            &cfg,
            defaults::TREE_FAST_CAP as u64,
            defaults::MZV_N_MAX,
            tol,
            None,
        ) {
            Ok(v) => {
                *out = GmzvVerify {
                    direct_re: v.direct.value.re,
                    direct_im: v.direct.value.im,
                    combination_re: v.combination_value.value.re,
                    combination_im: v.combination_value.value.im,
                    diff_re: v.diff.re,
                    diff_im: v.diff.im,
                    abs_diff: v.diff.norm(),
                    pass: u8::from(v.pass),
                };
                if v.pass {
                    GmzvStatus::Ok
                } else {
                    fail(
                        GmzvStatus::VerifyFailed,
                        &format!("|direct - combination| = {:e} exceeds tol {:e}", v.diff.norm(), tol),
                    )
                }
            }
            Err(e) => fail(series_status(&e), &e.to_string()),
        }
    })
}

/// Evaluate a classical multiple zeta value `zeta(exps[0], ..., exps[len-1])`
/// (indices increase left to right; the last exponent must be >= 2).
///
/// # Safety
/// `exps` must point to `len` values; `out_value` must be valid;
/// `out_residual` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gmzv_zeta(
    exps: *const u32,
    len: usize,
    n_max: u64,
    out_value: *mut f64,
    out_residual: *mut f64,
) -> GmzvStatus {
    clear_last_error();
    if exps.is_null() || out_value.is_null() {
        return fail(GmzvStatus::NullArgument, "exps and out_value must be non-NULL");
    }
    let idx = std::slice::from_raw_parts(exps, len).to_vec();
    let out_value = &mut *out_value;
    let out_residual = if out_residual.is_null() { None } else { Some(&mut *out_residual) };
    guard(|| match zeta_mzv(&idx, n_max, TailMode::TwoPoint) {
        Ok(r) => {
            *out_value = r.value.re;
            if let Some(res) = out_residual {
                *res = r.residual;
            }
            GmzvStatus::Ok
        }
        Err(e) => fail(mzv_status(&e), &e.to_string()),
    })
}

// ---------------------------------------------------------------------------
// Real-quadratic-field checks
// ---------------------------------------------------------------------------

/// Compare adaptive quadrature with the closed gamma-factor form of the
/// rank-r axis integral: `x` has `r` entries, `p` optional integer twists
/// (NULL for all zero), exponent `s = s_re + i*s_im`, quadrature tolerance
/// `tol` (pass 0 for the default).
///
/// # Safety
/// `x` must point to `r` values; `p` must be NULL or point to `r` values;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gmzv_hecke_transform(
    x: *const f64,
    p: *const i64,
    r: usize,
    s_re: f64,
    s_im: f64,
    tol: f64,
    out: *mut GmzvTransform,
) -> GmzvStatus {
    clear_last_error();
    if x.is_null() || out.is_null() {
        return fail(GmzvStatus::NullArgument, "x and out must be non-NULL");
    }
    let xv = std::slice::from_raw_parts(x, r).to_vec();
    let pv =
        if p.is_null() { vec![0; r] } else { std::slice::from_raw_parts(p, r).to_vec() };
    let out = &mut *out;
    guard(|| {
        let tol = if tol > 0.0 { tol } else { defaults::DEFAULT_QUAD_TOL };
        let params = HeckeParams::new(xv, Complex64::new(s_re, s_im), pv);
        let rhs = match hecke_rhs(&params) {
            Ok(v) => v,
            Err(e) => return fail(quadratic_status(&e), &e.to_string()),
        };
        let lhs = match hecke_quadrature(&params, tol) {
            Ok(v) => v,
            Err(e) => return fail(quadratic_status(&e), &e.to_string()),
        };
        let abs_err = (lhs - rhs).norm();
        *out = GmzvTransform {
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_err,
            rel_err: abs_err / rhs.norm().max(f64::MIN_POSITIVE),
        };
        GmzvStatus::Ok
    })
}

/// Compare both sides of the unit-torus average identity over the real
/// quadratic field of parameter `d` (supported: 2, 3, 5, 13; `d = 1` runs
/// the degenerate rank-one check over the rationals).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gmzv_hecke_formula(
    d: i64,
    s: f64,
    bound: u64,
    out: *mut GmzvFormula,
) -> GmzvStatus {
    clear_last_error();
    if out.is_null() {
        return fail(GmzvStatus::NullArgument, "out must be non-NULL");
    }
    let out = &mut *out;
    guard(|| {
        let chk = if d == 1 {
            hecke_formula_check_r1(s, bound)
        } else {
            match RealQuadraticField::new(d) {
                Ok(fld) => hecke_formula_check(&fld, s, bound),
                Err(e) => return fail(quadratic_status(&e), &e.to_string()),
            }
        };
        match chk {
            Ok(c) => {
                *out = GmzvFormula {
                    lhs: c.lhs,
                    rhs: c.rhs,
                    rel_err: c.rel_err,
                    quadrature_nodes: c.quadrature_nodes,
                    orbits: c.orbits,
                };
                GmzvStatus::Ok
            }
            Err(e) => fail(quadratic_status(&e), &e.to_string()),
        }
    })
}

/// Evaluate the truncated dual-lattice Green sum over the real quadratic
/// field of parameter `d` at torus coordinate `v`, with decoration
/// `x = x1_num/x1_den + (x2_num/x2_den)*w` in the ring basis, multisign
/// bits `nu1, nu2`, convergence shift `eta > 0`, and truncation `radius`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gmzv_hecke_green(
    d: i64,
    x1_num: i64,
    x1_den: i64,
    x2_num: i64,
    x2_den: i64,
    v: f64,
    nu1: u8,
    nu2: u8,
    eta: f64,
    radius: f64,
    out: *mut GmzvGreen,
) -> GmzvStatus {
    clear_last_error();
    if out.is_null() {
        return fail(GmzvStatus::NullArgument, "out must be non-NULL");
    }
    if x1_den == 0 || x2_den == 0 {
        return fail(GmzvStatus::Validation, "decoration denominator is zero");
    }
    let out = &mut *out;
    guard(|| {
        let fld = match RealQuadraticField::new(d) {
            Ok(f) => f,
            Err(e) => return fail(quadratic_status(&e), &e.to_string()),
        };
        let x = (Ratio::new(x1_num, x1_den), Ratio::new(x2_num, x2_den));
        let cfg = GreenConfig { radius, eta };
        match plectic_green_numeric(&fld, x, v, (nu1, nu2), None, &cfg) {
            Ok(g) => {
                *out = GmzvGreen { value_re: g.value.re, value_im: g.value.im, terms: g.terms };
                GmzvStatus::Ok
            }
            Err(e) => fail(quadratic_status(&e), &e.to_string()),
        }
    })
}

// ---------------------------------------------------------------------------
// Strings, errors, version
// ---------------------------------------------------------------------------

/// Release a string returned by this library.  NULL is accepted and ignored.
///
/// # Safety
/// `s` must be NULL or a pointer returned by a `gmzv_*` function that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn gmzv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Owned copy of the calling thread's last error message, or NULL when the
/// last call on this thread succeeded.  Free it with [`gmzv_string_free`].
#[no_mangle]
pub extern "C" fn gmzv_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Library version as a static NUL-terminated string (do not free).
#[no_mangle]
pub extern "C" fn gmzv_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
