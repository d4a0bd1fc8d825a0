//! Drive the C ABI end to end from Rust: status codes, ownership rules,
//! out-struct contents, and the committed header.

use gmzv_ffi::*;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

const GAMMA1: &str = r#"{
  "vertices": ["v1", "v2", "v3", "y"],
  "boundary": ["v1", "v2", "v3"],
  "edges": [
    { "id": 1, "tail": "y", "head": "v1", "k": 1, "nu": 0 },
    { "id": 2, "tail": "y", "head": "v2", "k": 1, "nu": 0 },
    { "id": 3, "tail": "y", "head": "v3", "k": 1, "nu": 1 }
  ]
}"#;

const EDGE_K3: &str = r#"{
  "vertices": ["a", "b"],
  "boundary": ["a", "b"],
  "edges": [ { "id": 1, "tail": "a", "head": "b", "k": 3, "nu": 0 } ]
}"#;

const EDGE_K1: &str = r#"{
  "vertices": ["a", "b"],
  "boundary": ["a", "b"],
  "edges": [ { "id": 1, "tail": "a", "head": "b", "k": 1, "nu": 0 } ]
}"#;

const THETA: &str = r#"{
  "vertices": ["s1", "s2", "w"],
  "boundary": ["s1", "s2"],
  "edges": [
    { "id": 1, "tail": "s1", "head": "w", "k": 1, "nu": 0 },
    { "id": 2, "tail": "s2", "head": "w", "k": 1, "nu": 1 },
    { "id": 3, "tail": "s1", "head": "s2", "k": 6, "nu": 0 }
  ]
}"#;

const ZETA_3: f64 = 1.202_056_903_159_594_3;
const PI_OVER_4: f64 = std::f64::consts::FRAC_PI_4;
const ZETA_2: f64 = 1.644_934_066_848_226_4;

fn parse(json: &str) -> *mut GmzvGraph {
    let c = CString::new(json).unwrap();
    let mut g: *mut GmzvGraph = ptr::null_mut();
    let st = unsafe { gmzv_graph_parse(c.as_ptr(), &mut g) };
    assert_eq!(st, GmzvStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error_text() -> Option<String> {
    let p = gmzv_last_error_message();
    if p.is_null() {
        return None;
    }
    let text = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gmzv_string_free(p) };
    Some(text)
}

#[test]
fn parse_info_free_roundtrip() {
    let g = parse(GAMMA1);
    let (mut v, mut e, mut r, mut w) = (0u64, 0u64, 0u64, 0u64);
    let st = unsafe { gmzv_graph_info(g, &mut v, &mut e, &mut r, &mut w) };
    assert_eq!(st, GmzvStatus::Ok);
    assert_eq!((v, e, r, w), (4, 3, 2, 3));
    // Skipping fields via NULL is allowed.
    let st = unsafe {
        gmzv_graph_info(g, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, GmzvStatus::Ok);
    unsafe { gmzv_graph_free(g) };
    unsafe { gmzv_graph_free(ptr::null_mut()) };
}

#[test]
fn parse_rejects_null_and_garbage() {
    let mut g: *mut GmzvGraph = ptr::null_mut();
    assert_eq!(
        unsafe { gmzv_graph_parse(ptr::null(), &mut g) },
        GmzvStatus::NullArgument
    );
    assert!(last_error_text().is_some());
    let bad = CString::new("{ not json").unwrap();
    assert_eq!(
        unsafe { gmzv_graph_parse(bad.as_ptr(), &mut g) },
        GmzvStatus::Validation
    );
    let msg = last_error_text().expect("message set");
    assert!(msg.contains("parse"), "unexpected message: {msg}");
    assert!(g.is_null(), "out must stay untouched on failure");
}

#[test]
fn eval_single_edge_matches_zeta3() {
    let g = parse(EDGE_K3);
    let mut out = GmzvEval::default();
    let st = unsafe {
        gmzv_eval(g, 100_000, 0.0, 0, ptr::null(), ptr::null(), ptr::null(), 0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Ok);
    assert!((out.value_re - ZETA_3).abs() < 1e-8, "got {}", out.value_re);
    assert_eq!(out.value_im, 0.0);
    assert!(out.residual > 0.0);
    assert_eq!(out.feasible, 1);
    assert_eq!(out.terms, 100_000);
    unsafe { gmzv_graph_free(g) };
}

#[test]
fn eval_divergent_graph_is_convergence_failure() {
    let g = parse(EDGE_K1);
    let mut out = GmzvEval::default();
    let st = unsafe {
        gmzv_eval(g, 1000, 0.0, 0, ptr::null(), ptr::null(), ptr::null(), 0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Convergence);
    assert!(last_error_text().is_some());
    unsafe { gmzv_graph_free(g) };
}

#[test]
fn eval_with_decorations_accepts_and_validates() {
    let g = parse(EDGE_K3);
    let name = CString::new("b").unwrap();
    let names = [name.as_ptr()];
    // Valid: x_b = 1/2.
    let mut out = GmzvEval::default();
    let st = unsafe { gmzv_eval(g, 5000, 0.0, 0, names.as_ptr(), [1i64].as_ptr(), [2i64].as_ptr(), 1, &mut out) };
    assert_eq!(st, GmzvStatus::Ok);
    // Alternating zeta(3) = -(3/4) zeta(3).
    assert!((out.value_re + 0.75 * ZETA_3).abs() < 1e-6, "got {}", out.value_re);
    // Zero denominator rejected.
    let st = unsafe { gmzv_eval(g, 5000, 0.0, 0, names.as_ptr(), [1i64].as_ptr(), [0i64].as_ptr(), 1, &mut out) };
    assert_eq!(st, GmzvStatus::Validation);
    // Unknown vertex rejected by the evaluator.
    let ghost = CString::new("ghost").unwrap();
    let st = unsafe {
        gmzv_eval(g, 5000, 0.0, 0, [ghost.as_ptr()].as_ptr(), [1i64].as_ptr(), [3i64].as_ptr(), 1, &mut out)
    };
    assert_eq!(st, GmzvStatus::Validation);
    // NULL arrays with non-zero length rejected.
    let st = unsafe { gmzv_eval(g, 5000, 0.0, 0, ptr::null(), ptr::null(), ptr::null(), 1, &mut out) };
    assert_eq!(st, GmzvStatus::NullArgument);
    unsafe { gmzv_graph_free(g) };
}

#[test]
fn reduce_zeta_text_and_non_tree_precondition() {
    let g = parse(GAMMA1);
    let mut text: *mut c_char = ptr::null_mut();
    let st = unsafe { gmzv_reduce_zeta(g, &mut text) };
    assert_eq!(st, GmzvStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    assert_eq!(s, "2 * zeta(1,2)\n");
    unsafe { gmzv_string_free(text) };
    unsafe { gmzv_graph_free(g) };

    let theta = parse(THETA);
    let mut text: *mut c_char = ptr::null_mut();
    let st = unsafe { gmzv_reduce_zeta(theta, &mut text) };
    assert_eq!(st, GmzvStatus::Precondition);
    assert!(text.is_null());
    let msg = last_error_text().expect("message set");
    assert!(msg.contains("tree"), "unexpected message: {msg}");
    unsafe { gmzv_graph_free(theta) };
}

#[test]
fn reduce_polylog_with_decoration() {
    let g = parse(EDGE_K3);
    let name = CString::new("b").unwrap();
    let mut text: *mut c_char = ptr::null_mut();
    let st = unsafe {
        gmzv_reduce_polylog(
            g,
            [name.as_ptr()].as_ptr(),
            [1i64].as_ptr(),
            [2i64].as_ptr(),
            1,
            &mut text,
        )
    };
    assert_eq!(st, GmzvStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    assert!(s.contains("li("), "unexpected reduction: {s}");
    assert!(s.contains("1/2"), "phase missing: {s}");
    unsafe { gmzv_string_free(text) };
    unsafe { gmzv_graph_free(g) };
}

#[test]
fn verify_passes_and_fails_by_tolerance() {
    let g = parse(GAMMA1);
    let mut out = GmzvVerify::default();
    let st = unsafe {
        gmzv_verify(g, 2000, 1e-4, ptr::null(), ptr::null(), ptr::null(), 0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Ok);
    assert_eq!(out.pass, 1);
    assert!(out.abs_diff < 1e-4);
    assert!((out.combination_re - 2.0 * ZETA_3).abs() < 1e-6);

    // An absurd tolerance turns the same comparison into a failure with the
    // out-struct still filled.
    let mut out = GmzvVerify::default();
    let st = unsafe {
        gmzv_verify(g, 2000, 1e-30, ptr::null(), ptr::null(), ptr::null(), 0, &mut out)
    };
    assert_eq!(st, GmzvStatus::VerifyFailed);
    assert_eq!(out.pass, 0);
    assert!(out.abs_diff > 1e-30);
    assert!(last_error_text().expect("message").contains("tol"));
    unsafe { gmzv_graph_free(g) };
}

#[test]
fn zeta_values_and_errors() {
    let mut v = 0.0;
    let mut res = 0.0;
    let st = unsafe { gmzv_zeta([2u32].as_ptr(), 1, 1_000_000, &mut v, &mut res) };
    assert_eq!(st, GmzvStatus::Ok);
    assert!((v - ZETA_2).abs() < 1e-9, "got {v}");
    assert!(res >= 0.0);
    // zeta(1,2) = zeta(3).
    let st = unsafe { gmzv_zeta([1u32, 2].as_ptr(), 2, 1_000_000, &mut v, ptr::null_mut()) };
    assert_eq!(st, GmzvStatus::Ok);
    assert!((v - ZETA_3).abs() < 1e-7, "got {v}");
    // Divergent index.
    let st = unsafe { gmzv_zeta([1u32].as_ptr(), 1, 1000, &mut v, ptr::null_mut()) };
    assert_eq!(st, GmzvStatus::Convergence);
    // Null pointers.
    let st = unsafe { gmzv_zeta(ptr::null(), 0, 1000, &mut v, ptr::null_mut()) };
    assert_eq!(st, GmzvStatus::NullArgument);
}

#[test]
fn hecke_transform_unit_case_and_pole() {
    let mut out = GmzvTransform::default();
    let st = unsafe {
        gmzv_hecke_transform([1.0, 1.0].as_ptr(), ptr::null(), 2, 1.0, 0.0, 0.0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Ok);
    assert!((out.lhs_re - PI_OVER_4).abs() < 1e-7, "lhs {}", out.lhs_re);
    assert!((out.rhs_re - PI_OVER_4).abs() < 1e-12, "rhs {}", out.rhs_re);
    assert!(out.rel_err < 1e-6);

    // Gamma pole: s = 2, p = (1, -1) puts s_bar - p_2 at a non-positive integer.
    let st = unsafe {
        gmzv_hecke_transform([1.0, 1.0].as_ptr(), [1i64, -1].as_ptr(), 2, 2.0, 0.0, 0.0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Precondition);
    assert!(last_error_text().is_some());

    // Validation: zero scale.
    let st = unsafe {
        gmzv_hecke_transform([0.0, 1.0].as_ptr(), ptr::null(), 2, 1.0, 0.0, 0.0, &mut out)
    };
    assert_eq!(st, GmzvStatus::Validation);
}

#[test]
fn hecke_formula_and_green() {
    let mut out = GmzvFormula::default();
    let st = unsafe { gmzv_hecke_formula(5, 2.0, 2500, &mut out) };
    assert_eq!(st, GmzvStatus::Ok);
    assert!(out.rel_err < 1e-3, "rel_err {}", out.rel_err);
    assert!(out.orbits > 1000);
    assert!(out.quadrature_nodes > 0);

    // Degenerate rank-one check is an exact rearrangement.
    let st = unsafe { gmzv_hecke_formula(1, 2.0, 500, &mut out) };
    assert_eq!(st, GmzvStatus::Ok);
    assert_eq!(out.rel_err, 0.0);

    // Unsupported field parameter.
    let st = unsafe { gmzv_hecke_formula(7, 2.0, 1000, &mut out) };
    assert_eq!(st, GmzvStatus::Validation);

    let mut g = GmzvGreen::default();
    let st = unsafe { gmzv_hecke_green(5, 1, 3, 1, 5, -0.4, 0, 0, 4.0, 60.0, &mut g) };
    assert_eq!(st, GmzvStatus::Ok);
    assert!(g.terms > 1000);
    assert!(g.value_re.is_finite());
    // nu = (0,0) with a real coordinate keeps the sum real (conjugate pairs).
    assert!(g.value_im.abs() < 1e-9);
    // Bad radius.
    let st = unsafe { gmzv_hecke_green(5, 0, 1, 0, 1, 0.0, 0, 0, 4.0, 0.5, &mut g) };
    assert_eq!(st, GmzvStatus::Validation);
    // Zero denominator.
    let st = unsafe { gmzv_hecke_green(5, 1, 0, 0, 1, 0.0, 0, 0, 4.0, 60.0, &mut g) };
    assert_eq!(st, GmzvStatus::Validation);
}

#[test]
fn version_and_error_lifecycle() {
    let v = unsafe { CStr::from_ptr(gmzv_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    // A successful call clears the thread's error slot.
    let g = parse(EDGE_K3);
    assert!(last_error_text().is_none());
    unsafe { gmzv_graph_free(g) };
    // Freeing NULL strings is a no-op.
    unsafe { gmzv_string_free(ptr::null_mut()) };
}

#[test]
fn committed_header_declares_the_full_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gmzv.h"))
        .expect("committed header present");
    for needle in [
        "typedef struct GmzvGraph GmzvGraph;",
        "GMZV_STATUS_OK = 0",
        "GMZV_STATUS_VERIFY_FAILED = 5",
        "gmzv_graph_parse",
        "gmzv_graph_free",
        "gmzv_graph_info",
        "gmzv_eval",
        "gmzv_reduce_zeta",
        "gmzv_reduce_polylog",
        "gmzv_verify",
        "gmzv_zeta",
        "gmzv_hecke_transform",
        "gmzv_hecke_formula",
        "gmzv_hecke_green",
        "gmzv_string_free",
        "gmzv_last_error_message",
        "gmzv_version",
    ] {
        assert!(header.contains(needle), "header is missing: {needle}");
    }
}

/// Compile a minimal C translation unit against the committed header when a
/// C compiler is available; otherwise skip quietly.
#[test]
fn header_compiles_as_c() {
    let cc = ["cc", "gcc", "clang"].iter().find_map(|c| {
        std::process::Command::new(c)
            .arg("--version")
            .output()
            .ok()
            .filter(|o| o.status.success())
            .map(|_| *c)
    });
    let Some(cc) = cc else {
        eprintln!("no C compiler found; skipping header syntax check");
        return;
    };
    let dir = std::env::temp_dir().join(format!("gmzv_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"gmzv.h\"\n\
         int main(void) {\n\
           GmzvGraph *g = 0;\n\
           GmzvEval ev; GmzvVerify vf; GmzvTransform tr; GmzvFormula fo; GmzvGreen gr;\n\
           (void)g; (void)ev; (void)vf; (void)tr; (void)fo; (void)gr;\n\
           return GMZV_STATUS_OK;\n\
         }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg(format!("-I{}", concat!(env!("CARGO_MANIFEST_DIR"), "/include")))
        .arg(&src)
        .output()
        .expect("compiler invocation");
    assert!(
        out.status.success(),
        "header failed to compile:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let _ = std::fs::remove_dir_all(&dir);
}
