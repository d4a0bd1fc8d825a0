//! Numeric evaluation of multiple zeta values and multiple polylogarithms
//! on the unit circle.
//!
//! # Convention
//!
//! Indices are **increasing**: `ζ(t_1, ..., t_d) = Σ_{0 < n_1 < ... < n_d}
//! Π n_j^{-t_j}`, so convergence requires the **last** exponent `t_d ≥ 2`.
//! This is the reverse of the also-common decreasing convention; e.g. here
//! `ζ(1,2) = ζ(3)` (Euler), not `ζ(2,1)`.
//!
//! # Algorithm
//!
//! Nested sums are evaluated by cumulative inner-sum arrays: one in-place
//! pass per depth level over `b[n]`, where after level `l` the entry holds
//! `Σ_{0<n_1<...<n_{l-1}<n} Π_{j<l} z_j^{n_j} n_j^{-t_j} · z_l^n n^{-t_l}`.
//! Memory is `O(n_max)` and time `O(d·n_max)`.
//!
//! The truncation tail is corrected analytically: the inner prefix
//! `P(n) = b[n]·n^{t_d}` behaves like a polynomial of degree `< d` in
//! `ln n`, which is fitted from dyadic checkpoints and summed over
//! `n > n_max` in closed form (with Euler–Maclaurin boundary terms).  The
//! reported residual compares the corrected value at `n_max` against the
//! corrected value at `n_max/2`.
//!
//! Root-of-unity powers use exact index arithmetic modulo the common phase
//! denominator — no accumulated floating drift — and roots in the lower
//! half circle are computed as conjugates of upper-half roots so that
//! conjugating every phase conjugates the result bit for bit.

use crate::defaults;
use crate::reduce::{frac_mod_one, IntCombination, MzvIndex, PolylogTerm};
use num::complex::Complex64;
use num::rational::Ratio;
use num::{BigInt, ToPrimitive, Zero};
use thiserror::Error;

/// How the truncation tail of a sum is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailMode {
    /// Raw truncated sum.
    None,
    /// Two-point scheme: compare the (tail-corrected) values at the full
    /// and half truncation; the difference is the reported residual.
    #[default]
    TwoPoint,
}

/// Result of a truncated-sum evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Non-negative truncation-error estimate.
    pub residual: f64,
    /// Truncation bound the evaluation used.
    pub truncation: u64,
}

/// Errors from the MZV / polylog evaluator.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MzvError {
    #[error("index position {position}: exponent must be at least 1")]
    ZeroExponent { position: usize },
    #[error("divergent index: last exponent must be at least 2")]
    DivergentIndex,
    #[error("divergent term: last exponent 1 with unit last argument")]
    DivergentTerm,
    #[error("got {exps} exponents but {phases} phases")]
    PhaseCountMismatch { exps: usize, phases: usize },
    #[error("truncation bound {n_max} is below the minimum of 2")]
    BadTruncation { n_max: u64 },
    #[error("common phase denominator exceeds {max}")]
    PhaseDenominatorTooLarge { max: i64 },
}

/// Largest supported common denominator of the phases.
pub(crate) const MAX_PHASE_DENOM: i64 = 1 << 20;

/// Checkpoints used for the log-polynomial tail fit (degree capped at 5).
const MAX_FIT_POINTS: usize = 6;

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

/// Neumaier (improved Kahan) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    s: f64,
    c: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.s + self.c
    }
}

/// Componentwise compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierC {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierC {
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

// ---------------------------------------------------------------------------
// Tail correction
// ---------------------------------------------------------------------------

/// Solve the small Vandermonde system `Σ_i c_i·u_j^i = y_j` by Gaussian
/// elimination with partial pivoting (at most MAX_FIT_POINTS unknowns).
fn solve_vandermonde(us: &[f64], ys: &[f64]) -> Vec<f64> {
    let m = us.len();
    debug_assert_eq!(ys.len(), m);
    let mut a: Vec<Vec<f64>> = us
        .iter()
        .map(|&u| (0..m).map(|i| u.powi(i as i32)).collect())
        .collect();
    let mut y = ys.to_vec();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .expect("nonempty pivot range");
        a.swap(col, pivot);
        y.swap(col, pivot);
        let diag = a[col][col];
        debug_assert!(diag != 0.0, "distinct abscissae give a regular system");
        for row in col + 1..m {
            let f = a[row][col] / diag;
            if f == 0.0 {
                continue;
            }
            for k in col..m {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            y[row] -= f * y[col];
        }
    }
    let mut c = vec![0.0; m];
    for col in (0..m).rev() {
        let mut v = y[col];
        for k in col + 1..m {
            v -= a[col][k] * c[k];
        }
        c[col] = v / a[col][col];
    }
    c
}

/// `Σ_{n>m} ln^i(n/m)·n^{-t}` by the closed-form integral plus
/// Euler–Maclaurin boundary terms:
/// `m^{1-t}·i!/(t-1)^{i+1} − [i=0]·m^{-t}/2 − e_i·m^{-t-1}/12` with
/// `e_0 = −t`, `e_1 = 1`, `e_i = 0` otherwise.
fn log_power_tail(i: usize, t: u32, m: u64) -> f64 {
    let mf = m as f64;
    let t1 = f64::from(t) - 1.0;
    let mut factorial = 1.0;
    for k in 2..=i {
        factorial *= k as f64;
    }
    let integral = mf.powf(-t1) * factorial / t1.powi(i as i32 + 1);
    let boundary = if i == 0 { 0.5 * mf.powi(-(t as i32)) } else { 0.0 };
    let e = match i {
        0 => -f64::from(t),
        1 => 1.0,
        _ => 0.0,
    };
    integral - boundary - e * mf.powi(-(t as i32 + 1)) / 12.0
}

/// Number of dyadic fit checkpoints usable below `m` for a depth-`d` sum.
fn fit_points(d: usize, m: u64) -> usize {
    let mut npts = d.min(MAX_FIT_POINTS).max(1);
    while npts > 1 && (m >> (npts - 1)) < 8 {
        npts -= 1;
    }
    npts
}

/// Analytic tail `Σ_{n>m} P(n)/n^t` where the inner prefix `P` is sampled
/// from the final-level array as `P(n) = b[n]·n^t` at dyadic checkpoints
/// and fitted by a polynomial in `ln(n/m)`.  Complex-valued inner prefixes
/// reuse the same real abscissae.
fn analytic_tail(
    sample: impl Fn(u64) -> Complex64,
    d: usize,
    t: u32,
    m: u64,
) -> Complex64 {
    let npts = fit_points(d, m);
    let mut us = Vec::with_capacity(npts);
    let mut ys_re = Vec::with_capacity(npts);
    let mut ys_im = Vec::with_capacity(npts);
    let lnm = (m as f64).ln();
    for j in 0..npts {
        let nj = m >> j;
        let p = sample(nj) * (nj as f64).powi(t as i32);
        us.push((nj as f64).ln() - lnm);
        ys_re.push(p.re);
        ys_im.push(p.im);
    }
    let cre = solve_vandermonde(&us, &ys_re);
    let cim = solve_vandermonde(&us, &ys_im);
    let mut tail = Complex64::zero();
    for i in 0..npts {
        let g = log_power_tail(i, t, m);
        tail += Complex64::new(cre[i], cim[i]) * g;
    }
    tail
}

// ---------------------------------------------------------------------------
// Real path
// ---------------------------------------------------------------------------

fn validate_index(exps: &[u32]) -> Result<(), MzvError> {
    for (position, &t) in exps.iter().enumerate() {
        if t == 0 {
            return Err(MzvError::ZeroExponent { position });
        }
    }
    Ok(())
}

/// Run the level passes for a real (phase-free) nested sum; returns the
/// final-level array `b[0..=n]` with `b[0] = 0`.
fn real_levels(exps: &[u32], n: usize) -> Vec<f64> {
    let mut b = vec![0.0f64; n + 1];
    let t1 = exps[0] as i32;
    for (i, slot) in b.iter_mut().enumerate().skip(1) {
        *slot = (i as f64).powi(-t1);
    }
    for &t in &exps[1..] {
        let ti = t as i32;
        let mut prefix = Neumaier::default();
        for i in 1..=n {
            let tmp = b[i];
            b[i] = prefix.total() * (i as f64).powi(-ti);
            prefix.add(tmp);
        }
    }
    b
}

/// Truncated value at `m` (prefix sum of the final array) with compensation.
fn prefix_value_real(b: &[f64], m: u64) -> f64 {
    let mut acc = Neumaier::default();
    for i in 1..=m as usize {
        acc.add(b[i]);
    }
    acc.total()
}

/// Multiple zeta value `ζ(t_1,...,t_d)` truncated at `n_max` (see the
/// module docs for the increasing-index convention and tail handling).
pub fn zeta_mzv(exps: &[u32], n_max: u64, tail: TailMode) -> Result<EvalResult, MzvError> {
    validate_index(exps)?;
    if exps.last().is_some_and(|&t| t < 2) {
        return Err(MzvError::DivergentIndex);
    }
    if n_max < 2 {
        return Err(MzvError::BadTruncation { n_max });
    }
    if exps.is_empty() {
        return Ok(EvalResult { value: Complex64::new(1.0, 0.0), residual: 0.0, truncation: n_max });
    }
    let d = exps.len();
    let t_last = *exps.last().expect("nonempty");
    let b = real_levels(exps, n_max as usize);
    let corrected = |m: u64, with_tail: bool| -> f64 {
        let raw = prefix_value_real(&b, m);
        if !with_tail {
            return raw;
        }
        let tail = analytic_tail(
            |n| Complex64::new(b[n as usize], 0.0),
            d,
            t_last,
            m,
        );
        raw + tail.re
    };
    let with_tail = tail == TailMode::TwoPoint;
    let full = corrected(n_max, with_tail);
    let half = corrected(n_max / 2, with_tail);
    Ok(EvalResult {
        value: Complex64::new(full, 0.0),
        residual: (full - half).abs(),
        truncation: n_max,
    })
}

// ---------------------------------------------------------------------------
// Complex path
// ---------------------------------------------------------------------------

/// Exact root-of-unity source: `get(r) = exp(2πi·r/denom)`, with lower-half
/// roots formed as conjugates of upper-half ones so that the map
/// `r ↦ denom − r` is an exact floating-point conjugation.
pub(crate) struct RootSource {
    denom: u64,
    table: Option<Vec<Complex64>>,
}

impl RootSource {
    const TABLE_LIMIT: u64 = 1 << 14;

    pub(crate) fn new(denom: u64) -> Self {
        let table = (denom <= Self::TABLE_LIMIT)
            .then(|| (0..denom).map(|r| Self::compute(r, denom)).collect());
        RootSource { denom, table }
    }

    fn compute(r: u64, denom: u64) -> Complex64 {
        if r == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if 2 * r == denom {
            return Complex64::new(-1.0, 0.0);
        }
        if 2 * r > denom {
            return Self::compute(denom - r, denom).conj();
        }
        let theta = 2.0 * std::f64::consts::PI * (r as f64) / (denom as f64);
        let (sin, cos) = theta.sin_cos();
        Complex64::new(cos, sin)
    }

    pub(crate) fn get(&self, r: u64) -> Complex64 {
        match &self.table {
            Some(t) => t[r as usize],
            None => Self::compute(r, self.denom),
        }
    }
}

/// Reduce phases to `[0,1)` and return (common denominator, numerators
/// scaled to that denominator).
fn common_phase_denominator(phases: &[Ratio<i64>]) -> Result<(u64, Vec<u64>), MzvError> {
    let mut denom: i64 = 1;
    let normalized: Vec<Ratio<i64>> = phases.iter().map(|&p| frac_mod_one(p)).collect();
    for p in &normalized {
        let d = *p.denom();
        denom = num::integer::lcm(denom, d);
        if denom > MAX_PHASE_DENOM {
            return Err(MzvError::PhaseDenominatorTooLarge { max: MAX_PHASE_DENOM });
        }
    }
    let numers = normalized
        .iter()
        .map(|p| (*p.numer() * (denom / *p.denom())) as u64)
        .collect();
    Ok((denom as u64, numers))
}

/// Multiple polylogarithm `Li_{t_1..t_d}(z_1..z_d)` with exact
/// root-of-unity arguments `z_j = exp(2πi·phase_j)`, truncated at `n_max`.
///
/// Convergence requires the last level to satisfy `t_d ≥ 2` or `z_d ≠ 1`.
/// The analytic tail correction applies when the last argument is 1 (the
/// monotone case); oscillating last levels return the raw truncation with
/// the two-point residual.
pub fn polylog_multi(
    term: &PolylogTerm,
    n_max: u64,
    tail: TailMode,
) -> Result<EvalResult, MzvError> {
    let exps = &term.exps;
    let phases = &term.phases;
    if exps.len() != phases.len() {
        return Err(MzvError::PhaseCountMismatch { exps: exps.len(), phases: phases.len() });
    }
    validate_index(exps)?;
    if n_max < 2 {
        return Err(MzvError::BadTruncation { n_max });
    }
    let (denom, numers) = common_phase_denominator(phases)?;
    let last_unit = numers.last().is_some_and(|&a| a == 0);
    if exps.last().is_some_and(|&t| t < 2) && last_unit {
        return Err(MzvError::DivergentTerm);
    }
    if exps.is_empty() {
        return Ok(EvalResult { value: Complex64::new(1.0, 0.0), residual: 0.0, truncation: n_max });
    }
    if numers.iter().all(|&a| a == 0) {
        return zeta_mzv(exps, n_max, tail);
    }

    let d = exps.len();
    let n = n_max as usize;
    let roots = RootSource::new(denom);
    let mut b = vec![Complex64::zero(); n + 1];
    // Level 1.
    {
        let t1 = exps[0] as i32;
        let a = numers[0];
        let mut r = 0u64;
        for (i, slot) in b.iter_mut().enumerate().skip(1) {
            r += a;
            if r >= denom {
                r -= denom;
            }
            *slot = roots.get(r) * (i as f64).powi(-t1);
        }
    }
    // Levels 2..d.
    for l in 1..d {
        let ti = exps[l] as i32;
        let a = numers[l];
        let mut r = 0u64;
        let mut prefix = NeumaierC::default();
        for i in 1..=n {
            r += a;
            if r >= denom {
                r -= denom;
            }
            let tmp = b[i];
            b[i] = prefix.total() * roots.get(r) * (i as f64).powi(-ti);
            prefix.add(tmp);
        }
    }

    let t_last = *exps.last().expect("nonempty");
    let correct = tail == TailMode::TwoPoint && last_unit;
    let value_at = |m: u64| -> Complex64 {
        let mut acc = NeumaierC::default();
        for i in 1..=m as usize {
            acc.add(b[i]);
        }
        let mut v = acc.total();
        if correct {
            // With a unit last argument the last-level array is
            // P(n)/n^t with P the (complex) inner prefix: fit and sum.
            v += analytic_tail(|i| b[i as usize], d, t_last, m);
        }
        v
    };
    let full = value_at(n_max);
    let half = value_at(n_max / 2);
    Ok(EvalResult { value: full, residual: (full - half).norm(), truncation: n_max })
}

// ---------------------------------------------------------------------------
// Combinations
// ---------------------------------------------------------------------------

/// Evaluate an integer combination of polylog terms: coefficient-weighted
/// sum of term values; residual is `Σ |coeff|·(term residual)`.
///
/// Terms are independent; `workers > 1` evaluates them in parallel, with
/// the final accumulation always performed in term order so the result is
/// identical for any worker count.
pub fn evaluate_combination_with_workers(
    c: &IntCombination<PolylogTerm>,
    n_max: u64,
    tail: TailMode,
    workers: usize,
) -> Result<EvalResult, MzvError> {
    let terms: Vec<(&PolylogTerm, &BigInt)> = c.iter().collect();
    let results: Vec<Result<EvalResult, MzvError>> = if workers <= 1 || terms.len() <= 1 {
        terms.iter().map(|(t, _)| polylog_multi(t, n_max, tail)).collect()
    } else {
        let mut results: Vec<Option<Result<EvalResult, MzvError>>> = vec![None; terms.len()];
        let chunk = terms.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (slot_chunk, term_chunk) in
                results.chunks_mut(chunk).zip(terms.chunks(chunk))
            {
                scope.spawn(move || {
                    for (slot, (t, _)) in slot_chunk.iter_mut().zip(term_chunk) {
                        *slot = Some(polylog_multi(t, n_max, tail));
                    }
                });
            }
        });
        results.into_iter().map(|r| r.expect("all chunks processed")).collect()
    };

    let mut value = Complex64::zero();
    let mut residual = 0.0f64;
    for ((_, coeff), result) in terms.iter().zip(results) {
        let r = result?;
        let cf = coeff.to_f64().expect("BigInt to f64 conversion is total");
        value += r.value * cf;
        residual += cf.abs() * r.residual;
    }
    Ok(EvalResult { value, residual, truncation: n_max })
}

/// [`evaluate_combination_with_workers`] with the worker count taken from
/// the environment (see [`defaults::workers_from_env`]).
pub fn evaluate_combination(
    c: &IntCombination<PolylogTerm>,
    n_max: u64,
    tail: TailMode,
) -> Result<EvalResult, MzvError> {
    evaluate_combination_with_workers(c, n_max, tail, defaults::workers_from_env())
}

/// Evaluate an integer combination of MZV indices.
pub fn evaluate_mzv_combination(
    c: &IntCombination<MzvIndex>,
    n_max: u64,
    tail: TailMode,
) -> Result<EvalResult, MzvError> {
    let embedded = crate::reduce::embed_mzv_combination(c);
    evaluate_combination(&embedded, n_max, tail)
}
