//! FFT-based linear convolution of real sequences.
//!
//! Used by the Mordell–Tornheim evaluator and the fast tree-sum evaluator,
//! where convolutions of length up to a few million would be quadratic if
//! done directly.  Sequences are non-negative and of modest dynamic range,
//! so double-precision FFT round-off stays far below every tolerance used
//! in this crate (empirically ~1e-12 relative at length 2^22).

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Direct-convolution cutoff: below this output length the O(n·m) loop is
/// faster than planning two FFTs.
const DIRECT_CUTOFF: usize = 2048;

/// Linear convolution of `a` and `b`, truncated to the first `keep`
/// entries: `out[t] = Σ_{i+j=t} a[i]·b[j]` for `t < keep`.
#[must_use]
pub fn convolve_trunc(a: &[f64], b: &[f64], keep: usize) -> Vec<f64> {
    let full = a.len() + b.len() - 1;
    let keep = keep.min(full);
    if keep == 0 || a.is_empty() || b.is_empty() {
        return vec![0.0; keep];
    }
    // Only prefixes of length `keep` can influence out[..keep].
    let a = &a[..a.len().min(keep)];
    let b = &b[..b.len().min(keep)];
    if keep <= DIRECT_CUTOFF {
        return convolve_direct(a, b, keep);
    }
    let n = (a.len() + b.len() - 1).next_power_of_two();
    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fa.resize(n, Complex64::new(0.0, 0.0));
    fb.resize(n, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= *y;
    }
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut fa);
    let scale = 1.0 / n as f64;
    fa.iter().take(keep).map(|c| c.re * scale).collect()
}

fn convolve_direct(a: &[f64], b: &[f64], keep: usize) -> Vec<f64> {
    let mut out = vec![0.0; keep];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 || i >= keep {
            continue;
        }
        let jmax = (keep - i).min(b.len());
        for (j, &bj) in b.iter().take(jmax).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}
