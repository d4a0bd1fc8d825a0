//! Real quadratic fields and Hecke-type integral identities at desk scale.
//!
//! This module provides four groups of operations for a real quadratic field
//! `F = Q(√D)` with ring of integers `O`:
//!
//! * **Exact field arithmetic** — [`Element`] values are pairs of rationals
//!   over the basis `(1, √D)`; products, inverses, norms, traces, and
//!   embedding signs are all computed exactly.  Each supported field carries
//!   its fundamental totally positive unit `ε` (normalized so `σ₁(ε) > 1`)
//!   and the trace-dual basis of `O`.
//!
//! * **Hecke transform** — [`hecke_rhs`] evaluates the closed gamma-factor
//!   formula for the integral
//!   `∫ Π_j u_j^{-2 p_j} · (Σ_j (u_j x_j)²)^{-s} dv` over the norm-one torus
//!   `u = (e^{v_1}, …, e^{v_{r-1}}, e^{-v_1-…-v_{r-1}})`, and
//!   [`hecke_quadrature`] evaluates the same integral by adaptive Simpson
//!   quadrature so the two can be compared.
//!
//! * **Lattice Green sums** — [`plectic_green_numeric`] computes truncated
//!   sums `Σ sgn(σ(n))^ν e^{2πi·Tr(nx)} / ‖u ∘ σ(n)‖^{2+η}` over the
//!   trace-dual lattice of a (possibly rescaled) copy of `O`, with exact
//!   root-of-unity phases.
//!
//! * **Unit-folded partial zeta sums** — [`partial_zeta_rq`] sums
//!   `sgn(σ(n))^ν |N(n)|^{-w}` over dual-lattice orbits under the action of
//!   `⟨ε⟩`, selecting one representative per orbit with an exact integer
//!   fundamental-domain test, and [`hecke_formula_check`] compares the
//!   unit-torus average of a truncated Eisenstein-type sum against the
//!   matching gamma-factor multiple of the partial zeta value.

use num::complex::Complex64;
use num::integer::lcm;
use num::rational::Ratio;
use num::{One, Zero};

use crate::mzv::{MzvError, Neumaier, NeumaierC, RootSource, MAX_PHASE_DENOM};
use crate::reduce::frac_mod_one;
use crate::special::{distance_to_gamma_pole, gamma, gamma_real};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors for the quadratic-field operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadraticError {
    /// The requested field is not in the supported table.
    #[error("unsupported field parameter D={0}: supported square-free values are 2, 3, 5, 13")]
    UnsupportedField(i64),
    /// A parameter failed validation.
    #[error("invalid parameters: {0}")]
    BadParams(String),
    /// A gamma factor would be evaluated at a non-positive integer.
    #[error("gamma factor at a non-positive integer")]
    GammaPole,
    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("adaptive quadrature failed to converge to the requested tolerance")]
    QuadratureNonConvergent,
    /// An error bubbled up from the exact-phase evaluation layer.
    #[error(transparent)]
    Eval(#[from] MzvError),
}

// ---------------------------------------------------------------------------
// Exact elements of Q(√D)
// ---------------------------------------------------------------------------

/// Exact element `a + b·√D` of a real quadratic field, with rational
/// coordinates over the basis `(1, √D)`.
///
/// The field itself (the value of `D`) is carried by the
/// [`RealQuadraticField`] that operates on the element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element {
    /// Rational part.
    pub a: Ratio<i64>,
    /// Coefficient of `√D`.
    pub b: Ratio<i64>,
}

impl Element {
    /// Builds `a + b·√D` from rational coordinates.
    #[must_use]
    pub fn new(a: Ratio<i64>, b: Ratio<i64>) -> Self {
        Element { a, b }
    }

    /// Builds `a + b·√D` from integer coordinates.
    #[must_use]
    pub fn from_integers(a: i64, b: i64) -> Self {
        Element {
            a: Ratio::from_integer(a),
            b: Ratio::from_integer(b),
        }
    }

    /// The zero element.
    #[must_use]
    pub fn zero() -> Self {
        Element::from_integers(0, 0)
    }

    /// The unit element `1`.
    #[must_use]
    pub fn one() -> Self {
        Element::from_integers(1, 0)
    }

    /// Additive inverse.
    #[must_use]
    pub fn neg(self) -> Self {
        Element {
            a: -self.a,
            b: -self.b,
        }
    }
}

fn rat_f64(r: Ratio<i64>) -> f64 {
    (*r.numer() as f64) / (*r.denom() as f64)
}

/// Exact sign of `a + b·√d` for integers `a, b` and a positive non-square
/// `d`.  Returns `0` only for `a = b = 0`.
fn sign_a_plus_b_sqrt(a: i64, b: i64, d: i64) -> i32 {
    if a == 0 && b == 0 {
        return 0;
    }
    if a >= 0 && b >= 0 {
        return 1;
    }
    if a <= 0 && b <= 0 {
        return -1;
    }
    // Mixed signs: compare a² with d·b² (equality is impossible since d is
    // not a perfect square and (a, b) ≠ (0, 0)).
    let lhs = (a as i128) * (a as i128);
    let rhs = (d as i128) * (b as i128) * (b as i128);
    if a > 0 {
        if lhs > rhs {
            1
        } else {
            -1
        }
    } else if rhs > lhs {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Real quadratic fields
// ---------------------------------------------------------------------------

/// A real quadratic field `Q(√D)` from a small precomputed table
/// (`D ∈ {2, 3, 5, 13}`), carrying exact data for its ring of integers
/// `O = Z[ω]`, its fundamental totally positive unit, and the trace-dual
/// basis of `O`.
#[derive(Debug, Clone)]
pub struct RealQuadraticField {
    d: i64,
    sqrt_d: f64,
    omega: Element,
    epsilon: Element,
    dual: (Element, Element),
}

impl RealQuadraticField {
    /// Constructs the field `Q(√D)` for a supported square-free `D`.
    ///
    /// The totally positive fundamental units are stored exactly:
    /// `3 + 2√2`, `2 + √3`, `(3 + √5)/2`, and `(11 + 3√13)/2`.  Each has
    /// norm `1` and first embedding `> 1`.
    pub fn new(d: i64) -> Result<Self, QuadraticError> {
        let (ea, eb): (Ratio<i64>, Ratio<i64>) = match d {
            2 => (Ratio::from_integer(3), Ratio::from_integer(2)),
            3 => (Ratio::from_integer(2), Ratio::from_integer(1)),
            5 => (Ratio::new(3, 2), Ratio::new(1, 2)),
            13 => (Ratio::new(11, 2), Ratio::new(3, 2)),
            _ => return Err(QuadraticError::UnsupportedField(d)),
        };
        let omega = if d % 4 == 1 {
            Element::new(Ratio::new(1, 2), Ratio::new(1, 2))
        } else {
            Element::from_integers(0, 1)
        };
        // Trace-dual basis (λ₁, λ₂) of O with respect to the basis (1, ω):
        // Tr(λ_i · e_j) = δ_ij.
        let half = Ratio::new(1, 2);
        let dual = if d % 4 == 1 {
            (
                Element::new(half, Ratio::new(-1, 2 * d)),
                Element::new(Ratio::zero(), Ratio::new(1, d)),
            )
        } else {
            (
                Element::new(half, Ratio::zero()),
                Element::new(Ratio::zero(), Ratio::new(1, 2 * d)),
            )
        };
        let fld = RealQuadraticField {
            d,
            sqrt_d: (d as f64).sqrt(),
            omega,
            epsilon: Element::new(ea, eb),
            dual,
        };
        debug_assert_eq!(fld.norm(fld.epsilon), Ratio::one());
        debug_assert!(fld.embed(fld.epsilon).0 > 1.0);
        Ok(fld)
    }

    /// The square-free parameter `D`.
    #[must_use]
    pub fn d(&self) -> i64 {
        self.d
    }

    /// The field discriminant: `D` for `D ≡ 1 (mod 4)`, otherwise `4D`.
    #[must_use]
    pub fn discriminant(&self) -> i64 {
        if self.d % 4 == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    /// `√D` as a float.
    #[must_use]
    pub fn sqrt_d(&self) -> f64 {
        self.sqrt_d
    }

    /// The ring generator `ω`: `(1 + √D)/2` when `D ≡ 1 (mod 4)`, else `√D`.
    #[must_use]
    pub fn omega(&self) -> Element {
        self.omega
    }

    /// The fundamental totally positive unit `ε` (with `σ₁(ε) > 1`).
    #[must_use]
    pub fn epsilon(&self) -> Element {
        self.epsilon
    }

    /// `log σ₁(ε)` — the length of the unit torus.
    #[must_use]
    pub fn log_epsilon(&self) -> f64 {
        self.embed(self.epsilon).0.ln()
    }

    /// The trace-dual basis `(λ₁, λ₂)` of `O` with respect to `(1, ω)`.
    #[must_use]
    pub fn dual_basis(&self) -> (Element, Element) {
        self.dual
    }

    /// Exact product of two elements.
    #[must_use]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        let d = Ratio::from_integer(self.d);
        Element {
            a: x.a * y.a + d * x.b * y.b,
            b: x.a * y.b + x.b * y.a,
        }
    }

    /// Galois conjugate `a - b·√D`.
    #[must_use]
    pub fn conj(&self, x: Element) -> Element {
        Element { a: x.a, b: -x.b }
    }

    /// Exact field norm `a² - D·b²`.
    #[must_use]
    pub fn norm(&self, x: Element) -> Ratio<i64> {
        x.a * x.a - Ratio::from_integer(self.d) * x.b * x.b
    }

    /// Exact field trace `2a`.
    #[must_use]
    pub fn trace(&self, x: Element) -> Ratio<i64> {
        x.a + x.a
    }

    /// Exact inverse; fails for the zero element.
    pub fn inv(&self, x: Element) -> Result<Element, QuadraticError> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(QuadraticError::BadParams(
                "cannot invert the zero element".into(),
            ));
        }
        let c = self.conj(x);
        Ok(Element {
            a: c.a / n,
            b: c.b / n,
        })
    }

    /// Both real embeddings `(σ₁(x), σ₂(x)) = (a + b√D, a - b√D)`.
    #[must_use]
    pub fn embed(&self, x: Element) -> (f64, f64) {
        let a = rat_f64(x.a);
        let b = rat_f64(x.b);
        (a + b * self.sqrt_d, a - b * self.sqrt_d)
    }

    /// Exact sign of `σ₁(x)` (`second = false`) or `σ₂(x)` (`second = true`).
    #[must_use]
    pub fn embedding_sign(&self, x: Element, second: bool) -> i32 {
        let b = if second { -x.b } else { x.b };
        let l = lcm(*x.a.denom(), *b.denom());
        let an = *x.a.numer() * (l / *x.a.denom());
        let bn = *b.numer() * (l / *b.denom());
        sign_a_plus_b_sqrt(an, bn, self.d)
    }

    /// Exact total positivity test: both embeddings strictly positive.
    #[must_use]
    pub fn is_totally_positive(&self, x: Element) -> bool {
        self.embedding_sign(x, false) > 0 && self.embedding_sign(x, true) > 0
    }

    /// Converts coordinates over the ring basis `(1, ω)` into an element.
    #[must_use]
    pub fn from_omega_basis(&self, c: Ratio<i64>, d: Ratio<i64>) -> Element {
        Element {
            a: c + d * self.omega.a,
            b: d * self.omega.b,
        }
    }

    /// Writes an element in coordinates over the ring basis `(1, ω)`.
    #[must_use]
    pub fn to_omega_basis(&self, x: Element) -> (Ratio<i64>, Ratio<i64>) {
        let d = x.b / self.omega.b;
        let c = x.a - d * self.omega.a;
        (c, d)
    }

    /// The inverse unit `ε⁻¹` written as `(f₁ + f₂·√D)/f₃` with integers
    /// `f₁, f₂` and a positive integer `f₃`.
    fn unit_inverse_triple(&self) -> (i64, i64, i64) {
        // N(ε) = 1, so ε⁻¹ is the conjugate of ε.
        let inv = self.conj(self.epsilon);
        let f3 = lcm(*inv.a.denom(), *inv.b.denom());
        (
            *inv.a.numer() * (f3 / *inv.a.denom()),
            *inv.b.numer() * (f3 / *inv.b.denom()),
            f3,
        )
    }
}

// ---------------------------------------------------------------------------
// Hecke transform: closed form and quadrature
// ---------------------------------------------------------------------------

/// Parameters of the rank-`r` Hecke transform: `r` nonzero reals `x`, a
/// complex exponent `s` with positive real part, and `r` integer twisting
/// exponents `p`.
#[derive(Debug, Clone)]
pub struct HeckeParams {
    /// Nonzero real scaling of each embedding axis.
    pub x: Vec<f64>,
    /// Complex exponent, `Re(s) > 0`.
    pub s: Complex64,
    /// Integer twisting exponent per axis.
    pub p: Vec<i64>,
}

impl HeckeParams {
    /// Convenience constructor.
    #[must_use]
    pub fn new(x: Vec<f64>, s: Complex64, p: Vec<i64>) -> Self {
        HeckeParams { x, s, p }
    }

    /// The rank `r` (number of axes).
    #[must_use]
    pub fn rank(&self) -> usize {
        self.x.len()
    }

    /// The averaged exponent `s̄ = (s + Σ_j p_j) / r`.
    #[must_use]
    pub fn s_bar(&self) -> Complex64 {
        let psum: i64 = self.p.iter().sum();
        (self.s + Complex64::new(psum as f64, 0.0)) / (self.rank() as f64)
    }

    fn validate(&self) -> Result<(), QuadraticError> {
        let r = self.rank();
        if r == 0 || r > 3 {
            return Err(QuadraticError::BadParams(
                "rank must be 1, 2, or 3".into(),
            ));
        }
        if self.p.len() != r {
            return Err(QuadraticError::BadParams(
                "x and p must have the same length".into(),
            ));
        }
        if self.x.iter().any(|&x| !x.is_finite() || x == 0.0) {
            return Err(QuadraticError::BadParams(
                "every component of x must be finite and nonzero".into(),
            ));
        }
        if !self.s.re.is_finite() || !self.s.im.is_finite() || self.s.re <= 0.0 {
            return Err(QuadraticError::BadParams(
                "the exponent s must be finite with Re(s) > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Closed form of the rank-`r` Hecke transform:
///
/// `2^{1-r}/(r·Γ(s)) · Π_j Γ(s̄ - p_j) · |x_j|^{2(p_j - s̄)}`
/// with `s̄ = (s + Σ_j p_j)/r`.
///
/// Fails with [`QuadraticError::GammaPole`] when any `s̄ - p_j` lies on a
/// non-positive integer.
pub fn hecke_rhs(params: &HeckeParams) -> Result<Complex64, QuadraticError> {
    params.validate()?;
    let r = params.rank();
    let s_bar = params.s_bar();
    let mut val = Complex64::new(2f64.powi(1 - r as i32) / r as f64, 0.0) / gamma(params.s);
    for j in 0..r {
        let arg = s_bar - Complex64::new(params.p[j] as f64, 0.0);
        if distance_to_gamma_pole(arg) < 1e-8 {
            return Err(QuadraticError::GammaPole);
        }
        val *= gamma(arg);
        let exponent = 2.0 * (Complex64::new(params.p[j] as f64, 0.0) - s_bar);
        val *= (exponent * params.x[j].abs().ln()).exp();
    }
    Ok(val)
}

/// One adaptive-Simpson refinement step over `[a, b]`.
#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    min_step: f64,
    depth: u32,
) -> Result<Complex64, QuadraticError>
where
    F: Fn(f64) -> Result<Complex64, QuadraticError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || (b - a) <= min_step {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadraticError::QuadratureNonConvergent);
    }
    let half_tol = 0.5 * tol;
    let l = simpson_step(f, a, m, fa, flm, fm, left, half_tol, min_step, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, half_tol, min_step, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of a complex-valued integrand over `[a, b]`
/// with absolute tolerance `tol`.
fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<Complex64, QuadraticError>
where
    F: Fn(f64) -> Result<Complex64, QuadraticError>,
{
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let min_step = (b - a) * 2f64.powi(-40);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, min_step, 44)
}

/// Evaluates the rank-`r` Hecke transform by quadrature over the norm-one
/// torus, with absolute tolerance `tol`:
///
/// * `r = 1`: no integral remains; the value `|x₁|^{-2s}` is exact.
/// * `r = 2`: one adaptive Simpson integral over the torus coordinate.
/// * `r = 3`: an iterated pair of adaptive Simpson integrals.
///
/// Fails with [`QuadraticError::QuadratureNonConvergent`] when any
/// `Re(s̄ - p_j) ≤ 0` (the integral diverges) or when refinement cannot
/// reach the tolerance.
pub fn hecke_quadrature(params: &HeckeParams, tol: f64) -> Result<Complex64, QuadraticError> {
    params.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(QuadraticError::BadParams(
            "quadrature tolerance must be a positive finite number".into(),
        ));
    }
    let r = params.rank();
    let s = params.s;
    let s_bar = params.s_bar();
    let min_arg = params
        .p
        .iter()
        .map(|&p| s_bar.re - p as f64)
        .fold(f64::INFINITY, f64::min);
    if r == 1 {
        return Ok((-2.0 * s * params.x[0].abs().ln()).exp());
    }
    if min_arg <= 0.0 {
        return Err(QuadraticError::QuadratureNonConvergent);
    }
    let ln_x_budget: f64 = params.x.iter().map(|&x| 2.0 * x.abs().ln().abs()).sum();
    match r {
        2 => {
            let (x1, x2) = (params.x[0], params.x[1]);
            let dp = (params.p[0] - params.p[1]) as f64;
            let f = move |v: f64| -> Result<Complex64, QuadraticError> {
                let q = (x1 * v.exp()).powi(2) + (x2 * (-v).exp()).powi(2);
                let expnt = Complex64::new(-2.0 * dp * v - s.re * q.ln(), -s.im * q.ln());
                Ok(expnt.exp())
            };
            // Exponential decay rate toward v → ±∞ is 4·Re(s̄ - p_j); pick а
            // window where the integrand cannot exceed e^{-48} of its scale.
            let kp = 4.0 * (s_bar.re - params.p[1] as f64);
            let km = 4.0 * (s_bar.re - params.p[0] as f64);
            let vp = (48.0 + ln_x_budget) / kp + 2.0;
            let vm = (48.0 + ln_x_budget) / km + 2.0;
            adaptive_simpson(&f, -vm, vp, tol)
        }
        3 => {
            let x = [params.x[0], params.x[1], params.x[2]];
            let p = [
                params.p[0] as f64,
                params.p[1] as f64,
                params.p[2] as f64,
            ];
            // Along every ray the integrand decays at least at rate
            // 3·min_j Re(s̄ - p_j) in the sup norm of (v₁, v₂).
            let kappa = 3.0 * min_arg;
            let v_max = (50.0 + ln_x_budget) / kappa + 2.0;
            let inner_tol = tol / (8.0 * v_max);
            let f2 = move |v1: f64, v2: f64| -> Complex64 {
                let v3 = -v1 - v2;
                let q = (x[0] * v1.exp()).powi(2)
                    + (x[1] * v2.exp()).powi(2)
                    + (x[2] * v3.exp()).powi(2);
                let lin = -2.0 * (p[0] * v1 + p[1] * v2 + p[2] * v3);
                let expnt = Complex64::new(lin - s.re * q.ln(), -s.im * q.ln());
                expnt.exp()
            };
            let outer = move |v1: f64| -> Result<Complex64, QuadraticError> {
                let g = move |v2: f64| -> Result<Complex64, QuadraticError> { Ok(f2(v1, v2)) };
                adaptive_simpson(&g, -v_max, v_max, inner_tol)
            };
            adaptive_simpson(&outer, -v_max, v_max, tol)
        }
        _ => unreachable!("rank validated to 1..=3"),
    }
}

// ---------------------------------------------------------------------------
// Lattice enumeration
// ---------------------------------------------------------------------------

/// A rank-2 lattice given by the real embeddings of its two basis vectors.
struct DiskBasis {
    a: (f64, f64),
    b: (f64, f64),
}

/// Visits every nonzero lattice point `m₁·A + m₂·B` whose embedding norm is
/// at most `radius`, in ascending `(m₁, m₂)` order.  The callback receives
/// the integer coordinates and the two embedding components.
fn for_each_point_in_disk<F: FnMut(i64, i64, f64, f64)>(
    basis: &DiskBasis,
    radius: f64,
    mut visit: F,
) {
    let g11 = basis.a.0 * basis.a.0 + basis.a.1 * basis.a.1;
    let g22 = basis.b.0 * basis.b.0 + basis.b.1 * basis.b.1;
    let g12 = basis.a.0 * basis.b.0 + basis.a.1 * basis.b.1;
    let det = g11 * g22 - g12 * g12;
    debug_assert!(det > 0.0, "lattice basis must be non-degenerate");
    let r2 = radius * radius;
    let m1_max = (radius * (g22 / det).sqrt()).floor() as i64 + 1;
    let norm_cap = r2 * (1.0 + 1e-12);
    for m1 in -m1_max..=m1_max {
        let m1f = m1 as f64;
        let disc_q = g22 * r2 - det * m1f * m1f;
        if disc_q < 0.0 {
            continue;
        }
        let sq = disc_q.sqrt();
        let lo = ((-g12 * m1f - sq) / g22).floor() as i64 - 1;
        let hi = ((-g12 * m1f + sq) / g22).ceil() as i64 + 1;
        for m2 in lo..=hi {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let m2f = m2 as f64;
            let s1 = m1f * basis.a.0 + m2f * basis.b.0;
            let s2 = m1f * basis.a.1 + m2f * basis.b.1;
            if s1 * s1 + s2 * s2 <= norm_cap {
                visit(m1, m2, s1, s2);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Plectic Green sums
// ---------------------------------------------------------------------------

/// Truncation and regularization settings for [`plectic_green_numeric`].
#[derive(Debug, Clone, Copy)]
pub struct GreenConfig {
    /// Euclidean truncation radius: dual-lattice points with embedding norm
    /// `‖σ(n)‖ ≤ radius` enter the sum.
    pub radius: f64,
    /// Convergence shift: every term carries the exponent `-(2 + eta)`;
    /// must be positive.
    pub eta: f64,
}

/// Result of a truncated lattice Green sum.
#[derive(Debug, Clone, Copy)]
pub struct GreenEval {
    /// The truncated sum.
    pub value: Complex64,
    /// Number of lattice points that entered the sum.
    pub terms: u64,
}

/// Truncated Green sum over the trace-dual lattice of `α·O`:
///
/// `g(x, u) = Σ sgn(σ₁ n)^{ν₁} sgn(σ₂ n)^{ν₂} · e^{2πi·Tr(n x)} / ‖u ∘ σ(n)‖^{2+η}`
///
/// where `n` runs over nonzero points of the dual lattice with
/// `‖σ(n)‖ ≤ radius`, and `u = (e^v, e^{-v})` is a point of the norm-one
/// torus.
///
/// * `x` is given by exact rational coordinates over the ring basis
///   `(1, ω)`; the pairing `Tr(n x)` is then exactly rational and every
///   phase is taken from an exact root-of-unity table.
/// * `scale` replaces the ring `O` by `α·O` (so the sum runs over the dual
///   lattice `α⁻¹·O^∨`); `None` means `α = 1`.
pub fn plectic_green_numeric(
    fld: &RealQuadraticField,
    x: (Ratio<i64>, Ratio<i64>),
    v: f64,
    nu: (u8, u8),
    scale: Option<Element>,
    cfg: &GreenConfig,
) -> Result<GreenEval, QuadraticError> {
    if !(cfg.radius >= 1.0) || !cfg.radius.is_finite() {
        return Err(QuadraticError::BadParams(
            "truncation radius must be finite and at least 1".into(),
        ));
    }
    if !(cfg.eta > 0.0) || !cfg.eta.is_finite() {
        return Err(QuadraticError::BadParams(
            "the convergence shift eta must be finite and positive".into(),
        ));
    }
    if !v.is_finite() {
        return Err(QuadraticError::BadParams(
            "the torus coordinate must be finite".into(),
        ));
    }
    let alpha = scale.unwrap_or_else(Element::one);
    let alpha_inv = self_inv_for_scale(fld, alpha)?;
    let (lam1, lam2) = fld.dual_basis();
    let b1 = fld.mul(alpha_inv, lam1);
    let b2 = fld.mul(alpha_inv, lam2);
    let basis = DiskBasis {
        a: fld.embed(b1),
        b: fld.embed(b2),
    };

    // Exact pairing: Tr(α⁻¹(m₁λ₁ + m₂λ₂)·x) = m₁·y₁ + m₂·y₂ where
    // (y₁, y₂) are the (1, ω)-coordinates of y = α⁻¹·x.
    let x_elem = fld.from_omega_basis(x.0, x.1);
    let y = fld.mul(alpha_inv, x_elem);
    let (y1, y2) = fld.to_omega_basis(y);
    let ph1 = frac_mod_one(y1);
    let ph2 = frac_mod_one(y2);
    let mut denom: i64 = 1;
    for p in [ph1, ph2] {
        denom = lcm(denom, *p.denom());
        if denom > MAX_PHASE_DENOM {
            return Err(MzvError::PhaseDenominatorTooLarge {
                max: MAX_PHASE_DENOM,
            }
            .into());
        }
    }
    let n1 = *ph1.numer() * (denom / *ph1.denom());
    let n2 = *ph2.numer() * (denom / *ph2.denom());
    let twisted = n1 != 0 || n2 != 0;
    let roots = twisted.then(|| RootSource::new(denom as u64));

    let u1 = v.exp();
    let u2 = (-v).exp();
    let exponent = 1.0 + 0.5 * cfg.eta;
    let int_exp = (exponent.fract() == 0.0 && exponent <= 32.0).then_some(exponent as i32);
    let odd1 = nu.0 & 1 == 1;
    let odd2 = nu.1 & 1 == 1;

    let mut acc = NeumaierC::default();
    let mut terms: u64 = 0;
    for_each_point_in_disk(&basis, cfg.radius, |m1, m2, s1, s2| {
        let e1 = u1 * s1;
        let e2 = u2 * s2;
        let nsq = e1 * e1 + e2 * e2;
        let w = match int_exp {
            Some(k) => nsq.powi(-k),
            None => nsq.powf(-exponent),
        };
        let mut sw = w;
        if odd1 && s1 < 0.0 {
            sw = -sw;
        }
        if odd2 && s2 < 0.0 {
            sw = -sw;
        }
        match &roots {
            Some(r) => {
                let idx = (m1 * n1 + m2 * n2).rem_euclid(denom) as u64;
                acc.add(r.get(idx) * sw);
            }
            None => acc.add(Complex64::new(sw, 0.0)),
        }
        terms += 1;
    });
    Ok(GreenEval {
        value: acc.total(),
        terms,
    })
}

fn self_inv_for_scale(
    fld: &RealQuadraticField,
    alpha: Element,
) -> Result<Element, QuadraticError> {
    fld.inv(alpha).map_err(|_| {
        QuadraticError::BadParams("the lattice scale must be a nonzero element".into())
    })
}

// ---------------------------------------------------------------------------
// Unit-folded partial zeta sums
// ---------------------------------------------------------------------------

/// A unit-folded lattice sum: the value together with the number of orbit
/// representatives that entered it.
#[derive(Debug, Clone, Copy)]
pub struct OrbitSum {
    /// The folded sum `Σ sgn(σ n)^ν |N(n)|^{-w}`.
    pub value: f64,
    /// Number of orbit representatives with `|N(n)| ≤ bound`.
    pub orbits: u64,
}

/// Sums `sgn(σ₁ n)^{ν₁} sgn(σ₂ n)^{ν₂} · |N(n)|^{-w}` over nonzero points
/// of the trace-dual lattice of `O` with `|N(n)| ≤ bound`, taking exactly
/// one representative from each orbit of the totally positive unit group
/// `⟨ε⟩`.
///
/// The representative of an orbit is the point with
/// `0 ≤ log|σ₁(n)/σ₂(n)| / (2 log ε) < 1`; membership is decided by an
/// exact integer test (no floating-point boundary cases):
/// `σ₁² ≥ σ₂²` exactly, and `σ₁² < σ₂²` exactly after one division by `ε`.
///
/// Requires `w > 1` (absolute convergence of the full sum) and a positive
/// `bound`.
pub fn partial_zeta_rq(
    fld: &RealQuadraticField,
    nu: (u8, u8),
    w: f64,
    bound: u64,
) -> Result<OrbitSum, QuadraticError> {
    if !(w > 1.0) || !w.is_finite() {
        return Err(QuadraticError::BadParams(
            "the norm exponent w must be a finite real greater than 1".into(),
        ));
    }
    if bound == 0 {
        return Err(QuadraticError::BadParams(
            "the norm bound must be positive".into(),
        ));
    }
    let d = fld.d;
    let disc = fld.discriminant();
    // Every dual-lattice point is μ/√disc for a ring element μ; with
    // μ = c + k·ω write 2μ = A₂ + B₂·√D.  Then |N(n)| ≤ bound becomes the
    // exact integer condition |A₂² - D·B₂²| ≤ 4·disc·bound.
    let bound_i = i64::try_from(bound)
        .map_err(|_| QuadraticError::BadParams("norm bound is too large".into()))?;
    let n4_cap: i64 = 4i64
        .checked_mul(disc)
        .and_then(|t| t.checked_mul(bound_i))
        .ok_or_else(|| QuadraticError::BadParams("norm bound is too large".into()))?;
    let (w1, w2) = fld.embed(fld.omega);
    let eps1 = fld.embed(fld.epsilon).0;
    let (f1, f2, _f3) = fld.unit_inverse_triple();
    let bd = (bound as f64) * (disc as f64);
    // Inside the fundamental domain, |σ₂| ≤ √(|N|) and |σ₁| ≤ ε·√(|N|)
    // (norms taken for μ = √disc·n, so |N(μ)| ≤ disc·bound).
    let l1 = eps1 * bd.sqrt() * (1.0 + 1e-12) + 1.0;
    let l2 = bd.sqrt() * (1.0 + 1e-12) + 1.0;
    let k_max = ((l1 + l2) / (w1 - w2)).floor() as i64 + 1;
    let int_w = (w.fract() == 0.0 && w <= 30.0).then_some(w as i32);
    let odd1 = nu.0 & 1 == 1;
    let odd2 = nu.1 & 1 == 1;

    let mut acc = Neumaier::default();
    let mut orbits: u64 = 0;
    for k in -k_max..=k_max {
        let kf = k as f64;
        let c_lo = (-l1 - kf * w1).max(-l2 - kf * w2).floor() as i64 - 1;
        let c_hi = (l1 - kf * w1).min(l2 - kf * w2).ceil() as i64 + 1;
        for c in c_lo..=c_hi {
            // 2μ = A₂ + B₂√D for μ = c + k·ω.
            let (a2, b2) = if d % 4 == 1 {
                (2 * c + k, k)
            } else {
                (2 * c, 2 * k)
            };
            if a2 == 0 && b2 == 0 {
                continue;
            }
            let n4 = a2 * a2 - d * b2 * b2;
            if n4 == 0 || n4.abs() > n4_cap {
                continue;
            }
            // Fundamental domain, first half: σ₁² ≥ σ₂², i.e. (2a)(2b) ≥ 0.
            if a2 * b2 < 0 {
                continue;
            }
            // Second half: strictly σ₁² < σ₂² after multiplying by ε⁻¹.
            // With ε⁻¹ ∝ f₁ + f₂√D, the coordinates of 2ε⁻¹μ are
            // proportional to (A₂f₁ + B₂f₂D, A₂f₂ + B₂f₁).
            let g1 = a2 * f1 + b2 * f2 * d;
            let g2 = a2 * f2 + b2 * f1;
            if g1 * g2 >= 0 {
                continue;
            }
            let mut sf = 1i32;
            // Signs of the dual element n = μ/√disc: the first embedding
            // keeps the sign of μ, the second is flipped by σ₂(√disc) < 0.
            if odd1 && sign_a_plus_b_sqrt(a2, b2, d) < 0 {
                sf = -sf;
            }
            if odd2 && sign_a_plus_b_sqrt(a2, -b2, d) > 0 {
                sf = -sf;
            }
            let base = n4.abs() as f64;
            let t = match int_w {
                Some(e) => base.powi(-e),
                None => base.powf(-w),
            };
            acc.add(sf as f64 * t);
            orbits += 1;
        }
    }
    // Each term was |4·disc·N(n)|^{-w}; restore the |N(n)|^{-w} scale.
    let value = acc.total() * (4.0 * disc as f64).powf(w);
    Ok(OrbitSum { value, orbits })
}

// ---------------------------------------------------------------------------
// Formula check: torus average of an Eisenstein-type sum vs partial zeta
// ---------------------------------------------------------------------------

/// Result of a desk-scale comparison between the unit-torus average of a
/// truncated Eisenstein-type lattice sum and the matching gamma-factor
/// multiple of a unit-folded partial zeta sum.
#[derive(Debug, Clone, Copy)]
pub struct FormulaCheck {
    /// Quadrature value of the truncated torus integral.
    pub lhs: f64,
    /// Gamma-factor multiple of the truncated partial zeta sum.
    pub rhs: f64,
    /// Relative disagreement `|lhs - rhs| / |rhs|`.
    pub rel_err: f64,
    /// Number of quadrature nodes used for the torus integral.
    pub quadrature_nodes: u32,
    /// Number of unit orbits in the partial zeta sum.
    pub orbits: u64,
}

/// Compares both sides of the degree-2 torus-average identity
///
/// `∫₀^{log ε} Σ_n ‖u(v) ∘ σ(n)‖^{-2s} dv  =  (2^{1-2}/2)·Γ(s/2)²/Γ(s) · Σ_orbits |N(n)|^{-s}`
///
/// at a finite lattice bound.  The left side truncates each node's sum at
/// `‖u ∘ σ(n)‖ ≤ √bound` (so both sides keep terms of comparable size) and
/// integrates with composite Simpson; the right side is
/// [`partial_zeta_rq`] with `|N(n)| ≤ bound`.  Both truncation errors decay
/// like `1/bound`, so the reported `rel_err` shrinks as the bound grows.
pub fn hecke_formula_check(
    fld: &RealQuadraticField,
    s: f64,
    bound: u64,
) -> Result<FormulaCheck, QuadraticError> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(QuadraticError::BadParams(
            "the exponent s must be a finite real greater than 1".into(),
        ));
    }
    if bound < 4 {
        return Err(QuadraticError::BadParams(
            "the lattice bound must be at least 4".into(),
        ));
    }
    let pz = partial_zeta_rq(fld, (0, 0), s, bound)?;
    let gam = gamma_real(0.5 * s).powi(2) / gamma_real(s);
    let rhs = 0.25 * gam * pz.value;

    let (lam1, lam2) = fld.dual_basis();
    let a0 = fld.embed(lam1);
    let b0 = fld.embed(lam2);
    let radius = (bound as f64).sqrt();
    let int_exp = (s.fract() == 0.0 && s <= 32.0).then_some(s as i32);
    let intervals: u32 = 128;
    let length = fld.log_epsilon();
    let h = length / intervals as f64;
    let mut integral = Neumaier::default();
    for i in 0..=intervals {
        let v = i as f64 * h;
        let u1 = v.exp();
        let u2 = (-v).exp();
        let basis = DiskBasis {
            a: (u1 * a0.0, u2 * a0.1),
            b: (u1 * b0.0, u2 * b0.1),
        };
        let mut node = Neumaier::default();
        for_each_point_in_disk(&basis, radius, |_m1, _m2, e1, e2| {
            let nsq = e1 * e1 + e2 * e2;
            let t = match int_exp {
                Some(k) => nsq.powi(-k),
                None => nsq.powf(-s),
            };
            node.add(t);
        });
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        integral.add(weight * node.total());
    }
    let lhs = integral.total() * h / 3.0;
    let rel_err = (lhs - rhs).abs() / rhs.abs();
    Ok(FormulaCheck {
        lhs,
        rhs,
        rel_err,
        quadrature_nodes: intervals + 1,
        orbits: pz.orbits,
    })
}

/// Degenerate rank-1 analog of [`hecke_formula_check`] over the rational
/// integers: the unit group is trivial, no torus integral remains, and both
/// sides reduce to the same truncated sum `2·Σ_{0<n≤bound} n^{-2s}`, so the
/// reported relative error is exactly zero.
pub fn hecke_formula_check_r1(s: f64, bound: u64) -> Result<FormulaCheck, QuadraticError> {
    if !(s > 0.5) || !s.is_finite() {
        return Err(QuadraticError::BadParams(
            "the exponent s must be a finite real greater than 1/2".into(),
        ));
    }
    if bound == 0 {
        return Err(QuadraticError::BadParams(
            "the lattice bound must be positive".into(),
        ));
    }
    let side = |cap: u64| -> f64 {
        let mut acc = Neumaier::default();
        for n in (1..=cap).rev() {
            acc.add(2.0 * (n as f64).powf(-2.0 * s));
        }
        acc.total()
    };
    let lhs = side(bound);
    let rhs = side(bound);
    Ok(FormulaCheck {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs(),
        quadrature_nodes: 1,
        orbits: 2 * bound,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
