//! Generalized multiple zeta values indexed by decorated graphs.
//!
//! A decorated graph — finite, connected, with a marked set of boundary
//! vertices, a positive subdivision weight `k_e` on every edge, and a sign
//! bit `nu_e` — determines a constrained lattice sum: one integer variable
//! per edge, conservation (Kirchhoff) constraints at every interior vertex,
//! and the summand `prod_e sign_e(n_e) / n_e^{k_e}` restricted to nonzero
//! edge variables.  Boundary vertices may additionally carry torsion
//! decorations `x_v` in `Q/Z` which twist the sum by a root-of-unity phase.
//!
//! This crate provides, for such sums:
//!
//! * **Numeric evaluation** ([`series`]) — truncated constrained
//!   multi-sums with optional two-point tail extrapolation, a fast
//!   convolution-based evaluator for tree graphs, and a Mordell–Tornheim
//!   evaluator built on FFT convolution.
//! * **Symbolic reduction** ([`reduce`]) — for tree graphs, an exact
//!   rewriting of the product of linear forms into iterated-prefix chains
//!   (the Eisenstein splitting trick), producing integer combinations of
//!   classical multiple zeta values, or of multiple polylogarithms at
//!   roots of unity when torsion decorations are present.
//! * **Classical evaluators** ([`mzv`]) — streaming, compensated
//!   evaluation of multiple zeta values and multiple polylogarithms at
//!   roots of unity.
//! * **Number-field checks** ([`quadratic`]) — Hecke-type integral
//!   transforms of Green-kernel type over the unit torus of a real
//!   quadratic field, partial zeta sums over unit orbits, and a
//!   desk-scale verification of the classical integral/sum identity for
//!   Eisenstein series.
//!
//! # Multiple zeta value convention
//!
//! Throughout this crate, `zeta(s_1, ..., s_k)` denotes the sum over
//! `0 < n_1 < n_2 < ... < n_k` of `prod_j n_j^{-s_j}`.  Indices increase
//! left to right and convergence requires the **last** exponent `s_k >= 2`.
//! This is the reverse of the also-common convention in which the first
//! index carries the convergence condition; translate by reversing the
//! index tuple.

pub mod defaults;
pub mod fftconv;
pub mod graph;
pub mod mzv;
pub mod quadratic;
pub mod reduce;
pub mod report;
pub mod series;
pub mod special;
