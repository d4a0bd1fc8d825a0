//! Symbolic reduction of tree sums to multiple zeta values.
//!
//! A tree graph's constrained sum is `Σ_{m ∈ ℕ^d} 1/Π_f f(m)^{k_f}` where
//! every `f` is a `{0,1}`-linear form in the `d` positive free variables.
//! The Eisenstein splitting identity
//!
//! ```text
//! 1/(a^i b^j) = Σ_{r+s=i+j, r,s>=1} [ C(r-1,i-1)/((a+b)^r b^s)
//!                                   + C(r-1,j-1)/((a+b)^r a^s) ]
//! ```
//!
//! (valid pointwise for disjointly supported forms) is applied repeatedly
//! until every term is a *prefix chain* `1/Π_l (m_{γ·1}+...+m_{γ·l})^{t_l}`.
//! Summing a prefix chain over positive `m` and substituting the strictly
//! increasing partial sums turns it into the multiple zeta value
//! `ζ(t_1, ..., t_d)` (increasing-index convention, last exponent >= 2).
//! Boundary decorations survive the same rewriting as per-level roots of
//! unity, giving multiple polylogarithm terms instead.
//!
//! All coefficients are exact big integers, and every rewriting step is a
//! pointwise identity of rational functions — testable by exact rational
//! substitution.

use crate::graph::{boundary_phase_coeffs, solve_constraints, DecoratedGraph, EdgeId};
use num::rational::Ratio;
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors from the symbolic reduction pipeline.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("graph is not a tree; the rewriting applies to tree sums only")]
    NotATree,
    #[error("edge {edge}: label is not ± a {{0,1}}-sum of free variables after sign adjustment")]
    SignNormalizationFailed { edge: EdgeId },
    #[error("linear forms must have disjoint supports")]
    OverlappingSupports,
    #[error("rewriting did not reach prefix chains (non-laminar supports)")]
    NotReducible,
    #[error("reduction contains a divergent term (last exponent 1 at argument 1)")]
    DivergentTerm,
    #[error("rank {0} exceeds the supported maximum of 64 free variables")]
    RankTooLarge(usize),
}

/// A `{0,1}`-linear form over the free variables, stored as a bitmask
/// (bit `j` set ⇔ variable `j` occurs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearForm {
    pub mask: u64,
}

impl LinearForm {
    #[must_use]
    pub fn singleton(j: usize) -> Self {
        LinearForm { mask: 1 << j }
    }

    #[must_use]
    pub fn disjoint(self, other: Self) -> bool {
        self.mask & other.mask == 0
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        LinearForm { mask: self.mask | other.mask }
    }

    /// Variable indices in the support, ascending.
    #[must_use]
    pub fn variables(self) -> Vec<usize> {
        (0..64).filter(|j| self.mask >> j & 1 == 1).collect()
    }

    /// Evaluate at an integer point.
    #[must_use]
    pub fn value_at(self, point: &[i64]) -> i64 {
        point
            .iter()
            .enumerate()
            .filter(|&(j, _)| self.mask >> j & 1 == 1)
            .map(|(_, &v)| v)
            .sum()
    }
}

/// A product `coefficient · Π forms^{exponent}` over `d` free variables.
///
/// Forms are stored canonically: sorted by (support size, support mask),
/// one entry per distinct mask, exponents ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormProduct {
    pub d: usize,
    pub coefficient: BigInt,
    pub forms: Vec<(u64, u32)>,
}

impl FormProduct {
    #[must_use]
    pub fn new(d: usize, coefficient: BigInt, forms: Vec<(u64, u32)>) -> Self {
        FormProduct { d, coefficient, forms: canonical_forms(forms) }
    }

    /// Total exponent sum (the weight of the eventual MZV terms).
    #[must_use]
    pub fn weight(&self) -> u64 {
        self.forms.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    /// Exact value of `1/Π forms^{exp}` at a positive integer point.
    #[must_use]
    pub fn reciprocal_value_at(&self, point: &[i64]) -> BigRational {
        let mut denom = BigInt::one();
        for &(mask, exp) in &self.forms {
            let v = LinearForm { mask }.value_at(point);
            denom *= BigInt::from(v).pow(exp);
        }
        BigRational::new(self.coefficient.clone(), denom)
    }
}

/// Sort by (support size, mask) and merge equal masks by adding exponents.
fn canonical_forms(mut forms: Vec<(u64, u32)>) -> Vec<(u64, u32)> {
    forms.sort_by_key(|&(m, _)| (m.count_ones(), m));
    let mut out: Vec<(u64, u32)> = Vec::with_capacity(forms.len());
    for (m, e) in forms {
        if let Some(last) = out.last_mut() {
            if last.0 == m {
                last.1 += e;
                continue;
            }
        }
        out.push((m, e));
    }
    out
}

/// A prefix chain `1/Π_l (m_{γ·1}+...+m_{γ·l})^{t_l}` with `γ` recorded as
/// `order` (variable indices, outermost-innermost... position `l` holds the
/// variable introduced at level `l+1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrefixTerm {
    pub order: Vec<usize>,
    pub exps: Vec<u32>,
}

impl PrefixTerm {
    /// Exact value of the chain monomial's reciprocal at a positive point.
    #[must_use]
    pub fn reciprocal_value_at(&self, point: &[i64]) -> BigRational {
        let mut denom = BigInt::one();
        let mut partial: i64 = 0;
        for (l, &var) in self.order.iter().enumerate() {
            partial += point[var];
            denom *= BigInt::from(partial).pow(self.exps[l]);
        }
        BigRational::new(BigInt::one(), denom)
    }
}

/// A multiple zeta index `(t_1, ..., t_d)`, increasing convention: the sum
/// runs over `0 < n_1 < ... < n_d` and convergence requires `t_d >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MzvIndex(pub Vec<u32>);

impl MzvIndex {
    #[must_use]
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&t| u64::from(t)).sum()
    }

    #[must_use]
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_convergent(&self) -> bool {
        self.0.last().map_or(true, |&t| t >= 2)
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// A multiple polylogarithm term `Li_{t_1..t_d}(z_1..z_d)` with each
/// argument an exact root of unity `z_j = exp(2πi·phase_j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PolylogTerm {
    pub exps: Vec<u32>,
    /// Rational phases in `[0, 1)`.
    pub phases: Vec<Ratio<i64>>,
}

impl PolylogTerm {
    #[must_use]
    pub fn is_convergent(&self) -> bool {
        match (self.exps.last(), self.phases.last()) {
            (Some(&t), Some(p)) => t >= 2 || !p.is_zero(),
            _ => true,
        }
    }
}

impl fmt::Display for PolylogTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "li(")?;
        for (i, t) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "; ")?;
        for (i, p) in self.phases.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if p.is_integer() {
                write!(f, "{}", p.numer())?;
            } else {
                write!(f, "{}/{}", p.numer(), p.denom())?;
            }
        }
        write!(f, ")")
    }
}

/// An integer linear combination with exact big-integer coefficients.
/// Zero coefficients are never stored; iteration order is the key order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntCombination<T: Ord> {
    terms: BTreeMap<T, BigInt>,
}

impl<T: Ord> IntCombination<T> {
    #[must_use]
    pub fn new() -> Self {
        IntCombination { terms: BTreeMap::new() }
    }

    pub fn add(&mut self, term: T, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(term).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &BigInt)> {
        self.terms.iter()
    }

    #[must_use]
    pub fn coefficient(&self, term: &T) -> BigInt {
        self.terms.get(term).cloned().unwrap_or_else(BigInt::zero)
    }
}

impl<T: Ord> FromIterator<(T, BigInt)> for IntCombination<T> {
    fn from_iter<I: IntoIterator<Item = (T, BigInt)>>(iter: I) -> Self {
        let mut c = IntCombination::new();
        for (t, k) in iter {
            c.add(t, k);
        }
        c
    }
}

/// Memoized Pascal-triangle binomial coefficients over big integers.
#[derive(Debug, Default)]
pub struct BinomTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomTable {
    #[must_use]
    pub fn new() -> Self {
        BinomTable { rows: vec![vec![BigInt::one()]] }
    }

    /// `C(n, k)`, zero outside `0 <= k <= n`.
    pub fn binom(&mut self, n: u32, k: u32) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        let n = n as usize;
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("table seeded with row 0");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(BigInt::one());
            for w in prev.windows(2) {
                row.push(&w[0] + &w[1]);
            }
            row.push(BigInt::one());
            self.rows.push(row);
        }
        self.rows[n][k as usize].clone()
    }
}

/// One output fragment of the Eisenstein step:
/// `coeff · (a∪b)^{union_exp} · lone^{lone_exp}` in the denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisFragment {
    pub coeff: BigInt,
    pub union_exp: u32,
    pub lone: LinearForm,
    pub lone_exp: u32,
}

/// The Eisenstein splitting of `1/(a^i b^j)` for disjointly supported
/// forms: fragments summing over `r+s = i+j`, `r, s >= 1`, with binomial
/// coefficients `C(r-1, i-1)` (lone form `b`) and `C(r-1, j-1)` (lone `a`).
pub fn eis_step(
    a: LinearForm,
    i: u32,
    b: LinearForm,
    j: u32,
    table: &mut BinomTable,
) -> Result<Vec<EisFragment>, ReduceError> {
    if !a.disjoint(b) {
        return Err(ReduceError::OverlappingSupports);
    }
    assert!(i >= 1 && j >= 1, "exponents must be positive");
    let total = i + j;
    let mut out = Vec::new();
    for r in 1..total {
        let s = total - r;
        let c_b = table.binom(r - 1, i - 1);
        if !c_b.is_zero() {
            out.push(EisFragment { coeff: c_b, union_exp: r, lone: b, lone_exp: s });
        }
        let c_a = table.binom(r - 1, j - 1);
        if !c_a.is_zero() {
            out.push(EisFragment { coeff: c_a, union_exp: r, lone: a, lone_exp: s });
        }
    }
    Ok(out)
}

/// Outcome of expressing a tree sum as a form product.
///
/// `None` means the sign constraints admit no solution at all: the sum is
/// empty and the value is exactly zero.
pub type TreeFormProduct = Option<(FormProduct, Vec<EdgeId>)>;

/// Rewrite a tree graph's edge labels as positive `{0,1}`-forms in the
/// free variables.
///
/// Each free variable is replaced by its absolute value (orientation and
/// sign bit absorbed), after which every edge label must read as `+` or
/// `-` one `{0,1}`-sum.  A uniformly negative adjusted label means the
/// summation cone is empty (`Ok(None)`); a mixed-sign label cannot be
/// normalized and is an error.
pub fn tree_to_form_product(g: &DecoratedGraph) -> Result<TreeFormProduct, ReduceError> {
    if !g.is_tree() {
        return Err(ReduceError::NotATree);
    }
    let basis = solve_constraints(g);
    let d = basis.rank;
    if d > 64 {
        return Err(ReduceError::RankTooLarge(d));
    }
    // Free-edge sign bits, in free-variable order.
    let nu_free: Vec<u8> = basis
        .free_edges
        .iter()
        .map(|id| g.edges().iter().find(|e| e.id == *id).expect("free edge exists").nu)
        .collect();

    let mut forms = Vec::with_capacity(g.edges().len());
    for (row, e) in g.edges().iter().enumerate() {
        // Adjusted coefficient of m_j in |n_e|: (-1)^{nu_e} M[e][j] (-1)^{nu_j}.
        let mut mask: u64 = 0;
        let mut sign: Option<bool> = None; // Some(true) = +1 entries
        for j in 0..d {
            let m = basis.matrix[row][j];
            if m == 0 {
                continue;
            }
            let adj = m * if (e.nu + nu_free[j]) % 2 == 0 { 1 } else { -1 };
            let positive = adj > 0;
            if adj.abs() != 1 || *sign.get_or_insert(positive) != positive {
                return Err(ReduceError::SignNormalizationFailed { edge: e.id });
            }
            mask |= 1 << j;
        }
        if mask == 0 {
            // Label identically zero: the nonzero-label constraint empties
            // the sum.  (Cannot happen for trees, guarded for safety.)
            return Ok(None);
        }
        match sign {
            Some(true) => forms.push((mask, e.k)),
            Some(false) => return Ok(None), // label always negative: empty cone
            None => unreachable!("nonzero mask implies a recorded sign"),
        }
    }
    Ok(Some((FormProduct::new(d, BigInt::one(), forms), basis.free_edges)))
}

/// Comparison key for choosing the rewrite pair: (support size, mask, exp).
fn form_key(f: &(u64, u32)) -> (u32, u64, u32) {
    (f.0.count_ones(), f.0, f.1)
}

/// Find the lexicographically-largest incomparable pair, as indices into
/// the canonical form list (larger-key form first).
fn choose_pair(forms: &[(u64, u32)]) -> Option<(usize, usize)> {
    let mut best: Option<((u32, u64, u32), (u32, u64, u32), usize, usize)> = None;
    for p in 0..forms.len() {
        for q in p + 1..forms.len() {
            let (ma, mb) = (forms[p].0, forms[q].0);
            let incomparable = ma & !mb != 0 && mb & !ma != 0;
            if !incomparable {
                continue;
            }
            let (ka, kb) = (form_key(&forms[p]), form_key(&forms[q]));
            let (hi, lo, ip, iq) = if ka >= kb { (ka, kb, p, q) } else { (kb, ka, q, p) };
            if best.as_ref().map_or(true, |(bh, bl, _, _)| (hi, lo) > (*bh, *bl)) {
                best = Some((hi, lo, ip, iq));
            }
        }
    }
    best.map(|(_, _, p, q)| (p, q))
}

/// Convert a pairwise-comparable form family into a prefix chain, if it is
/// one: supports must form a strictly nested chain adding one variable per
/// level and covering all `d` variables.
fn chain_to_prefix(d: usize, forms: &[(u64, u32)]) -> Option<PrefixTerm> {
    if d == 0 {
        return forms.is_empty().then(|| PrefixTerm { order: vec![], exps: vec![] });
    }
    if forms.len() != d {
        return None;
    }
    let mut order = Vec::with_capacity(d);
    let mut exps = Vec::with_capacity(d);
    let mut prev: u64 = 0;
    for (l, &(mask, exp)) in forms.iter().enumerate() {
        if mask.count_ones() as usize != l + 1 || prev & !mask != 0 {
            return None;
        }
        let added = mask & !prev;
        debug_assert_eq!(added.count_ones(), 1);
        order.push(added.trailing_zeros() as usize);
        exps.push(exp);
        prev = mask;
    }
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    (prev == full).then_some(PrefixTerm { order, exps })
}

/// Rewrite a form product into an exact integer combination of prefix
/// chains by repeated Eisenstein steps.
///
/// The step pair is always the lexicographically-largest incomparable pair
/// of forms; any confluent order yields the same combination (prefix-chain
/// monomials are linearly independent as rational functions), this one is
/// fixed for reproducibility of intermediate states.
pub fn reduce_to_prefix_chains(
    fp: &FormProduct,
) -> Result<IntCombination<PrefixTerm>, ReduceError> {
    let mut table = BinomTable::new();
    let mut work: BTreeMap<Vec<(u64, u32)>, BigInt> = BTreeMap::new();
    work.insert(fp.forms.clone(), fp.coefficient.clone());
    let mut done: IntCombination<PrefixTerm> = IntCombination::new();
    let mut fuel: u64 = 5_000_000;

    while let Some((forms, coeff)) = work.pop_first() {
        if fuel == 0 {
            return Err(ReduceError::NotReducible);
        }
        fuel -= 1;
        match choose_pair(&forms) {
            None => {
                let term =
                    chain_to_prefix(fp.d, &forms).ok_or(ReduceError::NotReducible)?;
                done.add(term, coeff);
            }
            Some((p, q)) => {
                let (fa, fb) = (forms[p], forms[q]);
                let a = LinearForm { mask: fa.0 };
                let b = LinearForm { mask: fb.0 };
                if !a.disjoint(b) {
                    // Partially overlapping incomparable supports cannot be
                    // split; tree inputs (laminar) never reach this.
                    return Err(ReduceError::NotReducible);
                }
                let rest: Vec<(u64, u32)> = forms
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != p && i != q)
                    .map(|(_, &f)| f)
                    .collect();
                for frag in eis_step(a, fa.1, b, fb.1, &mut table)? {
                    let mut next = rest.clone();
                    next.push((a.union(b).mask, frag.union_exp));
                    next.push((frag.lone.mask, frag.lone_exp));
                    let key = canonical_forms(next);
                    let c = work.entry(key).or_insert_with(BigInt::zero);
                    *c += &coeff * frag.coeff;
                    if c.is_zero() {
                        // Avoid keeping cancelled intermediate terms alive.
                        work.retain(|_, v| !v.is_zero());
                    }
                }
            }
        }
    }
    Ok(done)
}

/// Forget the variable order of each prefix chain (the change of variables
/// to strictly increasing partial sums) and merge equal indices.
pub fn prefix_to_mzv(
    c: &IntCombination<PrefixTerm>,
) -> Result<IntCombination<MzvIndex>, ReduceError> {
    let mut out = IntCombination::new();
    for (term, coeff) in c.iter() {
        let idx = MzvIndex(term.exps.clone());
        if !idx.is_convergent() {
            return Err(ReduceError::DivergentTerm);
        }
        out.add(idx, coeff.clone());
    }
    Ok(out)
}

/// Full pipeline: tree graph to an exact integer combination of MZVs.
///
/// An empty combination (value zero) is returned when the sign constraints
/// admit no term at all.
pub fn gmzv_to_mzv(g: &DecoratedGraph) -> Result<IntCombination<MzvIndex>, ReduceError> {
    match tree_to_form_product(g)? {
        None => Ok(IntCombination::new()),
        Some((fp, _)) => prefix_to_mzv(&reduce_to_prefix_chains(&fp)?),
    }
}

/// Full pipeline with boundary decorations: tree graph to an exact integer
/// combination of multiple polylogarithm terms at roots of unity.
///
/// `x` gives the decoration per vertex index (zero off the boundary).  The
/// phase of each term transports through the same rewriting: for a chain
/// with variable order `γ` and adjusted per-variable phase coefficients
/// `c_j`, level `l` carries `z_l = exp(2πi(c_{γ·l} - c_{γ·(l+1)}))`.
pub fn gmzv_to_polylog(
    g: &DecoratedGraph,
    x: &[Ratio<i64>],
) -> Result<IntCombination<PolylogTerm>, ReduceError> {
    let Some((fp, free_edges)) = tree_to_form_product(g)? else {
        return Ok(IntCombination::new());
    };
    let basis = solve_constraints(g);
    let raw = boundary_phase_coeffs(g, &basis, x);
    // Adjusted to the positive variables: m_j = (-1)^{nu_j} n_j.
    let adjusted: Vec<Ratio<i64>> = free_edges
        .iter()
        .zip(raw.iter())
        .map(|(id, &c)| {
            let nu = g.edges().iter().find(|e| e.id == *id).expect("free edge").nu;
            if nu == 0 {
                c
            } else {
                -c
            }
        })
        .collect();

    let chains = reduce_to_prefix_chains(&fp)?;
    let mut out = IntCombination::new();
    for (term, coeff) in chains.iter() {
        let dlen = term.order.len();
        let mut phases = Vec::with_capacity(dlen);
        for l in 0..dlen {
            let cur = adjusted[term.order[l]];
            let next = if l + 1 < dlen {
                adjusted[term.order[l + 1]]
            } else {
                Ratio::new(0, 1)
            };
            phases.push(frac_mod_one(cur - next));
        }
        let pl = PolylogTerm { exps: term.exps.clone(), phases };
        if !pl.is_convergent() {
            return Err(ReduceError::DivergentTerm);
        }
        out.add(pl, coeff.clone());
    }
    Ok(out)
}

/// Reduce a rational into `[0, 1)`.
#[must_use]
pub fn frac_mod_one(x: Ratio<i64>) -> Ratio<i64> {
    let f = x - x.floor();
    if f == Ratio::new(1, 1) {
        Ratio::new(0, 1)
    } else {
        f
    }
}

/// Exact value of a prefix-chain combination at a positive integer point.
#[must_use]
pub fn prefix_combination_value_at(
    c: &IntCombination<PrefixTerm>,
    point: &[i64],
) -> BigRational {
    let mut acc = BigRational::zero();
    for (term, coeff) in c.iter() {
        acc += BigRational::from(coeff.clone()) * term.reciprocal_value_at(point);
    }
    acc
}

/// Canonical text form of an MZV combination: one `coeff * zeta(...)` line
/// per term, ordered lexicographically by index.
#[must_use]
pub fn mzv_combination_to_text(c: &IntCombination<MzvIndex>) -> String {
    let mut s = String::new();
    for (idx, coeff) in c.iter() {
        s.push_str(&format!("{coeff} * {idx}\n"));
    }
    s
}

/// Canonical text form of a polylog combination: `coeff * li(t...; p...)`.
#[must_use]
pub fn polylog_combination_to_text(c: &IntCombination<PolylogTerm>) -> String {
    let mut s = String::new();
    for (term, coeff) in c.iter() {
        s.push_str(&format!("{coeff} * {term}\n"));
    }
    s
}

/// Parse the canonical text form back into a polylog combination (MZV
/// lines embed as all-zero phases).  Blank lines and `#` comments allowed.
pub fn parse_combination_text(
    text: &str,
) -> Result<IntCombination<PolylogTerm>, String> {
    let mut out = IntCombination::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| format!("line {}: {}", lineno + 1, msg);
        let (coeff_s, rest) = line.split_once('*').ok_or_else(|| err("missing '*'"))?;
        let coeff: BigInt =
            coeff_s.trim().parse().map_err(|_| err("bad coefficient"))?;
        let rest = rest.trim();
        let (kind, args) = rest.split_once('(').ok_or_else(|| err("missing '('"))?;
        let args = args.strip_suffix(')').ok_or_else(|| err("missing ')'"))?;
        let kind = kind.trim();
        let parse_exps = |s: &str| -> Result<Vec<u32>, String> {
            if s.trim().is_empty() {
                return Ok(vec![]);
            }
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| err("bad exponent")))
                .collect()
        };
        let term = match kind {
            "zeta" => {
                let exps = parse_exps(args)?;
                let phases = vec![Ratio::new(0, 1); exps.len()];
                PolylogTerm { exps, phases }
            }
            "li" => {
                let (es, ps) = args.split_once(';').ok_or_else(|| err("missing ';'"))?;
                let exps = parse_exps(es)?;
                let phases: Vec<Ratio<i64>> = if ps.trim().is_empty() {
                    vec![]
                } else {
                    ps.split(',')
                        .map(|t| parse_ratio(t.trim()).ok_or_else(|| err("bad phase")))
                        .collect::<Result<_, _>>()?
                };
                if phases.len() != exps.len() {
                    return Err(err("phase count must match exponent count"));
                }
                PolylogTerm { exps, phases: phases.into_iter().map(frac_mod_one).collect() }
            }
            _ => return Err(err("unknown term kind (expected zeta or li)")),
        };
        out.add(term, coeff);
    }
    Ok(out)
}

/// Parse `a/b` or `a` into an exact rational.
#[must_use]
pub fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Ratio::new(n, d))
    } else {
        s.trim().parse::<i64>().ok().map(|n| Ratio::new(n, 1))
    }
}

/// Embed an MZV combination into polylog terms (all phases zero).
#[must_use]
pub fn embed_mzv_combination(c: &IntCombination<MzvIndex>) -> IntCombination<PolylogTerm> {
    c.iter()
        .map(|(idx, coeff)| {
            (
                PolylogTerm {
                    exps: idx.0.clone(),
                    phases: vec![Ratio::new(0, 1); idx.0.len()],
                },
                coeff.clone(),
            )
        })
        .collect()
}
