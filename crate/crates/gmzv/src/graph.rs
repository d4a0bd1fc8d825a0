//! Decorated graphs, validation, and the integer flow basis.
//!
//! A decorated graph is a finite connected multigraph with a nonempty set
//! of boundary vertices `S`, a positive weight `k_e` on every edge, and a
//! sign bit `nu_e`.  Orienting each edge and attaching an integer label
//! `n_e`, the conservation constraint at every interior vertex `v ∉ S`
//! reads `Σ_e A[v][e]·n_e = 0` where `A[v][e] = +1` if `v` is the head of
//! `e`, `-1` if `v` is the tail.  The solution lattice is free of rank
//! `d = |E| - |V| + |S|`; [`solve_constraints`] produces an explicit
//! integer basis expressing every edge label from `d` free labels.

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Edge identifier as given in graph description files.
pub type EdgeId = u64;

/// Exact rational scalar used for rank computations and constraint solving.
type Q = Ratio<i128>;

/// Validation and normalization failures for decorated graphs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {id} is a loop at vertex '{vertex}' (loops are forbidden)")]
    LoopEdge { id: EdgeId, vertex: String },
    #[error("graph is not connected: vertex '{0}' is unreachable")]
    Disconnected(String),
    #[error("degree-one vertex '{0}' must belong to the boundary set")]
    BoundaryMissingExternal(String),
    #[error("edge {id}: subdivision weight must be a positive integer, got {k}")]
    NonPositiveSubdivision { id: EdgeId, k: i64 },
    #[error("edges {0} and {1} meet at a removable vertex but require contradictory label signs")]
    InconsistentSigns(EdgeId, EdgeId),
    #[error("boundary set is empty")]
    EmptyBoundary,
    #[error("edge {id} references unknown vertex '{name}'")]
    UnknownVertex { id: EdgeId, name: String },
    #[error("boundary references unknown vertex '{0}'")]
    UnknownBoundaryVertex(String),
    #[error("duplicate vertex id '{0}'")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("edge {id}: sign must be 0 or 1, got {nu}")]
    InvalidSign { id: EdgeId, nu: i64 },
    #[error("graph has no vertices")]
    Empty,
}

/// One edge of a graph description file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDescription {
    pub id: EdgeId,
    pub tail: String,
    pub head: String,
    pub k: i64,
    #[serde(default)]
    pub nu: i64,
}

/// Graph description record as read from a JSON file.
///
/// Top-level keys: `vertices` (list of strings), `edges` (list of
/// `{id, tail, head, k, nu}` with `nu` optional, default 0), `boundary`
/// (list of strings).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDescription {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDescription>,
    pub boundary: Vec<String>,
}

/// A directed, decorated edge (vertices stored as indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: usize,
    pub head: usize,
    /// Subdivision weight `k_e >= 1`; the edge contributes `|n_e|^{-k_e}`.
    pub k: u32,
    /// Sign bit: the summation cone requires `sgn(n_e) = (-1)^{nu}`.
    pub nu: u8,
}

/// A validated decorated graph.
#[derive(Debug, Clone)]
pub struct DecoratedGraph {
    vertex_names: Vec<String>,
    in_boundary: Vec<bool>,
    edges: Vec<Edge>,
}

impl DecoratedGraph {
    /// Number of vertices.
    #[must_use]
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    /// Name of vertex `v`.
    #[must_use]
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    /// Index of the vertex with the given name, if present.
    #[must_use]
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// Whether vertex `v` belongs to the boundary set `S`.
    #[must_use]
    pub fn is_boundary(&self, v: usize) -> bool {
        self.in_boundary[v]
    }

    /// Boundary vertex indices, ascending.
    #[must_use]
    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.in_boundary[v]).collect()
    }

    /// Interior (non-boundary) vertex indices, ascending.
    #[must_use]
    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.in_boundary[v]).collect()
    }

    /// Edges in file order.
    #[must_use]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Undirected degree of vertex `v` (parallel edges counted).
    #[must_use]
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == v || e.head == v).count()
    }

    /// Signed incidence of vertex `v` with edge `e`: `+1` if `v` is the
    /// head, `-1` if `v` is the tail, `0` otherwise.
    #[must_use]
    pub fn incidence(&self, v: usize, e: &Edge) -> i64 {
        if e.head == v {
            1
        } else if e.tail == v {
            -1
        } else {
            0
        }
    }

    /// Total weight `Σ_e k_e`.
    #[must_use]
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| u64::from(e.k)).sum()
    }

    /// True when the underlying undirected graph is a tree.
    #[must_use]
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count()
    }
}

/// Validate a graph description and build a [`DecoratedGraph`].
pub fn build_graph(desc: &GraphDescription) -> Result<DecoratedGraph, GraphError> {
    if desc.vertices.is_empty() {
        return Err(GraphError::Empty);
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in desc.vertices.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(GraphError::DuplicateVertex(name.clone()));
        }
    }

    let mut seen_ids = BTreeSet::new();
    let mut edges = Vec::with_capacity(desc.edges.len());
    for e in &desc.edges {
        if !seen_ids.insert(e.id) {
            return Err(GraphError::DuplicateEdgeId(e.id));
        }
        let tail = *index.get(e.tail.as_str()).ok_or_else(|| GraphError::UnknownVertex {
            id: e.id,
            name: e.tail.clone(),
        })?;
        let head = *index.get(e.head.as_str()).ok_or_else(|| GraphError::UnknownVertex {
            id: e.id,
            name: e.head.clone(),
        })?;
        if tail == head {
            return Err(GraphError::LoopEdge { id: e.id, vertex: e.tail.clone() });
        }
        if e.k < 1 {
            return Err(GraphError::NonPositiveSubdivision { id: e.id, k: e.k });
        }
        if e.nu != 0 && e.nu != 1 {
            return Err(GraphError::InvalidSign { id: e.id, nu: e.nu });
        }
        edges.push(Edge {
            id: e.id,
            tail,
            head,
            k: u32::try_from(e.k).expect("validated above"),
            nu: u8::try_from(e.nu).expect("validated above"),
        });
    }

    if desc.boundary.is_empty() {
        return Err(GraphError::EmptyBoundary);
    }
    let mut in_boundary = vec![false; desc.vertices.len()];
    for name in &desc.boundary {
        let v = *index
            .get(name.as_str())
            .ok_or_else(|| GraphError::UnknownBoundaryVertex(name.clone()))?;
        in_boundary[v] = true;
    }

    let g = DecoratedGraph { vertex_names: desc.vertices.clone(), in_boundary, edges };

    // Connectivity (undirected reachability from vertex 0).
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for e in &g.edges {
            for &w in &[e.tail, e.head] {
                if (e.tail == v || e.head == v) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GraphError::Disconnected(g.vertex_names[v].clone()));
    }

    // Every degree-1 (external) vertex must lie in S.
    for v in 0..g.vertex_count() {
        if g.degree(v) == 1 && !g.in_boundary[v] {
            return Err(GraphError::BoundaryMissingExternal(g.vertex_names[v].clone()));
        }
    }

    Ok(g)
}

/// Parse a JSON graph description and validate it.
pub fn graph_from_json(json: &str) -> Result<DecoratedGraph, GraphParseError> {
    let desc: GraphDescription = serde_json::from_str(json).map_err(GraphParseError::Json)?;
    build_graph(&desc).map_err(GraphParseError::Invalid)
}

/// Either a JSON syntax problem or an invariant violation.
#[derive(Debug, Error)]
pub enum GraphParseError {
    #[error("graph file is not valid JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] GraphError),
}

/// Relative homology rank `d = |E| - |V| + |S|` of the constraint lattice.
#[must_use]
pub fn homology_rank(g: &DecoratedGraph) -> usize {
    let s = g.in_boundary.iter().filter(|&&b| b).count();
    g.edges.len() + s - g.vertex_count()
}

/// Integer basis of the edge-label lattice.
///
/// Row `i` of `matrix` corresponds to `g.edges()[i]`; column `j` to the
/// free variable attached to `free_edges[j]`.  Every column satisfies the
/// conservation constraint at every interior vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowBasis {
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    pub free_edges: Vec<EdgeId>,
}

impl FlowBasis {
    /// Edge labels induced by an assignment to the free variables.
    #[must_use]
    pub fn labels_for(&self, assignment: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(assignment).map(|(&m, &n)| m * n).sum())
            .collect()
    }
}

/// Exact rank of a rational matrix given as rows.
fn rational_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / inv.clone();
            for c in col..ncols {
                let sub = factor.clone() * rows[rank][c].clone();
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solve the square exact system `A·x = b` for each right-hand side column.
/// Returns `None` when `A` is singular.
fn solve_square(a: &[Vec<Q>], rhs: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let m = rhs.len();
    // Augmented elimination: rows of [A | all rhs columns].
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = a[r].clone();
            row.extend(rhs.iter().map(|col| col[r].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].clone();
        for c in col..n + m {
            let v = aug[col][c].clone() / inv.clone();
            aug[col][c] = v;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in col..n + m {
                let sub = factor.clone() * aug[col][c].clone();
                aug[r][c] -= sub;
            }
        }
    }
    Some((0..m).map(|j| (0..n).map(|r| aug[r][n + j].clone()).collect()).collect())
}

/// Rational coefficients of the boundary phase form.
///
/// Boundary decorations `x_v` (given per vertex index, zero off `S`) twist
/// the sum by `exp(2πi Σ_{v∈S} x_v (∂n)_v)`.  Expressed over the free
/// variables, the exponent is `Σ_j c_j n_j`; this returns `(c_1, ..., c_d)`.
#[must_use]
pub fn boundary_phase_coeffs(
    g: &DecoratedGraph,
    basis: &FlowBasis,
    x: &[Ratio<i64>],
) -> Vec<Ratio<i64>> {
    (0..basis.rank)
        .map(|j| {
            let mut c = Ratio::new(0, 1);
            for (i, e) in g.edges.iter().enumerate() {
                if basis.matrix[i][j] == 0 {
                    continue;
                }
                let m = Ratio::new(basis.matrix[i][j], 1);
                if g.in_boundary[e.head] {
                    c += m * x[e.head];
                }
                if g.in_boundary[e.tail] {
                    c -= m * x[e.tail];
                }
            }
            c
        })
        .collect()
}

/// Compute the deterministic integer flow basis.
///
/// Free edges are chosen greedily over ascending edge ids: an edge becomes
/// free exactly when the remaining edges still span the interior
/// constraints.  The dependent square system is solved exactly; incidence
/// matrices are totally unimodular, so the solution is integral.
#[must_use]
pub fn solve_constraints(g: &DecoratedGraph) -> FlowBasis {
    let interior = g.interior_vertices();
    let nrows = interior.len();
    let ne = g.edges.len();

    // Incidence columns over interior vertices, one per edge.
    let col_of = |e: &Edge| -> Vec<Q> {
        interior.iter().map(|&v| Q::from_integer(g.incidence(v, e).into())).collect()
    };

    let mut order: Vec<usize> = (0..ne).collect();
    order.sort_by_key(|&i| g.edges[i].id);

    let mut free: Vec<usize> = Vec::new();
    let mut dependent: Vec<usize> = Vec::new();
    for (pos, &ei) in order.iter().enumerate() {
        // If the edge is removed (made free), the not-yet-processed edges
        // together with the already-dependent ones must still span the
        // interior constraints.
        let remaining: Vec<Vec<Q>> = order
            .iter()
            .enumerate()
            .filter(|&(p, j)| p > pos || dependent.contains(j))
            .map(|(_, &j)| col_of(&g.edges[j]))
            .collect();
        // Transpose columns into rows for the rank computation.
        let rows: Vec<Vec<Q>> = (0..nrows)
            .map(|r| remaining.iter().map(|c| c[r].clone()).collect())
            .collect();
        if rational_rank(rows) == nrows {
            free.push(ei);
        } else {
            dependent.push(ei);
        }
    }

    let d = free.len();
    debug_assert_eq!(d, homology_rank(g));
    debug_assert_eq!(dependent.len(), nrows);

    // Solve A_dep · X = -A_free column by column.
    let mut matrix = vec![vec![0i64; d]; ne];
    for (j, &f) in free.iter().enumerate() {
        matrix[f][j] = 1;
    }
    if nrows > 0 {
        let a_rows: Vec<Vec<Q>> = (0..nrows)
            .map(|r| dependent.iter().map(|&e| col_of(&g.edges[e])[r].clone()).collect())
            .collect();
        let rhs: Vec<Vec<Q>> = free
            .iter()
            .map(|&f| {
                let c = col_of(&g.edges[f]);
                c.into_iter().map(|q| -q).collect()
            })
            .collect();
        let solution = solve_square(&a_rows, &rhs).expect("dependent columns span by construction");
        for (j, col) in solution.iter().enumerate() {
            for (r, q) in col.iter().enumerate() {
                assert!(q.is_integer(), "incidence systems are totally unimodular");
                let v = q.to_integer();
                matrix[dependent[r]][j] = i64::try_from(v).expect("labels fit i64");
            }
        }
    }

    // Invariant: every column satisfies the interior conservation law.
    for j in 0..d {
        for &v in &interior {
            let s: i64 = g
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| g.incidence(v, e) * matrix[i][j])
                .sum();
            assert_eq!(s, 0, "flow basis column violates conservation");
        }
    }

    FlowBasis {
        rank: d,
        matrix,
        free_edges: free.into_iter().map(|i| g.edges[i].id).collect(),
    }
}

/// Remove interior valency-2 vertices by merging their incident edge pair.
///
/// The merged edge runs from the far endpoint of the lower-id edge to the
/// far endpoint of the higher-id edge, with weight `k_1 + k_2`.  Writing
/// the merged label as the flow in that direction, each original sign bit
/// transports along its orientation; the two transported bits must agree,
/// otherwise no label satisfies both sign constraints.
pub fn normalize_valency_two(g: &DecoratedGraph) -> Result<DecoratedGraph, GraphError> {
    let mut g = g.clone();
    loop {
        let mut target = None;
        'scan: for v in 0..g.vertex_count() {
            if g.in_boundary[v] || g.degree(v) != 2 {
                continue;
            }
            let inc: Vec<usize> = (0..g.edges.len())
                .filter(|&i| g.edges[i].tail == v || g.edges[i].head == v)
                .collect();
            let (i1, i2) = (inc[0], inc[1]);
            let (e1, e2) = (g.edges[i1], g.edges[i2]);
            let far = |e: &Edge| if e.tail == v { e.head } else { e.tail };
            if far(&e1) == far(&e2) {
                // Merging would create a loop; leave this vertex alone.
                continue 'scan;
            }
            target = Some((v, i1, i2));
            break;
        }
        let Some((v, mut i1, mut i2)) = target else {
            return Ok(g);
        };
        if g.edges[i1].id > g.edges[i2].id {
            std::mem::swap(&mut i1, &mut i2);
        }
        let (e1, e2) = (g.edges[i1], g.edges[i2]);
        let a = if e1.tail == v { e1.head } else { e1.tail };
        let b = if e2.tail == v { e2.head } else { e2.tail };
        // Sign bit transported to the a->b flow direction: traversing e1
        // along a->v agrees with e1's orientation iff tail(e1) = a.
        let rev1 = u8::from(e1.tail == v); // e1 oriented v->a: reversed
        let rev2 = u8::from(e2.head == v); // e2 oriented b->v: reversed
        let s1 = (e1.nu + rev1) % 2;
        let s2 = (e2.nu + rev2) % 2;
        if s1 != s2 {
            return Err(GraphError::InconsistentSigns(e1.id, e2.id));
        }
        let merged = Edge { id: e1.id, tail: a, head: b, k: e1.k + e2.k, nu: s1 };
        // Rebuild: replace e1 with the merged edge, drop e2, drop vertex v.
        let mut edges = g.edges.clone();
        edges[i1] = merged;
        edges.remove(i2);
        let mut names = g.vertex_names.clone();
        let mut in_boundary = g.in_boundary.clone();
        names.remove(v);
        in_boundary.remove(v);
        let fix = |w: usize| if w > v { w - 1 } else { w };
        for e in &mut edges {
            e.tail = fix(e.tail);
            e.head = fix(e.head);
        }
        g = DecoratedGraph { vertex_names: names, in_boundary, edges };
    }
}

/// Verdict of the bounded sign-feasibility search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignFeasibility {
    pub feasible: bool,
    /// First witness found (free-variable values in `free_edges` order).
    pub witness: Option<Vec<i64>>,
    /// The box `[-B, B]^d` actually certified; the verdict is relative to
    /// this box.
    pub box_bound: i64,
}

/// Search `[-bound, bound]^d` for an assignment making every edge label
/// nonzero with sign `(-1)^{nu_e}`.
///
/// Enumeration proceeds over max-norm shells (small witnesses first) and
/// lexicographically inside a shell, so the returned witness is
/// deterministic.  The verdict is relative to the searched box; callers
/// surface `box_bound` in their reports.
#[must_use]
pub fn sign_feasible(g: &DecoratedGraph, basis: &FlowBasis, bound: i64) -> SignFeasibility {
    let d = basis.rank;
    if d == 0 {
        // No free variables: feasible only if there are no edges (empty
        // product); any edge would be pinned to label 0.
        return SignFeasibility {
            feasible: g.edges.is_empty(),
            witness: g.edges.is_empty().then(Vec::new),
            box_bound: bound,
        };
    }
    let ok = |assignment: &[i64]| -> bool {
        let labels = basis.labels_for(assignment);
        labels.iter().zip(g.edges.iter()).all(|(&l, e)| {
            l != 0 && ((l > 0) == (e.nu == 0))
        })
    };
    // Budget keeps adversarial high-rank inputs from exploding; the box
    // actually certified is reported.
    const BUDGET: u64 = 20_000_000;
    let mut used: u64 = 0;
    for shell in 1..=bound {
        let mut cursor = vec![-shell; d];
        'points: loop {
            // Points strictly inside the shell were covered earlier.
            if cursor.iter().any(|&c| c.abs() == shell) {
                used += 1;
                if used > BUDGET {
                    return SignFeasibility {
                        feasible: false,
                        witness: None,
                        box_bound: shell - 1,
                    };
                }
                if ok(&cursor) {
                    return SignFeasibility {
                        feasible: true,
                        witness: Some(cursor),
                        box_bound: bound,
                    };
                }
            }
            // Odometer increment, rightmost coordinate fastest.
            let mut i = d;
            while i > 0 {
                i -= 1;
                if cursor[i] < shell {
                    cursor[i] += 1;
                    for c in cursor.iter_mut().skip(i + 1) {
                        *c = -shell;
                    }
                    continue 'points;
                }
            }
            break;
        }
    }
    SignFeasibility { feasible: false, witness: None, box_bound: bound }
}
