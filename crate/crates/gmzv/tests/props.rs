//! Property tests for the structural invariants of the reduction pipeline,
//! the evaluators, and the CLI report contract: exactness of the splitting
//! step, conservation laws of the rewriting, subdivision invariance,
//! determinism, and formatting round-trips.

use gmzv::graph::{
    build_graph, graph_from_json, homology_rank, normalize_valency_two, DecoratedGraph,
    EdgeDescription, GraphDescription,
};
use gmzv::mzv::{zeta_mzv, TailMode};
use gmzv::reduce::{
    eis_step, frac_mod_one, gmzv_to_mzv, mzv_combination_to_text,
    prefix_combination_value_at, reduce_to_prefix_chains, tree_to_form_product, BinomTable,
    LinearForm,
};
use gmzv::report::fmt_sig;
use gmzv::series::{gmzv_direct, mordell_tornheim, SeriesConfig, SignMode};
use num::rational::Ratio;
use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use std::process::Command;

fn cfg(n_max: u64, tail: TailMode) -> SeriesConfig {
    SeriesConfig { n_max, eta: 0.0, tail_mode: tail, sign_mode: SignMode::Restricted }
}

// ---------------------------------------------------------------------------
// Flat-input properties (proptest)
// ---------------------------------------------------------------------------

proptest! {
    /// The two-form splitting is exact as a rational-function identity:
    /// substituting any positive integers reproduces the input monomial.
    #[test]
    fn eis_step_is_exact(i in 1..=5u32, j in 1..=5u32, m in 1..=50i64, n in 1..=50i64) {
        let a = LinearForm::singleton(0);
        let b = LinearForm::singleton(1);
        let mut table = BinomTable::new();
        let frags = eis_step(a, i, b, j, &mut table).expect("disjoint supports");
        let point = [m, n];
        let lhs = BigRational::new(
            BigInt::one(),
            BigInt::from(m).pow(i) * BigInt::from(n).pow(j),
        );
        let mut rhs = BigRational::zero();
        for f in &frags {
            let union = a.union(b).value_at(&point);
            let lone = f.lone.value_at(&point);
            rhs += BigRational::new(
                f.coeff.clone(),
                BigInt::from(union).pow(f.union_exp) * BigInt::from(lone).pow(f.lone_exp),
            );
        }
        prop_assert_eq!(lhs, rhs);
    }

    /// Fragment exponents conserve the total weight of the input pair.
    #[test]
    fn eis_step_conserves_weight(i in 1..=6u32, j in 1..=6u32) {
        let a = LinearForm::singleton(0);
        let b = LinearForm::singleton(1);
        let mut table = BinomTable::new();
        for f in eis_step(a, i, b, j, &mut table).expect("disjoint supports") {
            prop_assert_eq!(f.union_exp + f.lone_exp, i + j);
            prop_assert!(f.union_exp >= 1 && f.lone_exp >= 1);
            prop_assert!(f.coeff > BigInt::zero());
        }
    }

    /// `frac_mod_one` lands in `[0, 1)`, is idempotent, and differs from
    /// its input by an integer.
    #[test]
    fn frac_mod_one_props(num in -1000..=1000i64, den in 1..=60i64) {
        let x = Ratio::new(num, den);
        let f = frac_mod_one(x);
        prop_assert!(f >= Ratio::new(0, 1) && f < Ratio::new(1, 1));
        prop_assert_eq!(frac_mod_one(f), f);
        prop_assert!((x - f).is_integer());
    }

    /// Pascal recurrence and symmetry of the memoized binomial table.
    #[test]
    fn binomials_satisfy_pascal(n in 1..=40u32, k in 0..=40u32) {
        let mut t = BinomTable::new();
        let expect = if k == 0 {
            BigInt::one()
        } else {
            t.binom(n - 1, k - 1) + t.binom(n - 1, k)
        };
        prop_assert_eq!(t.binom(n, k), expect);
        if k <= n {
            let sym = t.binom(n, n - k);
            prop_assert_eq!(t.binom(n, k), sym);
        } else {
            prop_assert_eq!(t.binom(n, k), BigInt::zero());
        }
    }

    /// Raw depth-1 truncations are monotone in `n_max` (all terms are
    /// positive) and never exceed the limit; two-point residuals are
    /// non-negative.
    #[test]
    fn zeta_truncation_is_monotone(t in 2..=5u32, n in 10..=2000u64) {
        let lo = zeta_mzv(&[t], n, TailMode::None).expect("depth-1").value.re;
        let hi = zeta_mzv(&[t], 2 * n, TailMode::None).expect("depth-1").value.re;
        prop_assert!(lo <= hi);
        // zeta(2) dominates every zeta(t), t >= 2.
        prop_assert!(hi < 1.644934066848227);
        let ext = zeta_mzv(&[t], 2 * n, TailMode::TwoPoint).expect("depth-1");
        prop_assert!(ext.residual >= 0.0);
    }

    /// The fixed-precision report formatter is stable and round-trips
    /// through `f64` parsing at its printed precision.
    #[test]
    fn fmt_sig_round_trips(x in prop::num::f64::NORMAL) {
        prop_assume!(x.abs() > 1e-250 && x.abs() < 1e250);
        let s = fmt_sig(x);
        prop_assert_eq!(&s, &fmt_sig(x));
        let back: f64 = s.parse().expect("formatted float parses");
        let rel = ((back - x) / x).abs();
        prop_assert!(rel < 1e-10, "{x} -> {s} -> {back}");
    }
}

// ---------------------------------------------------------------------------
// Random decorated trees (seeded)
// ---------------------------------------------------------------------------

fn random_tree(rng: &mut ChaCha8Rng) -> Option<DecoratedGraph> {
    let e = rng.gen_range(1..=5usize);
    let names: Vec<String> = (0..=e).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut degree = vec![0u32; e + 1];
    for child in 1..=e {
        let parent = rng.gen_range(0..child);
        let (tail, head) = if rng.gen_bool(0.5) { (parent, child) } else { (child, parent) };
        degree[parent] += 1;
        degree[child] += 1;
        edges.push(EdgeDescription {
            id: child as u64,
            tail: names[tail].clone(),
            head: names[head].clone(),
            k: rng.gen_range(1..=3i64),
            nu: i64::from(rng.gen_bool(0.5)),
        });
    }
    let mut boundary: Vec<String> = Vec::new();
    for v in 0..=e {
        if degree[v] == 1 || rng.gen_bool(0.4) {
            boundary.push(names[v].clone());
        }
    }
    if boundary.len() < 2 {
        return None;
    }
    build_graph(&GraphDescription { vertices: names, edges, boundary }).ok()
}

/// Drive the generator until a tree with a non-empty reduction appears.
fn reducible_tree(rng: &mut ChaCha8Rng) -> DecoratedGraph {
    for _ in 0..500 {
        let Some(g) = random_tree(rng) else { continue };
        match gmzv_to_mzv(&g) {
            Ok(c) if !c.is_empty() => return g,
            _ => continue,
        }
    }
    panic!("tree generator exhausted its attempt budget");
}

#[test]
fn reduction_conserves_weight_depth_and_terminates_convergent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0001);
    for _ in 0..30 {
        let g = reducible_tree(&mut rng);
        let weight = g.total_weight();
        let rank = homology_rank(&g);
        let (fp, _) = tree_to_form_product(&g).unwrap().unwrap();
        assert_eq!(fp.weight(), weight, "form product conserves weight");
        let chains = reduce_to_prefix_chains(&fp).unwrap();
        for (chain, _) in chains.iter() {
            let w: u64 = chain.exps.iter().map(|&e| u64::from(e)).sum();
            assert_eq!(w, weight, "every chain term conserves weight");
            assert_eq!(chain.order.len(), fp.d, "every chain spans the variables");
        }
        for (idx, _) in gmzv_to_mzv(&g).unwrap().iter() {
            assert_eq!(idx.weight(), weight);
            assert_eq!(idx.depth(), rank);
            assert!(idx.is_convergent(), "reduced terms are all convergent");
        }
    }
}

#[test]
fn reduction_is_deterministic_bit_for_bit() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0002);
    for _ in 0..20 {
        let g = reducible_tree(&mut rng);
        let a = gmzv_to_mzv(&g).unwrap();
        let b = gmzv_to_mzv(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(mzv_combination_to_text(&a), mzv_combination_to_text(&b));
    }
}

#[test]
fn vertex_and_id_relabeling_preserves_everything() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0003);
    for _ in 0..12 {
        let g = reducible_tree(&mut rng);
        // Rename vertices, shift edge ids, keep the listing order: the
        // constrained sum is untouched, so both the exact reduction and
        // the truncated evaluation must be identical.
        let names: Vec<String> = (0..g.vertex_count()).map(|i| format!("w{}", 100 - i)).collect();
        let rename = |old: &str| -> String {
            let idx: usize = old[1..].parse().unwrap();
            names[idx].clone()
        };
        let desc = GraphDescription {
            vertices: names.clone(),
            boundary: g.boundary_vertices().iter().map(|v| rename(g.vertex_name(*v))).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDescription {
                    id: e.id + 7,
                    tail: rename(g.vertex_name(e.tail)),
                    head: rename(g.vertex_name(e.head)),
                    k: i64::from(e.k),
                    nu: i64::from(e.nu),
                })
                .collect(),
        };
        let h = build_graph(&desc).unwrap();
        assert_eq!(gmzv_to_mzv(&g).unwrap(), gmzv_to_mzv(&h).unwrap());
        let c = cfg(300, TailMode::None);
        let vg = gmzv_direct(&g, &c).unwrap();
        let vh = gmzv_direct(&h, &c).unwrap();
        assert_eq!(vg.value, vh.value, "identical parameterization, identical value");
        assert_eq!(vg.terms, vh.terms);
    }
}

#[test]
fn subdivision_of_an_edge_preserves_the_reduction() {
    // Splitting an edge of weight k into consecutive edges of weights
    // k1 + k2 = k through a fresh interior vertex leaves the constrained
    // sum unchanged; the merged normal form and the exact reduction both
    // agree with the original.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0004);
    let mut exercised = 0;
    while exercised < 12 {
        let g = reducible_tree(&mut rng);
        let Some(pos) = g.edges().iter().position(|e| e.k >= 2) else { continue };
        let split = rng.gen_range(1..i64::from(g.edges()[pos].k));
        let mut vertices: Vec<String> =
            (0..g.vertex_count()).map(|i| g.vertex_name(i).to_string()).collect();
        vertices.push("mid".into());
        let mut edges: Vec<EdgeDescription> = g
            .edges()
            .iter()
            .map(|e| EdgeDescription {
                id: e.id,
                tail: g.vertex_name(e.tail).to_string(),
                head: g.vertex_name(e.head).to_string(),
                k: i64::from(e.k),
                nu: i64::from(e.nu),
            })
            .collect();
        let original = edges[pos].clone();
        edges[pos] = EdgeDescription {
            id: original.id,
            tail: original.tail.clone(),
            head: "mid".into(),
            k: split,
            nu: original.nu,
        };
        // Both halves carry the same flow, so both keep the original sign
        // bit; differing bits would contradict and empty the cone.
        edges.push(EdgeDescription {
            id: 1000,
            tail: "mid".into(),
            head: original.head.clone(),
            k: original.k - split,
            nu: original.nu,
        });
        let boundary: Vec<String> =
            g.boundary_vertices().iter().map(|v| g.vertex_name(*v).to_string()).collect();
        let subdivided = build_graph(&GraphDescription { vertices, edges, boundary }).unwrap();

        assert_eq!(homology_rank(&subdivided), homology_rank(&g));
        assert_eq!(subdivided.total_weight(), g.total_weight());
        assert_eq!(
            gmzv_to_mzv(&subdivided).unwrap(),
            gmzv_to_mzv(&g).unwrap(),
            "subdivision is invisible to the reduction"
        );

        // Merging interior valency-2 vertices undoes the subdivision: the
        // subdivided graph and the original share one normal form (the
        // original may itself carry mergeable interior vertices).
        let merged = normalize_valency_two(&subdivided).unwrap();
        assert_eq!(merged.edges().len(), normalize_valency_two(&g).unwrap().edges().len());
        assert_eq!(merged.total_weight(), g.total_weight());
        let twice = normalize_valency_two(&merged).unwrap();
        assert_eq!(twice.edges().len(), merged.edges().len());
        assert_eq!(gmzv_to_mzv(&merged).unwrap(), gmzv_to_mzv(&g).unwrap());
        exercised += 1;
    }
}

#[test]
fn star_sum_is_symmetric_in_its_legs() {
    let star = |s1: i64, s2: i64, s3: i64| -> DecoratedGraph {
        build_graph(&GraphDescription {
            vertices: vec!["v1".into(), "v2".into(), "v3".into(), "y".into()],
            boundary: vec!["v1".into(), "v2".into(), "v3".into()],
            edges: vec![
                EdgeDescription { id: 1, tail: "y".into(), head: "v1".into(), k: s1, nu: 0 },
                EdgeDescription { id: 2, tail: "y".into(), head: "v2".into(), k: s2, nu: 0 },
                EdgeDescription { id: 3, tail: "y".into(), head: "v3".into(), k: s3, nu: 1 },
            ],
        })
        .unwrap()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0005);
    for _ in 0..8 {
        let (s1, s2) = (rng.gen_range(1..=3i64), rng.gen_range(1..=3i64));
        let s3 = rng.gen_range(2..=3i64);
        // Exact level: swapping the two in-legs permutes the free
        // variables, which the reduction forgets.
        assert_eq!(gmzv_to_mzv(&star(s1, s2, s3)).unwrap(), gmzv_to_mzv(&star(s2, s1, s3)).unwrap());
        // Numeric level, via the convolution evaluator (exactly the same
        // multiset of terms).
        let c = cfg(600, TailMode::None);
        let a = mordell_tornheim(&[s1 as u32, s2 as u32], s3 as u32, &c).unwrap().value.re;
        let b = mordell_tornheim(&[s2 as u32, s1 as u32], s3 as u32, &c).unwrap().value.re;
        assert!((a - b).abs() < 1e-12, "({s1},{s2};{s3}): {a} vs {b}");
    }
}

// ---------------------------------------------------------------------------
// CLI contract invariants
// ---------------------------------------------------------------------------

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmzv"))
}

fn gamma1_path() -> String {
    format!("{}/../../graphs/gamma1.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn cli_reports_are_byte_identical_across_runs() {
    let run = || {
        let out = cli()
            .args(["eval", &gamma1_path(), "--nmax", "400"])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        out.stdout
    };
    let first = run();
    assert_eq!(first, run(), "same input and flags, same bytes");
    assert!(!first.is_empty());
}

#[test]
fn cli_verify_rejects_a_corrupted_combination() {
    // The correct reduction of the star is `2 * zeta(1,2)`; feeding a
    // corrupted coefficient must produce a verification failure (exit 5)
    // while a faithful file passes (exit 0).
    let dir = std::env::temp_dir().join(format!("gmzv_props_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    let bad = dir.join("bad.txt");
    std::fs::write(&good, "2 * zeta(1,2)\n").unwrap();
    std::fs::write(&bad, "3 * zeta(1,2)\n").unwrap();

    let ok = cli()
        .args(["verify", &gamma1_path(), "--combination"])
        .arg(&good)
        .output()
        .expect("binary runs");
    assert_eq!(ok.status.code(), Some(0), "faithful combination passes");

    let fail = cli()
        .args(["verify", &gamma1_path(), "--combination"])
        .arg(&bad)
        .output()
        .expect("binary runs");
    assert_eq!(fail.status.code(), Some(5), "corrupted combination fails verification");
    let report = String::from_utf8(fail.stdout).unwrap();
    assert!(report.contains("result: FAIL"), "report records the failure");

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cli_rejects_unparseable_graphs_as_validation_errors() {
    let dir = std::env::temp_dir().join(format!("gmzv_props_bad_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ this is not a graph").unwrap();
    let out = cli().arg("eval").arg(&path).output().expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("status: error"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn graph_parser_roundtrips_fixture() {
    // Parsing is deterministic and the parsed structure is stable: the
    // same JSON gives the same reduction and the same report hash input.
    let text = std::fs::read_to_string(gamma1_path()).unwrap();
    let a = graph_from_json(&text).unwrap();
    let b = graph_from_json(&text).unwrap();
    assert_eq!(gmzv_to_mzv(&a).unwrap(), gmzv_to_mzv(&b).unwrap());
    assert_eq!(a.total_weight(), b.total_weight());
    assert_eq!(homology_rank(&a), homology_rank(&b));
}

#[test]
fn prefix_chains_evaluate_like_their_form_products_under_shuffled_points() {
    // A second, independent exactness pass over the full rewriting with
    // shuffled evaluation points (complements the per-step property).
    let mut rng = ChaCha8Rng::seed_from_u64(0x9109_0006);
    for _ in 0..10 {
        let g = reducible_tree(&mut rng);
        let (fp, _) = tree_to_form_product(&g).unwrap().unwrap();
        let chains = reduce_to_prefix_chains(&fp).unwrap();
        let mut coords: Vec<i64> = (1..=fp.d as i64).collect();
        coords.shuffle(&mut rng);
        assert_eq!(
            fp.reciprocal_value_at(&coords),
            prefix_combination_value_at(&chains, &coords)
        );
    }
}
