//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the summary lines are always shown.
//! Every criterion is seeded and uses exact integer arithmetic; wall-clock
//! budgets are part of the verdict.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use glk::chord::realizability_search;
use glk::gf2::masked_corank;
use glk::graph::{a_state, b_state, circle_count};
use glk::invariants::{analyze, is_graph_knot, jones, kauffman_bracket, knot_corank, writhe};
use glk::moves::{apply, enumerate_sites, MoveKind, MoveSite};
use glk::orbit::{bfs_orbit, canonical_form, OrbitBounds};
use glk::sample::{
    g7, random_alternating_graph, random_diagram, random_graph, random_graph_knot,
    random_permutation,
};
use glk::{LabeledGraph, LaurentPoly, Sign};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Name, check, wall-clock budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn gr(s: &str) -> LabeledGraph {
    LabeledGraph::parse(s).unwrap()
}

/// Rank over GF(2) of a dense 0/1 matrix, by plain row reduction.
fn dense_rank(mut m: Vec<Vec<u8>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Corank of the adjacency matrix restricted to `subset`, built entry by entry.
fn dense_corank(g: &LabeledGraph, subset: &[usize]) -> usize {
    let m = subset
        .iter()
        .map(|&i| subset.iter().map(|&j| g.adjacent(i, j) as u8).collect())
        .collect();
    subset.len() - dense_rank(m)
}

fn pick<R: Rng>(rng: &mut R, sites: Vec<MoveSite>, kind: MoveKind, cap: usize) -> Vec<MoveSite> {
    let of_kind: Vec<MoveSite> = sites.into_iter().filter(|s| s.kind() == kind).collect();
    of_kind.choose_multiple(rng, cap).copied().collect()
}

fn unit_values() -> Outcome {
    let cases = [
        (LabeledGraph::empty(), LaurentPoly::one()),
        (gr("1;+;"), LaurentPoly::mono(-1, -3)),
        (gr("1;-;"), LaurentPoly::mono(-1, 3)),
    ];
    for (g, want) in cases {
        let got = kauffman_bracket(&g).map_err(|e| e.to_string())?;
        ensure!(got == want, "<{g}> = {got}, expected {want}");
    }
    Ok("<empty> = 1, <+> = -a^-3, <-> = -a^3".into())
}

fn bracket_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let kinds = [
        MoveKind::R2Add,
        MoveKind::R2Remove,
        MoveKind::R3Fwd,
        MoveKind::R3Inv,
        MoveKind::R4,
    ];
    let mut checked = 0;
    for _ in 0..500 {
        let g = random_graph(&mut rng, 8);
        let before = kauffman_bracket(&g).unwrap();
        let sites = enumerate_sites(&g, &kinds);
        for kind in kinds {
            for site in pick(&mut rng, sites.clone(), kind, 5) {
                let h = apply(&g, &site).map_err(|e| e.to_string())?;
                let after = kauffman_bracket(&h).unwrap();
                ensure!(after == before, "{g} --{site}--> {h}: {before} vs {after}");
                checked += 1;
            }
        }
    }
    Ok(format!("500 graphs, {checked} sites, brackets equal"))
}

fn r1_unit_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 9);
        let before = kauffman_bracket(&g).unwrap();
        let label = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let h = apply(&g, &MoveSite::R1Add { label }).unwrap();
        let factor = match label {
            Sign::Plus => LaurentPoly::mono(-1, -3),
            Sign::Minus => LaurentPoly::mono(-1, 3),
        };
        let after = kauffman_bracket(&h).unwrap();
        ensure!(
            after == before.checked_mul(&factor).unwrap(),
            "{g} with {label}"
        );
        // and back again
        let back = apply(&h, &MoveSite::R1Remove { v: g.n() }).unwrap();
        ensure!(back == g, "R1_remove did not undo R1_add on {g}");
    }
    Ok("200 trials, ratio exactly -a^-3 / -a^3".into())
}

fn writhe_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sites_checked = 0;
    for _ in 0..200 {
        let steps = rng.gen_range(0..15);
        let g = random_graph_knot(&mut rng, steps, 9);
        ensure!(is_graph_knot(&g), "{g} is not a graph-knot");
        let w = writhe(&g).unwrap();
        let j = jones(&g).unwrap();
        ensure!(
            j == LaurentPoly::one(),
            "Jones of unknot representative {g} is {j}"
        );
        let sites = enumerate_sites(&g, &MoveKind::BASIC);
        for kind in MoveKind::BASIC {
            for site in pick(&mut rng, sites.clone(), kind, 5) {
                let h = apply(&g, &site).unwrap();
                let expected = match site {
                    MoveSite::R1Add { label: Sign::Plus } => w - 1,
                    MoveSite::R1Add { label: Sign::Minus } => w + 1,
                    MoveSite::R1Remove { v } if g.label(v) == Sign::Plus => w + 1,
                    MoveSite::R1Remove { .. } => w - 1,
                    _ => w,
                };
                let wh = writhe(&h).map_err(|e| format!("{g} --{site}--> {h}: {e}"))?;
                ensure!(
                    wh == expected,
                    "{g} --{site}--> {h}: writhe {wh}, expected {expected}"
                );
                let jh = jones(&h).unwrap();
                ensure!(jh == j, "{g} --{site}--> {h}: Jones {jh}");
                sites_checked += 1;
            }
        }
    }
    Ok(format!(
        "200 graph-knots, {sites_checked} moves, Jones = 1 throughout"
    ))
}

fn surgery_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut subsets = 0u64;
    for i in 0..200 {
        let d = random_diagram(&mut rng, 9);
        let g = d.intersection_graph();
        for s in 0..1u64 << d.n() {
            let succ = d.surgery_successor(s).unwrap();
            let mut seen = vec![false; succ.len()];
            for &q in &succ {
                ensure!(!seen[q], "{d}: successor map not a permutation for {s:#b}");
                seen[q] = true;
            }
            let members: Vec<usize> = (0..d.n()).filter(|&c| s >> c & 1 == 1).collect();
            let gamma = d.surgery_circle_count(s).unwrap();
            let corank = dense_corank(&g, &members);
            ensure!(
                gamma == corank + 1,
                "{d}: subset {s:#b}: {gamma} circles, corank {corank}"
            );
            ensure!(
                masked_corank(g.rows(), s) == corank,
                "{d}: bit-packed corank disagrees"
            );
            subsets += 1;
        }
        if i < 100 {
            let via = d.bracket_via_surgery(9).unwrap();
            ensure!(
                via == kauffman_bracket(&g).unwrap(),
                "{d}: surgery bracket {via}"
            );
        }
    }
    Ok(format!(
        "200 diagrams, {subsets} sub-states, 100 bracket comparisons"
    ))
}

fn span_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut adequate = 0;
    let mut alternating = 0;
    let mut graphs: Vec<LabeledGraph> = (0..500).map(|_| random_graph(&mut rng, 10)).collect();
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.2..0.7);
        graphs.push(random_alternating_graph(&mut rng, n, p));
    }
    for g in &graphs {
        let r = analyze(g);
        let span = r.span.ok_or(format!("{g}: no span"))? as usize;
        let (k, l) = (circle_count(g, a_state(g)), circle_count(g, b_state(g)));
        ensure!((r.k, r.l) == (k, l), "{g}: report circles disagree");
        ensure!(k + l <= r.n + 2, "{g}: k + l = {}", k + l);
        ensure!(2 * r.genus == r.n + 2 - k - l, "{g}: genus");
        ensure!(span <= 4 * r.n - 4 * r.genus, "{g}: span {span}");
        if r.adequate {
            adequate += 1;
            ensure!(
                span == 4 * r.n - 4 * r.genus,
                "{g}: adequate but span {span}"
            );
        }
        if r.alternating && r.non_split {
            alternating += 1;
            ensure!(r.adequate, "{g}: alternating, non-split, not adequate");
        }
    }
    Ok(format!(
        "{} graphs, {adequate} adequate, {alternating} alternating non-split",
        graphs.len()
    ))
}

fn g7_golden() -> Outcome {
    let g = g7();
    let r = analyze(&g);
    ensure!((r.n, r.k, r.l, r.genus) == (7, 5, 4, 0), "{r:?}");
    ensure!(
        r.alternating && r.non_split && r.adequate && r.minimal_certified,
        "{r:?}"
    );
    ensure!(
        r.span == Some(28) && r.vertex_lower_bound == Some(7),
        "{r:?}"
    );
    // corank(A + E) from a dense matrix built here
    let dense: Vec<Vec<u8>> = (0..7)
        .map(|i| (0..7).map(|j| (i == j || g.adjacent(i, j)) as u8).collect())
        .collect();
    let corank = 7 - dense_rank(dense);
    ensure!(
        corank == 3 && knot_corank(&g) == 3,
        "corank(A+E) = {corank}"
    );
    ensure!(!is_graph_knot(&g), "G7 reported as graph-knot");
    let search = realizability_search(&g, None, 8).map_err(|e| e.to_string())?;
    ensure!(
        search.witness.is_none(),
        "unexpected witness {:?}",
        search.witness
    );
    ensure!(search.exhausted && search.examined == 135_135, "{search:?}");
    Ok(
        "k=5 l=4 g=0 span=28 bound=7 certified, corank(A+E)=3, 135135 matchings, none realize"
            .into(),
    )
}

fn move_mechanics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut r4, mut r3, mut r2) = (0, 0, 0);
    let mut attempts = 0;
    while (r4 < 200 || r3 < 200 || r2 < 200) && attempts < 100_000 {
        attempts += 1;
        let g = random_graph(&mut rng, 9);
        if r4 < 200 {
            if let Some(&site) = enumerate_sites(&g, &[MoveKind::R4]).choose(&mut rng) {
                let h = apply(&g, &site).unwrap();
                ensure!(
                    apply(&h, &site).unwrap() == g,
                    "R4 {site} is not an involution on {g}"
                );
                r4 += 1;
            }
        }
        if r3 < 200 {
            // build a forward site on purpose: u adjacent to exactly v and w
            if g.n() >= 3 && g.n() < 9 {
                let mut h = g.clone();
                let v = rng.gen_range(0..g.n());
                let w = (v + rng.gen_range(1..g.n())) % g.n();
                let mut edges = h.edges();
                edges.retain(|&(a, b)| !(a.min(b) == v.min(w) && a.max(b) == v.max(w)));
                let u = h.n();
                edges.push((v, u));
                edges.push((w, u));
                let mut labels = h.labels().to_vec();
                labels[v] = Sign::Minus;
                labels[w] = Sign::Minus;
                labels.push(Sign::Minus);
                h = LabeledGraph::new(labels, &edges).unwrap();
                let site = MoveSite::R3Fwd { u, v, w };
                let k = apply(&h, &site).map_err(|e| format!("{h}: {site}: {e}"))?;
                let back = apply(&k, &MoveSite::R3Inv { u, v, w }).map_err(|e| e.to_string())?;
                ensure!(back == h, "R3 round trip failed on {h}");
                r3 += 1;
            }
        }
        if r2 < 200 && g.n() + 2 <= 10 {
            let neighborhood = rng.gen::<u64>() & g.vertex_mask();
            let h = apply(&g, &MoveSite::R2Add { neighborhood }).unwrap();
            let (u, v) = (g.n(), g.n() + 1);
            let back = apply(&h, &MoveSite::R2Remove { u, v }).map_err(|e| e.to_string())?;
            ensure!(back == g, "R2 round trip failed on {g}");
            r2 += 1;
        }
    }
    ensure!(
        r4 == 200 && r3 == 200 && r2 == 200,
        "only {r4}/{r3}/{r2} instances"
    );
    Ok("200 R4 involutions, 200 R3 and 200 R2 round trips".into())
}

fn canonicalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 9);
        let key = canonical_form(&g);
        for _ in 0..50 {
            let h = g.permuted(&random_permutation(&mut rng, g.n())).unwrap();
            ensure!(canonical_form(&h) == key, "{g} and {h} got different keys");
        }
    }
    Ok("100 graphs x 50 permutations".into())
}

fn orbit_consistency() -> Outcome {
    let g = g7();
    let reference = kauffman_bracket(&g).unwrap();
    let report = bfs_orbit(
        &g,
        OrbitBounds {
            max_vertices: 9,
            max_depth: 4,
            max_states: 1_000_000,
        },
    );
    ensure!(!report.nodes.is_empty(), "empty orbit");
    use rayon::prelude::*;
    let bad = report.nodes.par_iter().find_any(|node| {
        let b = kauffman_bracket(&node.graph).unwrap();
        node.graph.n() < 7 || b.span() != Ok(28) || reference.unit_ratio(&b).is_none()
    });
    if let Some(node) = bad {
        return Err(format!("representative {} breaks the bound", node.graph));
    }
    ensure!(
        report.min_vertices == 7,
        "min vertices {}",
        report.min_vertices
    );
    Ok(format!(
        "{} representatives, min vertices 7, span 28 throughout{}",
        report.visited,
        if report.truncated {
            " (depth-bounded)"
        } else {
            ""
        }
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("unit values", unit_values, 1),
        ("bracket invariance", bracket_invariance, 60),
        ("R1 unit law", r1_unit_law, 5),
        ("writhe and Jones laws", writhe_laws, 60),
        ("surgery oracle", surgery_oracle, 120),
        ("span bounds", span_bounds, 60),
        ("G7 golden values", g7_golden, 30),
        ("move mechanics", move_mechanics, 10),
        ("canonicalization", canonicalization, 30),
        ("orbit consistency", orbit_consistency, 120),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(budget) => Err(format!(
                "took {:.2}s, budget {budget}s",
                elapsed.as_secs_f64()
            )),
            other => other,
        };
        let (verdict, text) = match outcome {
            Ok(t) => ("PASS", t),
            Err(t) => {
                failed += 1;
                ("FAIL", t)
            }
        };
        println!(
            "{verdict} {:>2} {name}: {text} [{:.2}s / {budget}s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
