//! Randomized property checks shared by the CLI `selftest` command.
//!
//! Each check takes a seeded generator so a run is reproducible, and reports
//! the first counterexample it finds instead of panicking.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chord::DEFAULT_SURGERY_LIMIT;
use crate::error::Result;
use crate::gf2::masked_corank;
use crate::graph::LabeledGraph;
use crate::invariants::{analyze, kauffman_bracket};
use crate::moves::{self, MoveKind, MoveSite};
use crate::sample::{random_diagram, random_graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub trials: usize,
    /// Counterexample for failures, empty otherwise.
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, trials: usize) -> Self {
        Self {
            name,
            passed: true,
            trials,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, trials: usize, detail: String) -> Self {
        Self {
            name,
            passed: false,
            trials,
            detail,
        }
    }
}

/// Up to `per_kind` random sites of each basic kind.
pub fn sample_sites<R: Rng + ?Sized>(
    rng: &mut R,
    g: &LabeledGraph,
    per_kind: usize,
) -> Vec<MoveSite> {
    let all = moves::enumerate_sites(g, &MoveKind::BASIC);
    let mut out = Vec::new();
    for kind in MoveKind::BASIC {
        let of_kind: Vec<MoveSite> = all.iter().copied().filter(|s| s.kind() == kind).collect();
        out.extend(of_kind.choose_multiple(rng, per_kind).copied());
    }
    out
}

/// The bracket changes at most by a unit `(−a³)^k` under every basic move.
/// `applier` is the move implementation under test.
pub fn check_move_invariance<F>(seed: u64, trials: usize, max_n: usize, applier: F) -> CheckOutcome
where
    F: Fn(&LabeledGraph, &MoveSite) -> Result<LabeledGraph>,
{
    const NAME: &str = "bracket invariance under moves";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_graph(&mut rng, max_n.saturating_sub(2));
        let before = kauffman_bracket(&g).expect("within limit");
        for site in sample_sites(&mut rng, &g, 5) {
            let h = match applier(&g, &site) {
                Ok(h) => h,
                Err(e) => return CheckOutcome::fail(NAME, trials, format!("{g}: {site}: {e}")),
            };
            let after = kauffman_bracket(&h).expect("within limit");
            if before.unit_ratio(&after).is_none() {
                return CheckOutcome::fail(
                    NAME,
                    trials,
                    format!("{g}: {site}: {before} became {after}"),
                );
            }
        }
    }
    CheckOutcome::pass(NAME, trials)
}

/// Surgery circle counts equal `corank + 1` and the two brackets agree.
pub fn check_surgery(seed: u64, trials: usize, max_n: usize) -> CheckOutcome {
    const NAME: &str = "surgery circle counts";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.min(DEFAULT_SURGERY_LIMIT);
    for _ in 0..trials {
        let d = random_diagram(&mut rng, max_n);
        let g = d.intersection_graph();
        for s in 0..1u64 << d.n() {
            let gamma = d.surgery_circle_count(s).expect("mask in range");
            let corank = masked_corank(g.rows(), s);
            if gamma != corank + 1 {
                return CheckOutcome::fail(
                    NAME,
                    trials,
                    format!("{d}: subset {s:#b} gives {gamma} circles, corank {corank}"),
                );
            }
        }
        let via_surgery = d.bracket_via_surgery(max_n).expect("within limit");
        if via_surgery != kauffman_bracket(&g).expect("within limit") {
            return CheckOutcome::fail(NAME, trials, format!("{d}: bracket mismatch"));
        }
    }
    CheckOutcome::pass(NAME, trials)
}

/// `k + l ≤ n + 2`, `span ≤ 4n − 4g`, equality when adequate, and adequacy
/// of non-split alternating graphs.
pub fn check_span_bounds(seed: u64, trials: usize, max_n: usize) -> CheckOutcome {
    const NAME: &str = "span bounds";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_graph(&mut rng, max_n);
        let r = analyze(&g);
        let Some(span) = r.span.map(|s| s as usize) else {
            return CheckOutcome::fail(NAME, trials, format!("{g}: span unavailable"));
        };
        let bound = 4 * r.n - 4 * r.genus;
        let ok = r.k + r.l <= r.n + 2
            && span <= bound
            && (!r.adequate || span == bound)
            && (!r.alternating || r.adequate == r.non_split);
        if !ok {
            return CheckOutcome::fail(NAME, trials, format!("{g}: {r:?}"));
        }
    }
    CheckOutcome::pass(NAME, trials)
}

/// All self-test checks with one seed.
pub fn selftest(seed: u64, trials: usize, max_n: usize) -> Vec<CheckOutcome> {
    vec![
        check_move_invariance(seed, trials, max_n, moves::apply),
        check_surgery(seed.wrapping_add(1), trials, max_n),
        check_span_bounds(seed.wrapping_add(2), trials, max_n),
    ]
}
