//! Kauffman bracket, writhe, Jones polynomial and the minimality report.
//!
//! The bracket is an exhaustive sum over all `2^n` states. Each state only
//! contributes through the pair `(α(s), corank A(G(s)))`, so the sum first
//! builds a histogram of those pairs (a commutative monoid under addition,
//! reduced in parallel over disjoint ranges of state bitmasks) and expands it
//! into a polynomial once at the end. The result is independent of how the
//! ranges are split.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2;
use crate::graph::{self, a_state, b_state, circle_count, LabeledGraph, Sign};
use crate::laurent::LaurentPoly;

/// Default cap on `n` for the exhaustive state sum.
pub const DEFAULT_STATE_LIMIT: usize = 24;

/// Below this many vertices the state sum runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 14;
/// Low bits enumerated per parallel task.
const CHUNK_BITS: usize = 12;

/// `hist[alpha][corank]` = number of states with that pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateHistogram {
    n: usize,
    counts: Vec<u64>,
}

impl StateHistogram {
    fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; (n + 1) * (n + 1)],
        }
    }

    #[inline]
    fn bump(&mut self, alpha: usize, corank: usize) {
        self.counts[alpha * (self.n + 1) + corank] += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    pub fn count(&self, alpha: usize, corank: usize) -> u64 {
        self.counts[alpha * (self.n + 1) + corank]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ count · a^(2α − n) · (−a² − a⁻²)^corank`.
    pub fn to_bracket(&self) -> Result<LaurentPoly> {
        let n = self.n as i32;
        let mut acc = LaurentPoly::zero();
        for corank in 0..=self.n {
            let mut weights = Vec::new();
            for alpha in 0..=self.n {
                let c = self.count(alpha, corank);
                if c != 0 {
                    weights.push((2 * alpha as i32 - n, i128::from(c)));
                }
            }
            if weights.is_empty() {
                continue;
            }
            let weights = LaurentPoly::from_terms(weights)?;
            let loops = LaurentPoly::loop_factor_pow(corank as u32)?;
            acc = acc.checked_add(&weights.checked_mul(&loops)?)?;
        }
        Ok(acc)
    }
}

fn histogram_range(
    rows: &[u64],
    minus: u64,
    n: usize,
    range: std::ops::Range<u64>,
) -> StateHistogram {
    let mut hist = StateHistogram::new(n);
    for s in range {
        let alpha = graph::alpha_from_mask(minus, n, s);
        hist.bump(alpha, gf2::masked_corank(rows, s));
    }
    hist
}

/// Histogram of `(α, corank)` over all states of `g`.
pub fn state_histogram(g: &LabeledGraph, limit: usize) -> Result<StateHistogram> {
    let n = g.n();
    if n > limit || n >= 63 {
        return Err(Error::ResourceLimit {
            what: "state sum",
            size: n,
            limit: limit.min(62),
        });
    }
    let rows = g.rows();
    let minus = graph::minus_mask(g);
    let total = 1u64 << n;
    if n < PARALLEL_THRESHOLD {
        return Ok(histogram_range(rows, minus, n, 0..total));
    }
    let chunk = 1u64 << CHUNK_BITS;
    let hist = (0..total >> CHUNK_BITS)
        .into_par_iter()
        .map(|hi| histogram_range(rows, minus, n, hi * chunk..(hi + 1) * chunk))
        .reduce(|| StateHistogram::new(n), StateHistogram::merge);
    Ok(hist)
}

/// The Kauffman bracket with the default state limit.
pub fn kauffman_bracket(g: &LabeledGraph) -> Result<LaurentPoly> {
    kauffman_bracket_with_limit(g, DEFAULT_STATE_LIMIT)
}

pub fn kauffman_bracket_with_limit(g: &LabeledGraph, limit: usize) -> Result<LaurentPoly> {
    state_histogram(g, limit)?.to_bracket()
}

/// `corank(A(G) + E)`.
pub fn knot_corank(g: &LabeledGraph) -> usize {
    g.adjacency_matrix().add_identity().corank()
}

pub fn is_graph_knot(g: &LabeledGraph) -> bool {
    knot_corank(g) == 0
}

/// `Σ_i (−1)^corank(A + E + E_ii) · sign(v_i)`, defined for graph-knots.
pub fn writhe(g: &LabeledGraph) -> Result<i32> {
    let shifted = g.adjacency_matrix().add_identity();
    let corank = shifted.corank();
    if corank != 0 {
        return Err(Error::NotGraphKnot { corank });
    }
    let mut w = 0;
    for v in 0..g.n() {
        let parity = if shifted.flip_diagonal(v)?.corank() % 2 == 0 {
            1
        } else {
            -1
        };
        w += parity * g.label(v).value();
    }
    Ok(w)
}

/// `(−a)^(−3w) ⟨G⟩`, defined for graph-knots.
pub fn jones(g: &LabeledGraph) -> Result<LaurentPoly> {
    jones_with_limit(g, DEFAULT_STATE_LIMIT)
}

pub fn jones_with_limit(g: &LabeledGraph, limit: usize) -> Result<LaurentPoly> {
    let w = writhe(g)?;
    kauffman_bracket_with_limit(g, limit)?.unit_normalize(w)
}

/// Minimality-related numbers for one labeled graph.
///
/// `vertex_lower_bound` is `⌈span/4⌉`: any representative with `n'`
/// vertices satisfies `span ≤ 4n'`. It uses no genus information about the
/// other representatives, so it is weaker than the bound for `g` itself.
/// `span` and `vertex_lower_bound` are omitted when the state sum is over the
/// limit or the bracket vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub genus: usize,
    pub alternating: bool,
    pub adequate: bool,
    pub non_split: bool,
    pub graph_knot: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex_lower_bound: Option<u32>,
    pub minimal_certified: bool,
}

/// True when no state at distance one from `s` has one more circle.
fn locally_maximal(g: &LabeledGraph, s: graph::State, circles: usize) -> bool {
    (0..g.n()).all(|v| circle_count(g, s.toggled(v)) != circles + 1)
}

pub fn analyze(g: &LabeledGraph) -> PropertyReport {
    analyze_with_limit(g, DEFAULT_STATE_LIMIT)
}

pub fn analyze_with_limit(g: &LabeledGraph, limit: usize) -> PropertyReport {
    let n = g.n();
    let (sa, sb) = (a_state(g), b_state(g));
    let k = circle_count(g, sa);
    let l = circle_count(g, sb);
    // k + l - n is even: alternating matrices have even rank
    let genus = (n + 2 - (k + l)) / 2;
    let alternating = k + l == n + 2;
    let adequate = locally_maximal(g, sa, k) && locally_maximal(g, sb, l);
    let non_split = !g.has_isolated_vertex();
    let span = kauffman_bracket_with_limit(g, limit)
        .ok()
        .and_then(|p| p.span().ok());
    PropertyReport {
        n,
        k,
        l,
        genus,
        alternating,
        adequate,
        non_split,
        graph_knot: is_graph_knot(g),
        span,
        vertex_lower_bound: span.map(|s| s.div_ceil(4)),
        minimal_certified: alternating && non_split,
    }
}

/// The bracket of a graph with all labels flipped is the bracket with
/// `a ↦ a⁻¹`.
pub fn mirror(g: &LabeledGraph) -> LabeledGraph {
    let labels: Vec<Sign> = g.labels().iter().map(|s| s.negate()).collect();
    LabeledGraph::from_masks(labels, g.rows().to_vec()).expect("same structure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::State;
    use crate::moves::{apply, enumerate_sites, MoveKind, MoveSite};
    use crate::sample::{g7, random_graph, random_graph_knot};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(s: &str) -> LabeledGraph {
        LabeledGraph::parse(s).unwrap()
    }

    /// The literal state sum: one monomial times a loop power per state.
    fn naive_bracket(g: &LabeledGraph) -> LaurentPoly {
        let n = g.n();
        let mut acc = LaurentPoly::zero();
        for mask in 0..1u64 << n {
            let s = State::new(n, mask).unwrap();
            let vertices = s.vertices();
            let corank = g
                .adjacency_matrix()
                .principal_submatrix(&vertices)
                .unwrap()
                .corank();
            let alpha = graph::alpha(g, s) as i32;
            let beta = graph::beta(g, s) as i32;
            let term = LaurentPoly::mono(1, alpha - beta)
                .checked_mul(&LaurentPoly::loop_factor_pow(corank as u32).unwrap())
                .unwrap();
            acc = acc.checked_add(&term).unwrap();
        }
        acc
    }

    #[test]
    fn unit_values() {
        assert_eq!(
            kauffman_bracket(&LabeledGraph::empty()).unwrap(),
            LaurentPoly::one()
        );
        assert_eq!(
            kauffman_bracket(&graph("1;+;")).unwrap(),
            LaurentPoly::mono(-1, -3)
        );
        assert_eq!(
            kauffman_bracket(&graph("1;-;")).unwrap(),
            LaurentPoly::mono(-1, 3)
        );
        assert_eq!(
            kauffman_bracket(&graph("2;++;1-2")).unwrap(),
            LaurentPoly::loop_factor()
        );
    }

    #[test]
    fn histogram_matches_literal_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..150 {
            let g = random_graph(&mut rng, 9);
            assert_eq!(kauffman_bracket(&g).unwrap(), naive_bracket(&g), "{g}");
        }
    }

    #[test]
    fn parallel_split_is_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = crate::sample::random_graph_n(&mut rng, 16, 0.35);
        let parallel = state_histogram(&g, 24).unwrap();
        let minus = graph::minus_mask(&g);
        let serial = histogram_range(g.rows(), minus, 16, 0..1 << 16);
        assert_eq!(parallel, serial);
        assert_eq!(parallel.total(), 1 << 16);
    }

    #[test]
    fn oversized_graph_is_a_resource_error() {
        let g = LabeledGraph::new(vec![Sign::Plus; 25], &[]).unwrap();
        let err = kauffman_bracket(&g).unwrap_err();
        assert!(matches!(
            err,
            Error::ResourceLimit {
                size: 25,
                limit: 24,
                ..
            }
        ));
        assert_eq!(err.class(), crate::error::ErrorClass::Resource);
        let report = analyze(&g);
        assert_eq!(report.span, None);
        assert!(!serde_json::to_string(&report).unwrap().contains("span"));
    }

    #[test]
    fn graph_knot_examples() {
        assert!(is_graph_knot(&LabeledGraph::empty()));
        assert!(!is_graph_knot(&graph("2;++;1-2")));
        assert_eq!(knot_corank(&g7()), 3);
        assert!(!is_graph_knot(&g7()));
        assert!(matches!(
            jones(&g7()),
            Err(Error::NotGraphKnot { corank: 3 })
        ));
    }

    #[test]
    fn writhe_and_jones_examples() {
        assert_eq!(writhe(&LabeledGraph::empty()).unwrap(), 0);
        assert_eq!(writhe(&graph("1;+;")).unwrap(), -1);
        assert_eq!(writhe(&graph("1;-;")).unwrap(), 1);
        assert_eq!(jones(&LabeledGraph::empty()).unwrap(), LaurentPoly::one());
        assert_eq!(jones(&graph("1;+;")).unwrap(), LaurentPoly::one());
        assert_eq!(jones(&graph("1;-;")).unwrap(), LaurentPoly::one());
        assert!(matches!(
            writhe(&graph("2;++;1-2")),
            Err(Error::NotGraphKnot { corank: 1 })
        ));
    }

    #[test]
    fn g7_report() {
        let r = analyze(&g7());
        assert_eq!((r.n, r.k, r.l, r.genus), (7, 5, 4, 0));
        assert!(r.alternating && r.adequate && r.non_split && r.minimal_certified);
        assert!(!r.graph_knot);
        assert_eq!(r.span, Some(28));
        assert_eq!(r.vertex_lower_bound, Some(7));
    }

    #[test]
    fn degenerate_reports() {
        let r = analyze(&LabeledGraph::empty());
        assert_eq!((r.k, r.l, r.genus), (1, 1, 0));
        assert!(r.alternating && r.adequate && r.non_split && r.minimal_certified);
        assert_eq!(r.span, Some(0));
        let r = analyze(&graph("1;+;"));
        assert!(!r.non_split && !r.minimal_certified);
    }

    #[test]
    fn report_json_field_names() {
        let json = serde_json::to_string(&analyze(&g7())).unwrap();
        assert_eq!(
            json,
            r#"{"n":7,"k":5,"l":4,"genus":0,"alternating":true,"adequate":true,"non_split":true,"graph_knot":false,"span":28,"vertex_lower_bound":7,"minimal_certified":true}"#
        );
    }

    #[test]
    fn mirror_inverts_the_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 8);
            let p = kauffman_bracket(&g).unwrap();
            let q = kauffman_bracket(&mirror(&g)).unwrap();
            let flipped = LaurentPoly::from_terms(p.terms().map(|t| (-t.exp, t.coef))).unwrap();
            assert_eq!(q, flipped);
        }
    }

    #[test]
    fn bracket_invariance_under_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let kinds = [
            MoveKind::R2Add,
            MoveKind::R2Remove,
            MoveKind::R3Fwd,
            MoveKind::R3Inv,
            MoveKind::R4,
            MoveKind::R5Expand,
            MoveKind::R5Contract,
        ];
        for _ in 0..150 {
            let g = random_graph(&mut rng, 8);
            let before = kauffman_bracket(&g).unwrap();
            for site in enumerate_sites(&g, &kinds) {
                let h = apply(&g, &site).unwrap();
                assert_eq!(kauffman_bracket(&h).unwrap(), before, "{g} {site}");
            }
        }
    }

    #[test]
    fn first_move_unit_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = random_graph(&mut rng, 8);
            let before = kauffman_bracket(&g).unwrap();
            for (label, exp) in [(Sign::Plus, -3), (Sign::Minus, 3)] {
                let h = apply(&g, &MoveSite::R1Add { label }).unwrap();
                assert_eq!(
                    kauffman_bracket(&h).unwrap(),
                    before.scale_shift(-1, exp).unwrap()
                );
            }
        }
    }

    #[test]
    fn writhe_laws_on_graph_knots() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 100 {
            let g = random_graph(&mut rng, 9);
            if !is_graph_knot(&g) {
                continue;
            }
            checked += 1;
            let w = writhe(&g).unwrap();
            let x = jones(&g).unwrap();
            for site in enumerate_sites(&g, &MoveKind::BASIC) {
                let h = apply(&g, &site).unwrap();
                assert!(is_graph_knot(&h));
                let expected = match site {
                    MoveSite::R1Add { label: Sign::Plus } => w - 1,
                    MoveSite::R1Add { label: Sign::Minus } => w + 1,
                    MoveSite::R1Remove { v } => w + if g.label(v) == Sign::Plus { 1 } else { -1 },
                    _ => w,
                };
                assert_eq!(writhe(&h).unwrap(), expected, "{g} {site}");
                assert_eq!(jones(&h).unwrap(), x, "{g} {site}");
            }
        }
    }

    #[test]
    fn unknot_orbit_has_trivial_jones() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let steps = rng.gen_range(1..12);
            let g = random_graph_knot(&mut rng, steps, 9);
            assert_eq!(jones(&g).unwrap(), LaurentPoly::one(), "{g}");
        }
    }

    #[test]
    fn span_lemmas_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let g = random_graph(&mut rng, 9);
            let r = analyze(&g);
            let span = r.span.unwrap() as usize;
            assert!(r.k + r.l <= r.n + 2);
            assert!(span <= 4 * r.n - 4 * r.genus);
            if r.adequate {
                assert_eq!(span, 4 * r.n - 4 * r.genus, "{g}");
            }
            if r.alternating {
                assert_eq!(r.genus, 0);
                assert_eq!(r.adequate, r.non_split, "{g}");
            }
        }
    }
}
