//! Fixed examples and seeded random generators shared by tests, the
//! acceptance suite and the CLI self-test.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chord::ChordDiagram;
use crate::graph::{LabeledGraph, Sign};
use crate::moves::{self, MoveKind, MoveSite};

/// The seven-vertex graph: a hexagon `1..6` with vertex 7 joined to 2, 4
/// and 6; odd vertices `−`, even vertices `+`. It is not a circle graph.
pub fn g7() -> LabeledGraph {
    LabeledGraph::parse_compact("7;-+-+-+-;1-2,2-3,3-4,4-5,5-6,1-6,2-7,4-7,6-7")
        .expect("valid literal")
}

pub fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Erdős–Rényi graph on `n` vertices with edge probability `p` and random labels.
pub fn random_graph_n<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> LabeledGraph {
    let labels = (0..n).map(|_| random_sign(rng)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(labels, &edges).expect("generated graph is valid")
}

/// A graph with `0..=max_n` vertices and edge density drawn from `[0.2, 0.6]`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> LabeledGraph {
    let n = rng.gen_range(0..=max_n);
    let p = rng.gen_range(0.2..=0.6);
    random_graph_n(rng, n, p)
}

/// A bipartite graph with one side labelled `+` and the other `−`, which
/// always has `k + l = n + 2`. Vertices of the two sides are interleaved at
/// random positions.
pub fn random_alternating_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> LabeledGraph {
    let labels: Vec<Sign> = (0..n).map(|_| random_sign(rng)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if labels[u] != labels[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(labels, &edges).expect("generated graph is valid")
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// A uniformly shuffled chord word on `0..=max_n` chords with random signs.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> ChordDiagram {
    let n = rng.gen_range(0..=max_n);
    random_diagram_n(rng, n)
}

pub fn random_diagram_n<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChordDiagram {
    let mut word: Vec<usize> = (0..2 * n).map(|p| p / 2).collect();
    word.shuffle(rng);
    let signs = (0..n).map(|_| random_sign(rng)).collect();
    ChordDiagram::new(word, signs).expect("every chord occurs twice")
}

/// One random applicable basic move (R1 to R4 in either direction) that
/// keeps the graph within `max_n` vertices. `R2_add` draws an arbitrary
/// neighbourhood rather than choosing among enumerated ones.
pub fn random_basic_move<R: Rng + ?Sized>(
    rng: &mut R,
    g: &LabeledGraph,
    max_n: usize,
) -> Option<MoveSite> {
    let mut sites: Vec<MoveSite> = moves::enumerate_sites(g, &MoveKind::BASIC)
        .into_iter()
        .filter(|s| !matches!(s, MoveSite::R2Add { .. }))
        .filter(|s| (g.n() as isize + s.kind().vertex_delta()) as usize <= max_n)
        .collect();
    if g.n() + 2 <= max_n {
        let neighborhood = rng.gen::<u64>() & g.vertex_mask();
        sites.push(MoveSite::R2Add { neighborhood });
    }
    sites.choose(rng).copied()
}

/// Applies `steps` random basic moves to the empty graph. The result is a
/// graph-knot Reidemeister-equivalent to the unknot.
pub fn random_graph_knot<R: Rng + ?Sized>(rng: &mut R, steps: usize, max_n: usize) -> LabeledGraph {
    random_walk(rng, &LabeledGraph::empty(), steps, max_n).0
}

/// Random walk of `steps` basic moves from `start`, returning the final
/// graph and the moves taken.
pub fn random_walk<R: Rng + ?Sized>(
    rng: &mut R,
    start: &LabeledGraph,
    steps: usize,
    max_n: usize,
) -> (LabeledGraph, Vec<MoveSite>) {
    let mut g = start.clone();
    let mut taken = Vec::with_capacity(steps);
    for _ in 0..steps {
        let Some(site) = random_basic_move(rng, &g, max_n) else {
            break;
        };
        g = moves::apply(&g, &site).expect("enumerated site applies");
        taken.push(site);
    }
    (g, taken)
}
