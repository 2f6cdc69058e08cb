//! Canonical forms of labeled graphs and bounded breadth-first search of the
//! move graph.
//!
//! Canonical labeling uses individualization and refinement. The start
//! partition groups vertices by label, colour refinement splits cells by
//! neighbour counts, and every discrete partition reachable by individualizing
//! vertices of the first non-singleton cell is a candidate ordering. The key
//! is the least encoding over those orderings. Cell order is decided by
//! isomorphism-invariant signatures only, so permuted inputs explore the same
//! set of encodings. Interchangeable twins (vertices with equal neighbourhoods
//! apart from each other) are explored once.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::graph::{LabeledGraph, Sign};
use crate::invariants::{self, DEFAULT_STATE_LIMIT};
use crate::moves::{self, MoveKind, MoveSite};

/// Byte string identifying a labeled graph up to label-preserving isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Encoding of `g` with vertex `order[i]` placed at position `i`: the vertex
/// count, one label byte per position, then the lower triangle of the
/// adjacency matrix row by row, packed most significant bit first.
fn encode(g: &LabeledGraph, order: &[usize]) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::with_capacity(1 + n + n * n / 16 + 1);
    out.push(n as u8);
    out.extend(order.iter().map(|&v| match g.label(v) {
        Sign::Plus => 0u8,
        Sign::Minus => 1u8,
    }));
    let mut acc = 0u8;
    let mut filled = 0;
    for i in 1..n {
        for j in 0..i {
            acc = acc << 1 | g.adjacent(order[i], order[j]) as u8;
            filled += 1;
            if filled == 8 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (8 - filled));
    }
    out
}

type Partition = Vec<Vec<usize>>;

fn cell_mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |m, &v| m | 1 << v)
}

/// Splits cells by neighbour counts into every cell until stable. Within a
/// cell the parts are ordered by their signature, so the result depends only
/// on the isomorphism type of (graph, partition).
fn refine(g: &LabeledGraph, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| cell_mask(c)).collect();
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let nb = g.neighbors(v);
                    (masks.iter().map(|m| (nb & m).count_ones()).collect(), v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn twins(g: &LabeledGraph, u: usize, v: usize) -> bool {
    let strip = !(1u64 << u | 1u64 << v);
    g.neighbors(u) & strip == g.neighbors(v) & strip
}

struct Canon<'a> {
    g: &'a LabeledGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl Canon<'_> {
    fn search(&mut self, cells: Partition) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = encode(self.g, &order);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, order));
            }
            return;
        };
        let cell = &cells[target];
        let mut tried: Vec<usize> = Vec::new();
        for &v in cell {
            if tried.iter().any(|&u| twins(self.g, u, v)) {
                continue;
            }
            tried.push(v);
            let mut split = cells.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&x| x != v).collect();
            split[target] = vec![v];
            split.insert(target + 1, rest);
            self.search(refine(self.g, split));
        }
    }
}

/// Canonical key of `g` and the ordering that produces it: `order[i]` is
/// the vertex of `g` at canonical position `i`. With `use_labels == false`
/// the labels are ignored (the key then encodes every label as `+`).
pub fn canonical_labeling(g: &LabeledGraph, use_labels: bool) -> (CanonicalKey, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (CanonicalKey(vec![0]), Vec::new());
    }
    let plain;
    let g = if use_labels {
        g
    } else {
        plain = LabeledGraph::from_masks(vec![Sign::Plus; n], g.rows().to_vec())
            .expect("same structure");
        &plain
    };
    let mut start: Partition = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let cell: Vec<usize> = (0..n).filter(|&v| g.label(v) == sign).collect();
        if !cell.is_empty() {
            start.push(cell);
        }
    }
    let mut canon = Canon { g, best: None };
    canon.search(refine(g, start));
    let (code, order) = canon.best.expect("at least one leaf");
    (CanonicalKey(code), order)
}

pub fn canonical_form(g: &LabeledGraph) -> CanonicalKey {
    canonical_labeling(g, true).0
}

/// Label-preserving isomorphism test.
pub fn is_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    g1.n() == g2.n()
        && g1.edge_count() == g2.edge_count()
        && canonical_form(g1) == canonical_form(g2)
}

/// The graph with vertices renumbered into canonical order.
pub fn canonical_graph(g: &LabeledGraph) -> LabeledGraph {
    let (_, order) = canonical_labeling(g, true);
    let mut perm = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    g.permuted(&perm).expect("order is a permutation")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitBounds {
    pub max_vertices: usize,
    pub max_depth: usize,
    pub max_states: usize,
}

impl OrbitBounds {
    pub const DEFAULT_DEPTH: usize = 6;
    pub const DEFAULT_STATES: usize = 1_000_000;

    /// `n + 2` vertices, depth 6, a million states.
    pub fn for_graph(g: &LabeledGraph) -> Self {
        Self {
            max_vertices: (g.n() + 2).min(crate::gf2::MAX_DIM),
            max_depth: Self::DEFAULT_DEPTH,
            max_states: Self::DEFAULT_STATES,
        }
    }
}

/// One visited representative.
#[derive(Debug, Clone)]
pub struct OrbitNode {
    pub key: CanonicalKey,
    /// The representative as produced by the move, not canonically relabeled.
    pub graph: LabeledGraph,
    pub depth: usize,
    /// Index of the node this one was first reached from, and the move used.
    pub parent: Option<(usize, MoveSite)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub visited: usize,
    pub min_vertices: usize,
    /// True when a bound cut the search short: the state cap was hit, or
    /// the last level still had unexpanded nodes.
    pub truncated: bool,
    /// Move script from the start graph to the first smallest representative.
    pub witness: String,
    #[serde(skip)]
    pub nodes: Vec<OrbitNode>,
}

impl OrbitReport {
    /// Move path from the start graph to node `idx`.
    pub fn path_to(&self, mut idx: usize) -> Vec<MoveSite> {
        let mut path = Vec::new();
        while let Some((p, site)) = self.nodes[idx].parent {
            path.push(site);
            idx = p;
        }
        path.reverse();
        path
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.nodes.iter().any(|n| n.key == *key)
    }
}

fn expand(g: &LabeledGraph, max_vertices: usize) -> Vec<(MoveSite, LabeledGraph, CanonicalKey)> {
    moves::enumerate_sites(g, &MoveKind::BASIC)
        .into_iter()
        .filter(|s| (g.n() as isize + s.kind().vertex_delta()) as usize <= max_vertices)
        .map(|s| {
            let h = moves::apply(g, &s).expect("enumerated site applies");
            let k = canonical_form(&h);
            (s, h, k)
        })
        .collect()
}

/// Breadth-first search over the basic moves in both directions, visiting
/// graphs with at most `max_vertices` vertices up to `max_depth` moves away.
///
/// Levels are expanded in parallel; successors are merged in frontier order
/// and site order, so the report does not depend on the worker count.
pub fn bfs_orbit(g: &LabeledGraph, bounds: OrbitBounds) -> OrbitReport {
    let start_key = canonical_form(g);
    let mut nodes = vec![OrbitNode {
        key: start_key.clone(),
        graph: g.clone(),
        depth: 0,
        parent: None,
    }];
    let mut index: HashMap<CanonicalKey, usize> = HashMap::from([(start_key, 0)]);
    let mut frontier = vec![0usize];
    let mut truncated = false;
    let mut depth = 0;
    while !frontier.is_empty() {
        if depth >= bounds.max_depth {
            truncated = true;
            break;
        }
        let expanded: Vec<Vec<(MoveSite, LabeledGraph, CanonicalKey)>> = frontier
            .par_iter()
            .map(|&i| expand(&nodes[i].graph, bounds.max_vertices))
            .collect();
        let mut next = Vec::new();
        'merge: for (&parent, succ) in frontier.iter().zip(expanded) {
            for (site, graph, key) in succ {
                if index.contains_key(&key) {
                    continue;
                }
                if nodes.len() >= bounds.max_states {
                    truncated = true;
                    break 'merge;
                }
                index.insert(key.clone(), nodes.len());
                next.push(nodes.len());
                nodes.push(OrbitNode {
                    key,
                    graph,
                    depth: depth + 1,
                    parent: Some((parent, site)),
                });
            }
        }
        frontier = next;
        depth += 1;
        if truncated {
            break;
        }
    }
    let (min_idx, min_vertices) = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (i, n.graph.n()))
        .min_by_key(|&(i, n)| (n, i))
        .expect("start node");
    let mut report = OrbitReport {
        visited: nodes.len(),
        min_vertices,
        truncated,
        witness: String::new(),
        nodes,
    };
    report.witness = moves::format_script(&report.path_to(min_idx));
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    DistinctByInvariant,
    Unknown,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::Equivalent => "equivalent",
            Equivalence::DistinctByInvariant => "distinct_by_invariant",
            Equivalence::Unknown => "unknown",
        })
    }
}

/// Compares graph-knot status and the bracket up to units. `None` when an
/// invariant could not be computed within the state-sum limit.
fn invariants_differ(g1: &LabeledGraph, g2: &LabeledGraph) -> Option<bool> {
    if invariants::is_graph_knot(g1) != invariants::is_graph_knot(g2) {
        return Some(true);
    }
    let b1 = invariants::kauffman_bracket_with_limit(g1, DEFAULT_STATE_LIMIT).ok()?;
    let b2 = invariants::kauffman_bracket_with_limit(g2, DEFAULT_STATE_LIMIT).ok()?;
    if b1.unit_ratio(&b2).is_none() {
        return Some(true);
    }
    if invariants::is_graph_knot(g1) {
        let j1 = invariants::jones(g1).ok()?;
        let j2 = invariants::jones(g2).ok()?;
        return Some(j1 != j2);
    }
    Some(false)
}

/// Bounded equivalence check. `Unknown` never claims non-equivalence.
pub fn are_equivalent_bounded(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    bounds: OrbitBounds,
) -> Equivalence {
    if g1.n() == g2.n() && canonical_form(g1) == canonical_form(g2) {
        return Equivalence::Equivalent;
    }
    if invariants_differ(g1, g2) == Some(true) {
        return Equivalence::DistinctByInvariant;
    }
    let o1 = bfs_orbit(g1, bounds);
    let o2 = bfs_orbit(g2, bounds);
    let keys: std::collections::HashSet<&CanonicalKey> = o1.nodes.iter().map(|n| &n.key).collect();
    if o2.nodes.iter().any(|n| keys.contains(&n.key)) {
        Equivalence::Equivalent
    } else {
        Equivalence::Unknown
    }
}
