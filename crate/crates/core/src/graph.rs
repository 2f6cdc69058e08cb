//! Labeled simple graphs, states, and their text/JSON encodings.
//!
//! Vertices are `0..n` internally; both file formats number them from 1.
//! Adjacency is stored as one `u64` neighbour mask per vertex, so `n` is
//! capped at [`MAX_DIM`].

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{self, low_mask, BitMatrix, MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("label {v} is not +1 or -1")))
    }
}

/// A strict (loopless, simple) graph whose vertices carry signs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    labels: Vec<Sign>,
    adj: Vec<u64>,
}

impl LabeledGraph {
    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            adj: Vec::new(),
        }
    }

    /// Builds a graph from 0-based edges. Loops, repeated edges and
    /// out-of-range endpoints are rejected.
    pub fn new(labels: Vec<Sign>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: MAX_DIM,
            });
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} has an endpoint outside 1..{n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", u + 1)));
            }
            if adj[u] >> v & 1 == 1 {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {}-{}",
                    u.min(v) + 1,
                    u.max(v) + 1
                )));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self { labels, adj })
    }

    /// Builds a graph from neighbour masks; the masks must be symmetric with
    /// an empty diagonal.
    pub fn from_masks(labels: Vec<Sign>, adj: Vec<u64>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: MAX_DIM,
            });
        }
        if adj.len() != n {
            return Err(Error::InvalidGraph("label and row counts differ".into()));
        }
        for (v, &row) in adj.iter().enumerate() {
            if row & !low_mask(n) != 0 {
                return Err(Error::InvalidGraph(format!(
                    "vertex {} has out-of-range neighbours",
                    v + 1
                )));
            }
            if row >> v & 1 == 1 {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", v + 1)));
            }
            let mut rest = row;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if adj[w] >> v & 1 == 0 {
                    return Err(Error::InvalidGraph("adjacency is not symmetric".into()));
                }
            }
        }
        Ok(Self { labels, adj })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Sign] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Sign {
        self.labels[v]
    }

    /// Neighbour mask `N(v)`.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.adj[v] == 0
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.contains(&0)
    }

    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n())
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            let mut rest = self.adj[u] & !low_mask(u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn adjacency_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n(), self.adj.clone()).expect("graph rows are in range")
    }

    /// The graph `π·g` in which vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = 0u64;
        if perm.len() != n {
            return Err(Error::InvalidGraph(
                "permutation has the wrong length".into(),
            ));
        }
        for &p in perm {
            if p >= n || seen >> p & 1 == 1 {
                return Err(Error::InvalidGraph(
                    "not a permutation of the vertex set".into(),
                ));
            }
            seen |= 1 << p;
        }
        let mut labels = vec![Sign::Plus; n];
        let mut adj = vec![0u64; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v];
            let mut rest = self.adj[v];
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                adj[perm[v]] |= 1 << perm[w];
            }
        }
        Ok(Self { labels, adj })
    }

    // Mutators used by the move implementations. They keep the invariants
    // but skip validation.

    pub(crate) fn set_label(&mut self, v: usize, s: Sign) {
        self.labels[v] = s;
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj[u] ^= 1 << v;
        self.adj[v] ^= 1 << u;
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if self.adjacent(u, v) != present {
            self.toggle_edge(u, v);
        }
    }

    /// Appends a vertex adjacent to exactly `nbrs`; returns its index.
    pub(crate) fn push_vertex(&mut self, label: Sign, nbrs: u64) -> Result<usize> {
        let v = self.n();
        if v + 1 > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: v + 1,
                max: MAX_DIM,
            });
        }
        debug_assert_eq!(nbrs & !low_mask(v), 0);
        self.labels.push(label);
        self.adj.push(nbrs);
        let mut rest = nbrs;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.adj[w] |= 1 << v;
        }
        Ok(v)
    }

    /// Removes the vertices in `doomed`, compacting the remaining indices
    /// in their original order.
    pub(crate) fn remove_vertices(&mut self, doomed: u64) {
        let keep: Vec<usize> = (0..self.n()).filter(|v| doomed >> v & 1 == 0).collect();
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        let adj = keep
            .iter()
            .map(|&v| compress_bits(self.adj[v], &keep))
            .collect();
        self.labels = labels;
        self.adj = adj;
    }
}

/// Re-indexes the bits of `mask` listed in `keep` to positions `0..keep.len()`.
fn compress_bits(mask: u64, keep: &[usize]) -> u64 {
    keep.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &v)| acc | ((mask >> v & 1) << i))
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph({})", self.to_compact())
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// A state: a subset of the vertex set of a graph with `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct State {
    members: u64,
    n: usize,
}

impl State {
    pub fn new(n: usize, members: u64) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: MAX_DIM,
            });
        }
        if members & !low_mask(n) != 0 {
            return Err(Error::IndexOutOfRange {
                index: (members & !low_mask(n)).trailing_zeros() as usize,
                dim: n,
            });
        }
        Ok(Self { members, n })
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut members = 0u64;
        for &v in vertices {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, dim: n });
            }
            members |= 1 << v;
        }
        Self::new(n, members)
    }

    pub fn empty(n: usize) -> Self {
        Self { members: 0, n }
    }

    pub fn full(n: usize) -> Self {
        Self {
            members: low_mask(n),
            n,
        }
    }

    pub fn mask(self) -> u64 {
        self.members
    }

    pub fn universe(self) -> usize {
        self.n
    }

    pub fn contains(self, v: usize) -> bool {
        self.members >> v & 1 == 1
    }

    pub fn len(self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.members == 0
    }

    pub fn vertices(self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.contains(v)).collect()
    }

    /// The complementary state.
    pub fn opposite(self) -> Self {
        Self {
            members: !self.members & low_mask(self.n),
            n: self.n,
        }
    }

    /// Flips membership of one vertex.
    pub fn toggled(self, v: usize) -> Self {
        Self {
            members: self.members ^ (1 << v),
            n: self.n,
        }
    }

    /// Number of vertices in which the two states differ.
    pub fn distance(self, other: Self) -> usize {
        (self.members ^ other.members).count_ones() as usize
    }
}

fn sign_mask(g: &LabeledGraph, sign: Sign) -> u64 {
    g.labels
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == sign)
        .fold(0u64, |acc, (v, _)| acc | 1 << v)
}

/// The state of all `−` vertices.
pub fn a_state(g: &LabeledGraph) -> State {
    State {
        members: sign_mask(g, Sign::Minus),
        n: g.n(),
    }
}

/// The state of all `+` vertices.
pub fn b_state(g: &LabeledGraph) -> State {
    State {
        members: sign_mask(g, Sign::Plus),
        n: g.n(),
    }
}

/// `−` vertices inside the state plus `+` vertices outside it.
pub fn alpha(g: &LabeledGraph, s: State) -> usize {
    let minus = sign_mask(g, Sign::Minus);
    alpha_from_mask(minus, g.n(), s.members)
}

#[inline]
pub(crate) fn alpha_from_mask(minus: u64, n: usize, s: u64) -> usize {
    let plus = !minus & low_mask(n);
    ((minus & s).count_ones() + (plus & !s).count_ones()) as usize
}

pub fn beta(g: &LabeledGraph, s: State) -> usize {
    g.n() - alpha(g, s)
}

/// `corank A(G(s)) + 1`.
pub fn circle_count(g: &LabeledGraph, s: State) -> usize {
    gf2::masked_corank(&g.adj, s.members) + 1
}

pub(crate) fn minus_mask(g: &LabeledGraph) -> u64 {
    sign_mask(g, Sign::Minus)
}

// ---------------------------------------------------------------------------
// Text and JSON formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    labels: Vec<Sign>,
    edges: Vec<[usize; 2]>,
}

impl LabeledGraph {
    /// `<n>;<labels>;<edges>` with 1-based, sorted edges.
    pub fn to_compact(&self) -> String {
        let labels: String = self.labels.iter().map(|s| s.to_char()).collect();
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
            .collect();
        format!("{};{};{}", self.n(), labels, edges.join(","))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph JSON is infallible")
    }

    /// Parses either format, choosing JSON when the first non-blank byte is `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_compact(text)
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        if raw.labels.len() != raw.n {
            return Err(Error::parse(
                1,
                0,
                format!(
                    "\"n\" is {} but {} labels were given",
                    raw.n,
                    raw.labels.len()
                ),
            ));
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (k, [a, b]) in raw.edges.iter().copied().enumerate() {
            if a == 0 || b == 0 || a > raw.n || b > raw.n {
                return Err(Error::parse(
                    1,
                    0,
                    format!("edge #{} ({a}-{b}) is out of range 1..{}", k + 1, raw.n),
                ));
            }
            edges.push((a - 1, b - 1));
        }
        Self::new(raw.labels, &edges).map_err(|e| Error::parse(1, 0, e.to_string()))
    }

    /// Parses the one-line compact format. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse_compact(text: &str) -> Result<Self> {
        let mut found = None;
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if found.is_some() {
                return Err(Error::parse(idx + 1, 0, "unexpected extra line"));
            }
            found = Some((idx + 1, line));
        }
        let Some((line_no, line)) = found else {
            return Err(Error::parse(1, 0, "empty input"));
        };
        parse_compact_line(line_no, line)
    }
}

fn parse_compact_line(line_no: usize, line: &str) -> Result<LabeledGraph> {
    let err = |offset: usize, msg: String| Error::parse(line_no, offset, msg);
    let lead = line.len() - line.trim_start().len();
    let body = line.trim();

    let parts: Vec<&str> = body.split(';').collect();
    if parts.len() != 3 {
        return Err(err(
            lead,
            format!("expected 3 ';'-separated sections, found {}", parts.len()),
        ));
    }
    let label_off = lead + parts[0].len() + 1;
    let edge_off = label_off + parts[1].len() + 1;

    let n: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| err(lead, format!("vertex count {:?} is not a number", parts[0])))?;
    if n > MAX_DIM {
        return Err(err(lead, format!("vertex count {n} exceeds {MAX_DIM}")));
    }

    let mut labels = Vec::with_capacity(n);
    for (i, c) in parts[1].char_indices() {
        if c.is_whitespace() {
            continue;
        }
        labels.push(
            Sign::from_char(c).ok_or_else(|| err(label_off + i, format!("bad label {c:?}")))?,
        );
    }
    if labels.len() != n {
        return Err(err(
            label_off,
            format!("expected {n} labels, found {}", labels.len()),
        ));
    }

    let mut adj = vec![0u64; n];
    let mut pos = edge_off;
    for item in parts[2].split(',') {
        let here = pos + (item.len() - item.trim_start().len());
        pos += item.len() + 1;
        let item = item.trim();
        if item.is_empty() {
            if parts[2].trim().is_empty() {
                continue;
            }
            return Err(err(here, "empty edge entry".into()));
        }
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| err(here, format!("edge {item:?} is not of the form i-j")))?;
        let parse_end = |s: &str| -> Result<usize> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| err(here, format!("bad vertex {s:?} in edge {item:?}")))?;
            if v == 0 || v > n {
                return Err(err(here, format!("vertex {v} out of range 1..{n}")));
            }
            Ok(v - 1)
        };
        let (u, v) = (parse_end(a)?, parse_end(b)?);
        if u == v {
            return Err(err(here, format!("loop at vertex {}", u + 1)));
        }
        if adj[u] >> v & 1 == 1 {
            return Err(err(here, format!("duplicate edge {item}")));
        }
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    Ok(LabeledGraph { labels, adj })
}

impl Serialize for LabeledGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n(),
            labels: self.labels.clone(),
            edges: self.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        if raw.labels.len() != raw.n {
            return Err(serde::de::Error::custom("label count does not match n"));
        }
        let edges: Vec<(usize, usize)> = raw
            .edges
            .iter()
            .map(|&[a, b]| (a.wrapping_sub(1), b.wrapping_sub(1)))
            .collect();
        LabeledGraph::new(raw.labels, &edges).map_err(serde::de::Error::custom)
    }
}
