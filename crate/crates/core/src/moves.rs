//! Reidemeister graph-moves and their inverses.
//!
//! Every move is a pure function `&LabeledGraph -> LabeledGraph`. Removed
//! vertices are compacted out (remaining vertices keep their relative order)
//! and added vertices receive the highest indices.
//!
//! The third move follows the adjacency matrices used in the invariance
//! argument rather than the looser prose rule: the edges `u–v` and `u–w` are
//! deleted and `u` becomes adjacent to `(N(v) Δ N(w)) ∖ {u, v, w}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "R1_add")]
    R1Add,
    #[serde(rename = "R1_remove")]
    R1Remove,
    #[serde(rename = "R2_add")]
    R2Add,
    #[serde(rename = "R2_remove")]
    R2Remove,
    #[serde(rename = "R3_fwd")]
    R3Fwd,
    #[serde(rename = "R3_inv")]
    R3Inv,
    R4,
    #[serde(rename = "R5_expand")]
    R5Expand,
    #[serde(rename = "R5_contract")]
    R5Contract,
}

impl MoveKind {
    pub const ALL: [MoveKind; 9] = [
        MoveKind::R1Add,
        MoveKind::R1Remove,
        MoveKind::R2Add,
        MoveKind::R2Remove,
        MoveKind::R3Fwd,
        MoveKind::R3Inv,
        MoveKind::R4,
        MoveKind::R5Expand,
        MoveKind::R5Contract,
    ];

    /// The four basic moves in both directions.
    pub const BASIC: [MoveKind; 7] = [
        MoveKind::R1Add,
        MoveKind::R1Remove,
        MoveKind::R2Add,
        MoveKind::R2Remove,
        MoveKind::R3Fwd,
        MoveKind::R3Inv,
        MoveKind::R4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Add => "R1_add",
            MoveKind::R1Remove => "R1_remove",
            MoveKind::R2Add => "R2_add",
            MoveKind::R2Remove => "R2_remove",
            MoveKind::R3Fwd => "R3_fwd",
            MoveKind::R3Inv => "R3_inv",
            MoveKind::R4 => "R4",
            MoveKind::R5Expand => "R5_expand",
            MoveKind::R5Contract => "R5_contract",
        }
    }

    /// Change in vertex count caused by a move of this kind.
    pub fn vertex_delta(self) -> isize {
        match self {
            MoveKind::R1Add => 1,
            MoveKind::R1Remove => -1,
            MoveKind::R2Add | MoveKind::R5Expand => 2,
            MoveKind::R2Remove | MoveKind::R5Contract => -2,
            MoveKind::R3Fwd | MoveKind::R3Inv | MoveKind::R4 => 0,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown move kind {s:?}"))
    }
}

/// A concrete, applicable-or-not move on a graph. Vertex indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveSite {
    /// Append an isolated vertex.
    R1Add {
        label: Sign,
    },
    /// Delete an isolated vertex.
    R1Remove {
        v: usize,
    },
    /// Append a non-adjacent `+`/`−` pair, both adjacent exactly to `neighborhood`.
    R2Add {
        neighborhood: u64,
    },
    /// Delete a non-adjacent pair with opposite labels and equal neighbourhoods.
    R2Remove {
        u: usize,
        v: usize,
    },
    R3Fwd {
        u: usize,
        v: usize,
        w: usize,
    },
    R3Inv {
        u: usize,
        v: usize,
        w: usize,
    },
    R4 {
        u: usize,
        v: usize,
    },
    R5Expand {
        u: usize,
    },
    /// Delete the two `+` leaves `x`, `y` hanging off `u` and relabel `u` to `−`.
    R5Contract {
        u: usize,
        x: usize,
        y: usize,
    },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Add { .. } => MoveKind::R1Add,
            MoveSite::R1Remove { .. } => MoveKind::R1Remove,
            MoveSite::R2Add { .. } => MoveKind::R2Add,
            MoveSite::R2Remove { .. } => MoveKind::R2Remove,
            MoveSite::R3Fwd { .. } => MoveKind::R3Fwd,
            MoveSite::R3Inv { .. } => MoveKind::R3Inv,
            MoveSite::R4 { .. } => MoveKind::R4,
            MoveSite::R5Expand { .. } => MoveKind::R5Expand,
            MoveSite::R5Contract { .. } => MoveKind::R5Contract,
        }
    }

    fn vertices(&self) -> Vec<usize> {
        match *self {
            MoveSite::R1Add { .. } => vec![],
            MoveSite::R2Add { neighborhood } => bits(neighborhood).collect(),
            MoveSite::R1Remove { v } | MoveSite::R5Expand { u: v } => vec![v],
            MoveSite::R2Remove { u, v } | MoveSite::R4 { u, v } => vec![u, v],
            MoveSite::R3Fwd { u, v, w } | MoveSite::R3Inv { u, v, w } => vec![u, v, w],
            MoveSite::R5Contract { u, x, y } => vec![u, x, y],
        }
    }
}

impl fmt::Display for MoveSite {
    /// One move-script line with 1-based vertices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        if let MoveSite::R1Add { label } = self {
            return write!(f, " {label}");
        }
        for v in self.vertices() {
            write!(f, " {}", v + 1)?;
        }
        Ok(())
    }
}

/// Shape of the two vertices added by the fifth move.
///
/// `Pendant` (the two new vertices are not adjacent to each other) is the
/// composite of the second and fourth moves and preserves the bracket;
/// `Triangle` does not and exists only so tests can demonstrate that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum R5Variant {
    #[default]
    Pendant,
    Triangle,
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

fn fail(kind: MoveKind, reason: impl Into<String>) -> Error {
    Error::MoveNotApplicable {
        kind: kind.name(),
        reason: reason.into(),
    }
}

fn check(kind: MoveKind, cond: bool, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(kind, reason()))
    }
}

fn check_vertices(g: &LabeledGraph, site: &MoveSite) -> Result<()> {
    let kind = site.kind();
    let vs = site.vertices();
    for (i, &v) in vs.iter().enumerate() {
        check(kind, v < g.n(), || {
            format!("vertex {} out of range 1..{}", v + 1, g.n())
        })?;
        if !matches!(site, MoveSite::R2Add { .. }) {
            check(kind, !vs[..i].contains(&v), || {
                format!("vertex {} repeated", v + 1)
            })?;
        }
    }
    Ok(())
}

/// Applies `site` to `g`, using the bracket-preserving fifth-move variant.
pub fn apply(g: &LabeledGraph, site: &MoveSite) -> Result<LabeledGraph> {
    apply_with(g, site, R5Variant::default())
}

pub fn apply_with(g: &LabeledGraph, site: &MoveSite, r5: R5Variant) -> Result<LabeledGraph> {
    check_vertices(g, site)?;
    let kind = site.kind();
    let mut out = g.clone();
    match *site {
        MoveSite::R1Add { label } => {
            out.push_vertex(label, 0)?;
        }
        MoveSite::R1Remove { v } => {
            check(kind, g.is_isolated(v), || {
                format!("vertex {} is not isolated", v + 1)
            })?;
            out.remove_vertices(bit(v));
        }
        MoveSite::R2Add { neighborhood } => {
            out.push_vertex(Sign::Plus, neighborhood)?;
            out.push_vertex(Sign::Minus, neighborhood)?;
        }
        MoveSite::R2Remove { u, v } => {
            check(kind, g.label(u) != g.label(v), || "labels are equal".into())?;
            check(kind, !g.adjacent(u, v), || "vertices are adjacent".into())?;
            check(kind, g.neighbors(u) == g.neighbors(v), || {
                "neighbourhoods differ".into()
            })?;
            out.remove_vertices(bit(u) | bit(v));
        }
        MoveSite::R3Fwd { u, v, w } => {
            check(
                kind,
                [u, v, w].iter().all(|&x| g.label(x) == Sign::Minus),
                || "u, v, w must all be labeled '-'".into(),
            )?;
            check(kind, g.neighbors(u) == bit(v) | bit(w), || {
                format!("N({}) must be exactly {{{}, {}}}", u + 1, v + 1, w + 1)
            })?;
            check(kind, !g.adjacent(v, w), || "v and w are adjacent".into())?;
            let target = (g.neighbors(v) ^ g.neighbors(w)) & !(bit(u) | bit(v) | bit(w));
            rewire(&mut out, u, target);
            out.set_label(v, Sign::Plus);
            out.set_label(w, Sign::Plus);
        }
        MoveSite::R3Inv { u, v, w } => {
            check(kind, g.label(u) == Sign::Minus, || {
                "u must be labeled '-'".into()
            })?;
            check(
                kind,
                g.label(v) == Sign::Plus && g.label(w) == Sign::Plus,
                || "v and w must be labeled '+'".into(),
            )?;
            check(
                kind,
                !g.adjacent(u, v) && !g.adjacent(u, w) && !g.adjacent(v, w),
                || "u, v, w must be pairwise non-adjacent".into(),
            )?;
            let expected = (g.neighbors(v) ^ g.neighbors(w)) & !(bit(u) | bit(v) | bit(w));
            check(kind, g.neighbors(u) == expected, || {
                format!("N({}) is not (N(v) Δ N(w)) minus {{u, v, w}}", u + 1)
            })?;
            rewire(&mut out, u, bit(v) | bit(w));
            out.set_label(v, Sign::Minus);
            out.set_label(w, Sign::Minus);
        }
        MoveSite::R4 { u, v } => {
            check(kind, g.adjacent(u, v), || {
                format!("{} and {} are not adjacent", u + 1, v + 1)
            })?;
            let (nu, nv) = (g.neighbors(u), g.neighbors(v));
            let only_u = nu & !nv & !bit(v);
            let only_v = nv & !nu & !bit(u);
            let both = nu & nv;
            for (left, right) in [(only_u, only_v), (only_u, both), (only_v, both)] {
                for t in bits(left) {
                    for x in bits(right) {
                        out.toggle_edge(t, x);
                    }
                }
            }
            out.set_label(u, g.label(v).negate());
            out.set_label(v, g.label(u).negate());
        }
        MoveSite::R5Expand { u } => {
            check(kind, g.label(u) == Sign::Minus, || {
                "u must be labeled '-'".into()
            })?;
            out.set_label(u, Sign::Plus);
            let x = out.push_vertex(Sign::Plus, bit(u))?;
            let y_nbrs = match r5 {
                R5Variant::Pendant => bit(u),
                R5Variant::Triangle => bit(u) | bit(x),
            };
            out.push_vertex(Sign::Plus, y_nbrs)?;
        }
        MoveSite::R5Contract { u, x, y } => {
            check(
                kind,
                [u, x, y].iter().all(|&t| g.label(t) == Sign::Plus),
                || "u, x, y must all be labeled '+'".into(),
            )?;
            let (nx, ny) = match r5 {
                R5Variant::Pendant => (bit(u), bit(u)),
                R5Variant::Triangle => (bit(u) | bit(y), bit(u) | bit(x)),
            };
            check(kind, g.neighbors(x) == nx && g.neighbors(y) == ny, || {
                format!(
                    "{} and {} are not the leaves added at {}",
                    x + 1,
                    y + 1,
                    u + 1
                )
            })?;
            out.set_label(u, Sign::Minus);
            out.remove_vertices(bit(x) | bit(y));
        }
    }
    Ok(out)
}

/// Makes `N(u)` equal to `target`, leaving all other pairs alone.
fn rewire(g: &mut LabeledGraph, u: usize, target: u64) {
    for t in (0..g.n()).filter(|&t| t != u) {
        g.set_edge(u, t, target >> t & 1 == 1);
    }
}

/// Lists every applicable site of the requested kinds, without duplicates.
///
/// Additive moves are unbounded families; `R1_add` yields one site per
/// label and `R2_add` one site per distinct neighbourhood among `∅` and the
/// existing `N(x)`.
pub fn enumerate_sites(g: &LabeledGraph, kinds: &[MoveKind]) -> Vec<MoveSite> {
    let mut wanted: Vec<MoveKind> = Vec::new();
    for &k in kinds {
        if !wanted.contains(&k) {
            wanted.push(k);
        }
    }
    let n = g.n();
    let mut out = Vec::new();
    for kind in wanted {
        match kind {
            MoveKind::R1Add => {
                out.push(MoveSite::R1Add { label: Sign::Plus });
                out.push(MoveSite::R1Add { label: Sign::Minus });
            }
            MoveKind::R1Remove => {
                out.extend(
                    (0..n)
                        .filter(|&v| g.is_isolated(v))
                        .map(|v| MoveSite::R1Remove { v }),
                );
            }
            MoveKind::R2Add => {
                let mut hoods: Vec<u64> = std::iter::once(0)
                    .chain((0..n).map(|v| g.neighbors(v)))
                    .collect();
                hoods.sort_unstable();
                hoods.dedup();
                out.extend(
                    hoods
                        .into_iter()
                        .map(|neighborhood| MoveSite::R2Add { neighborhood }),
                );
            }
            _ => {
                for site in candidate_sites(g, kind) {
                    if apply(g, &site).is_ok() {
                        out.push(site);
                    }
                }
            }
        }
    }
    out
}

/// Cheap structural pre-filter; `apply` makes the final call.
fn candidate_sites(g: &LabeledGraph, kind: MoveKind) -> Vec<MoveSite> {
    let n = g.n();
    let mut out = Vec::new();
    match kind {
        MoveKind::R2Remove => {
            for u in 0..n {
                for v in u + 1..n {
                    if g.neighbors(u) == g.neighbors(v) && g.label(u) != g.label(v) {
                        out.push(MoveSite::R2Remove { u, v });
                    }
                }
            }
        }
        MoveKind::R3Fwd => {
            for u in (0..n).filter(|&u| g.degree(u) == 2) {
                let mut it = bits(g.neighbors(u));
                let (v, w) = (it.next().unwrap(), it.next().unwrap());
                out.push(MoveSite::R3Fwd { u, v, w });
            }
        }
        MoveKind::R3Inv => {
            let plus: Vec<usize> = (0..n).filter(|&v| g.label(v) == Sign::Plus).collect();
            for u in (0..n).filter(|&u| g.label(u) == Sign::Minus) {
                for (i, &v) in plus.iter().enumerate() {
                    for &w in &plus[i + 1..] {
                        let clear = bit(u) | bit(v) | bit(w);
                        if g.neighbors(u) == (g.neighbors(v) ^ g.neighbors(w)) & !clear {
                            out.push(MoveSite::R3Inv { u, v, w });
                        }
                    }
                }
            }
        }
        MoveKind::R4 => {
            out.extend(g.edges().into_iter().map(|(u, v)| MoveSite::R4 { u, v }));
        }
        MoveKind::R5Expand => {
            out.extend((0..n).map(|u| MoveSite::R5Expand { u }));
        }
        MoveKind::R5Contract => {
            for u in 0..n {
                let leaves: Vec<usize> = bits(g.neighbors(u))
                    .filter(|&x| g.neighbors(x) == bit(u))
                    .collect();
                for (i, &x) in leaves.iter().enumerate() {
                    for &y in &leaves[i + 1..] {
                        out.push(MoveSite::R5Contract { u, x, y });
                    }
                }
            }
        }
        MoveKind::R1Add | MoveKind::R1Remove | MoveKind::R2Add => {}
    }
    out
}

// ---------------------------------------------------------------------------
// Move scripts
// ---------------------------------------------------------------------------

/// Parses a move script: one `kind arg...` per line (or `;`-separated),
/// vertices 1-based, `#` starts a comment.
pub fn parse_script(text: &str) -> Result<Vec<MoveSite>> {
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let code = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in code.split(';') {
            let here = offset + (stmt.len() - stmt.trim_start().len());
            offset += stmt.len() + 1;
            if stmt.trim().is_empty() {
                continue;
            }
            out.push(parse_move(stmt).map_err(|m| Error::parse(line_no, here, m))?);
        }
    }
    Ok(out)
}

fn parse_move(stmt: &str) -> Result<MoveSite, String> {
    let mut tokens = stmt.split_whitespace();
    let kind: MoveKind = tokens.next().unwrap_or_default().parse()?;
    let args: Vec<&str> = tokens.collect();
    if kind == MoveKind::R1Add {
        let [label] = args[..] else {
            return Err("R1_add takes exactly one label '+' or '-'".into());
        };
        let mut chars = label.chars();
        let sign = match (chars.next(), chars.next()) {
            (Some(c), None) => Sign::from_char(c),
            _ => None,
        };
        return sign
            .map(|label| MoveSite::R1Add { label })
            .ok_or_else(|| format!("bad label {label:?}"));
    }
    let vs = args
        .iter()
        .map(|a| match a.parse::<usize>() {
            Ok(v) if (1..=crate::gf2::MAX_DIM).contains(&v) => Ok(v - 1),
            _ => Err(format!("bad vertex {a:?}")),
        })
        .collect::<Result<Vec<usize>, String>>()?;
    let arity = |k: usize| -> Result<(), String> {
        if vs.len() == k {
            Ok(())
        } else {
            Err(format!("{kind} takes {k} vertices, got {}", vs.len()))
        }
    };
    Ok(match kind {
        MoveKind::R1Add => unreachable!(),
        MoveKind::R1Remove => {
            arity(1)?;
            MoveSite::R1Remove { v: vs[0] }
        }
        MoveKind::R2Add => MoveSite::R2Add {
            neighborhood: vs.iter().fold(0, |m, &v| m | bit(v)),
        },
        MoveKind::R2Remove => {
            arity(2)?;
            MoveSite::R2Remove { u: vs[0], v: vs[1] }
        }
        MoveKind::R3Fwd => {
            arity(3)?;
            MoveSite::R3Fwd {
                u: vs[0],
                v: vs[1],
                w: vs[2],
            }
        }
        MoveKind::R3Inv => {
            arity(3)?;
            MoveSite::R3Inv {
                u: vs[0],
                v: vs[1],
                w: vs[2],
            }
        }
        MoveKind::R4 => {
            arity(2)?;
            MoveSite::R4 { u: vs[0], v: vs[1] }
        }
        MoveKind::R5Expand => {
            arity(1)?;
            MoveSite::R5Expand { u: vs[0] }
        }
        MoveKind::R5Contract => {
            arity(3)?;
            MoveSite::R5Contract {
                u: vs[0],
                x: vs[1],
                y: vs[2],
            }
        }
    })
}

pub fn format_script(sites: &[MoveSite]) -> String {
    sites.iter().map(|s| format!("{s}\n")).collect()
}

/// Applies a whole script in order.
pub fn apply_script(g: &LabeledGraph, sites: &[MoveSite]) -> Result<LabeledGraph> {
    sites
        .iter()
        .try_fold(g.clone(), |acc, site| apply(&acc, site))
}
