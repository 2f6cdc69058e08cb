//! Signed chord diagrams, their intersection graphs, and circle counting by
//! surgery.
//!
//! A diagram on `n` chords is a word of length `2n` in which every chord id
//! occurs twice, read around the circle. Surgery along a set of chords is
//! modelled on the `2n` endpoint positions: `next(x) = x + 1 (mod 2n)`,
//! `match(x)` swaps the endpoints of a selected chord and fixes all other
//! positions, and the surgered curves are the cycles of `next ∘ match`.
//! This count is computed without any linear algebra, which is what makes it
//! a useful cross-check for the corank formula.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::low_mask;
use crate::graph::{LabeledGraph, Sign};
use crate::laurent::LaurentPoly;
use crate::orbit;

/// Default largest graph handed to [`realizability_search`].
pub const DEFAULT_REALIZE_LIMIT: usize = 8;
/// Above this the `(2n − 1)!!` matchings are out of reach regardless of flags.
pub const HARD_REALIZE_LIMIT: usize = 10;
/// Default cap on chords for [`ChordDiagram::bracket_via_surgery`].
pub const DEFAULT_SURGERY_LIMIT: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChordDiagram {
    /// Chord ids `0..n`, each exactly twice.
    word: Vec<usize>,
    signs: Vec<Sign>,
    /// `partner[p]` is the other endpoint of the chord at position `p`.
    partner: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    word: Vec<usize>,
    signs: Vec<Sign>,
}

impl ChordDiagram {
    /// Builds a diagram from a 0-based chord word.
    pub fn new(word: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        let n = signs.len();
        if n > crate::gf2::MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: crate::gf2::MAX_DIM,
            });
        }
        if word.len() != 2 * n {
            return Err(Error::InvalidDiagram(format!(
                "word has length {} but {n} signs need length {}",
                word.len(),
                2 * n
            )));
        }
        let mut first = vec![usize::MAX; n];
        let mut partner = vec![usize::MAX; 2 * n];
        for (p, &c) in word.iter().enumerate() {
            if c >= n {
                return Err(Error::InvalidDiagram(format!(
                    "chord id {} out of range 1..{n}",
                    c + 1
                )));
            }
            if first[c] == usize::MAX {
                first[c] = p;
            } else if partner[first[c]] == usize::MAX {
                partner[first[c]] = p;
                partner[p] = first[c];
            } else {
                return Err(Error::InvalidDiagram(format!(
                    "chord {} occurs more than twice",
                    c + 1
                )));
            }
        }
        if let Some(c) = (0..n).find(|&c| first[c] == usize::MAX || partner[first[c]] == usize::MAX)
        {
            return Err(Error::InvalidDiagram(format!(
                "chord {} does not occur exactly twice",
                c + 1
            )));
        }
        Ok(Self {
            word,
            signs,
            partner,
        })
    }

    pub fn empty() -> Self {
        Self {
            word: Vec::new(),
            signs: Vec::new(),
            partner: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// The two endpoint positions of chord `c`, in increasing order.
    pub fn endpoints(&self, c: usize) -> (usize, usize) {
        let p = self.word.iter().position(|&x| x == c).expect("valid chord");
        (p, self.partner[p])
    }

    /// Whether the endpoints of `c1` and `c2` interleave around the circle.
    pub fn linked(&self, c1: usize, c2: usize) -> Result<bool> {
        let n = self.n();
        for c in [c1, c2] {
            if c >= n {
                return Err(Error::InvalidDiagram(format!("unknown chord {}", c + 1)));
            }
        }
        if c1 == c2 {
            return Err(Error::InvalidDiagram(
                "a chord is not linked with itself".into(),
            ));
        }
        let (a, b) = self.endpoints(c1);
        let (x, y) = self.endpoints(c2);
        let inside = |p: usize| a < p && p < b;
        Ok(inside(x) != inside(y))
    }

    pub fn intersection_graph(&self) -> LabeledGraph {
        let n = self.n();
        let mut adj = vec![0u64; n];
        for c1 in 0..n {
            for c2 in c1 + 1..n {
                if self.linked(c1, c2).expect("ids in range") {
                    adj[c1] |= 1 << c2;
                    adj[c2] |= 1 << c1;
                }
            }
        }
        LabeledGraph::from_masks(self.signs.clone(), adj).expect("linking is symmetric")
    }

    /// The map `next ∘ match` on endpoint positions for the chord set `chords`.
    pub fn surgery_successor(&self, chords: u64) -> Result<Vec<usize>> {
        if chords & !low_mask(self.n()) != 0 {
            return Err(Error::IndexOutOfRange {
                index: (chords & !low_mask(self.n())).trailing_zeros() as usize,
                dim: self.n(),
            });
        }
        let len = self.word.len();
        Ok((0..len)
            .map(|p| {
                let q = if chords >> self.word[p] & 1 == 1 {
                    self.partner[p]
                } else {
                    p
                };
                (q + 1) % len
            })
            .collect())
    }

    /// Number of curves after surgery along the chords in `chords`.
    pub fn surgery_circle_count(&self, chords: u64) -> Result<usize> {
        let succ = self.surgery_successor(chords)?;
        if succ.is_empty() {
            return Ok(1);
        }
        let mut seen = vec![false; succ.len()];
        let mut cycles = 0;
        for start in 0..succ.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = succ[p];
            }
        }
        Ok(cycles)
    }

    /// Bracket from surgery circle counts: `Σ_s a^(α−β) (−a²−a⁻²)^(γ(s)−1)`,
    /// where `s` ranges over chord subsets.
    pub fn bracket_via_surgery(&self, limit: usize) -> Result<LaurentPoly> {
        let n = self.n();
        if n > limit || n >= 63 {
            return Err(Error::ResourceLimit {
                what: "surgery state sum",
                size: n,
                limit,
            });
        }
        let mut acc = LaurentPoly::zero();
        for s in 0..1u64 << n {
            let alpha = (0..n)
                .filter(|&c| (s >> c & 1 == 1) == (self.signs[c] == Sign::Minus))
                .count() as i32;
            let gamma = self.surgery_circle_count(s)?;
            let term = LaurentPoly::mono(1, 2 * alpha - n as i32)
                .checked_mul(&LaurentPoly::loop_factor_pow(gamma as u32 - 1)?)?;
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// `"<word>;<signs>"` with 1-based chord ids, e.g. `1 2 1 2;++`.
    pub fn to_text(&self) -> String {
        let word: Vec<String> = self.word.iter().map(|c| (c + 1).to_string()).collect();
        let signs: String = self.signs.iter().map(|s| s.to_char()).collect();
        format!("{};{}", word.join(" "), signs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson {
            word: self.word.iter().map(|c| c + 1).collect(),
            signs: self.signs.clone(),
        })
        .expect("diagram JSON is infallible")
    }

    /// Parses `<word>;<signs>` or the JSON form `{"word": [...], "signs": [...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let raw: DiagramJson = serde_json::from_str(trimmed)
                .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
            let word = raw
                .word
                .iter()
                .map(|&c| {
                    c.checked_sub(1)
                        .ok_or_else(|| Error::parse(1, 0, "chord ids are 1-based"))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::new(word, raw.signs).map_err(|e| Error::parse(1, 0, e.to_string()));
        }
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        let [(idx, line)] = lines[..] else {
            return Err(Error::parse(1, 0, "expected exactly one diagram line"));
        };
        let line_no = idx + 1;
        let (word_part, sign_part) = line
            .split_once(';')
            .ok_or_else(|| Error::parse(line_no, 0, "expected '<word>;<signs>'"))?;
        let sign_off = word_part.len() + 1;
        let mut word = Vec::new();
        for tok in word_part.split_whitespace() {
            let c: usize = tok
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| Error::parse(line_no, 0, format!("bad chord id {tok:?}")))?;
            word.push(c - 1);
        }
        let mut signs = Vec::new();
        for (i, ch) in sign_part.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            signs.push(
                Sign::from_char(ch).ok_or_else(|| {
                    Error::parse(line_no, sign_off + i, format!("bad sign {ch:?}"))
                })?,
            );
        }
        Self::new(word, signs).map_err(|e| Error::parse(line_no, 0, e.to_string()))
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChordDiagram({})", self.to_text())
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Result of a bounded realizability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    /// A diagram whose intersection graph equals the input graph exactly.
    pub witness: Option<ChordDiagram>,
    /// True when every matching was examined (always true if a witness was found).
    pub exhausted: bool,
    /// Number of complete matchings examined.
    pub examined: u64,
}

struct Search<'a> {
    target_edges: usize,
    target_degrees: Vec<u32>,
    target_key: orbit::CanonicalKey,
    target_order: &'a [usize],
    target: &'a LabeledGraph,
    budget: u64,
    examined: u64,
    partner: Vec<usize>,
    found: Option<ChordDiagram>,
}

impl Search<'_> {
    fn recurse(&mut self) -> bool {
        let Some(p) = self.partner.iter().position(|&q| q == usize::MAX) else {
            self.examined += 1;
            self.check_leaf();
            return self.found.is_some() || self.examined >= self.budget;
        };
        for q in p + 1..self.partner.len() {
            if self.partner[q] != usize::MAX {
                continue;
            }
            self.partner[p] = q;
            self.partner[q] = p;
            let stop = self.recurse();
            self.partner[p] = usize::MAX;
            self.partner[q] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }

    fn check_leaf(&mut self) {
        let len = self.partner.len();
        let mut word = vec![usize::MAX; len];
        let mut next_id = 0;
        for p in 0..len {
            if word[p] == usize::MAX {
                word[p] = next_id;
                word[self.partner[p]] = next_id;
                next_id += 1;
            }
        }
        let n = next_id;
        let mut adj = vec![0u64; n];
        for p in 0..len {
            let q = self.partner[p];
            if q < p {
                continue;
            }
            for x in p + 1..q {
                let y = self.partner[x];
                if y < p || y > q {
                    adj[word[p]] |= 1 << word[x];
                    adj[word[x]] |= 1 << word[p];
                }
            }
        }
        let edges: u32 = adj.iter().map(|r| r.count_ones()).sum::<u32>() / 2;
        if edges as usize != self.target_edges {
            return;
        }
        let mut degrees: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
        degrees.sort_unstable();
        if degrees != self.target_degrees {
            return;
        }
        let plain = LabeledGraph::from_masks(vec![Sign::Plus; n], adj).expect("valid");
        let (key, order) = orbit::canonical_labeling(&plain, false);
        if key != self.target_key {
            return;
        }
        // canonical position i is chord order[i] here and vertex target_order[i] in the target
        let mut to_target = vec![0; n];
        for (i, &c) in order.iter().enumerate() {
            to_target[c] = self.target_order[i];
        }
        let relabeled = word.iter().map(|&c| to_target[c]).collect();
        let diagram = ChordDiagram::new(relabeled, self.target.labels().to_vec()).expect("valid");
        debug_assert_eq!(diagram.intersection_graph(), *self.target);
        self.found = Some(diagram);
    }
}

/// Exhaustive search for a chord diagram realizing `g` as its intersection
/// graph, examining at most `budget` matchings of the `2n` endpoints.
///
/// Position 0 is always the first endpoint of chord 1, which removes
/// rotations; reflections are not quotiented. Chord signs are copied from
/// `g`, so any unlabeled isomorphism gives a label-preserving witness.
pub fn realizability_search(
    g: &LabeledGraph,
    budget: Option<u64>,
    max_n: usize,
) -> Result<Realization> {
    let n = g.n();
    let limit = max_n.min(HARD_REALIZE_LIMIT);
    if n > limit {
        return Err(Error::ResourceLimit {
            what: "realizability search",
            size: n,
            limit,
        });
    }
    let plain = LabeledGraph::from_masks(vec![Sign::Plus; n], g.rows().to_vec())?;
    let (target_key, target_order) = orbit::canonical_labeling(&plain, false);
    let mut target_degrees: Vec<u32> = g.rows().iter().map(|r| r.count_ones()).collect();
    target_degrees.sort_unstable();
    let mut search = Search {
        target_edges: g.edge_count(),
        target_degrees,
        target_key,
        target_order: &target_order,
        target: g,
        budget: budget.unwrap_or(u64::MAX),
        examined: 0,
        partner: vec![usize::MAX; 2 * n],
        found: None,
    };
    if n == 0 {
        return Ok(Realization {
            witness: Some(ChordDiagram::empty()),
            exhausted: true,
            examined: 1,
        });
    }
    if search.budget > 0 {
        search.recurse();
    }
    let total = double_factorial(2 * n as u64 - 1);
    Ok(Realization {
        exhausted: search.found.is_some() || search.examined >= total,
        witness: search.found,
        examined: search.examined,
    })
}

/// `k!! = k (k − 2) (k − 4) ...`, the number of perfect matchings on `k + 1` points.
pub fn double_factorial(k: u64) -> u64 {
    (1..=k).rev().step_by(2).product::<u64>().max(1)
}
