//! Labeled graphs as Kauffman-style knot diagrams: Reidemeister graph-moves,
//! the bracket and Jones polynomials, minimality bounds, chord diagrams and
//! bounded orbit search.

pub mod checks;
pub mod chord;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod invariants;
pub mod laurent;
pub mod moves;
pub mod orbit;
pub mod sample;

pub use chord::{realizability_search, ChordDiagram, Realization};
pub use error::{Error, ErrorClass, Result};
pub use gf2::BitMatrix;
pub use graph::{LabeledGraph, Sign, State};
pub use invariants::{analyze, jones, kauffman_bracket, writhe, PropertyReport};
pub use laurent::LaurentPoly;
pub use moves::{MoveKind, MoveSite};
pub use orbit::{
    are_equivalent_bounded, bfs_orbit, canonical_form, CanonicalKey, Equivalence, OrbitBounds,
    OrbitReport,
};
