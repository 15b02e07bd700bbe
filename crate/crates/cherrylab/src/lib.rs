//! Toolkit for studying properly colored and rainbow subgraph copies inside
//! edge-colored complete graphs.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`graph`] — patterns as plain undirected graphs, cherry (2-edge path)
//!   statistics, degree splits, and extremal edge-count self-checks.
//! * [`coloring`] — edge-colorings of the complete host graph `K_n`,
//!   boundedness reports, monochromatic-structure scans, and copy
//!   verification.
//! * [`constructions`] — deterministic extremal families: block colorings,
//!   lexicographic colorings, radius-two trees, polarity graphs of finite
//!   projective planes, and rook graphs.
//! * [`lll`] — exact rational budget arithmetic for the local-lemma style
//!   feasibility conditions, bad-event classification, and threshold
//!   formulas.
//! * [`embed`] — the randomized embedder (clique extraction plus resampled
//!   random bijections), brute-force oracles, and specialized searches.
//!
//! All randomized routines take explicit 64-bit seeds and are deterministic
//! for a fixed seed; all feasibility verdicts are computed in exact integer
//! or rational arithmetic, never floating point.

pub mod coloring;
pub mod constructions;
pub mod embed;
pub mod graph;
pub mod lll;
pub mod util;

pub use coloring::{BoundMode, CopyMode, Embedding, HostColoring};
pub use graph::PatternGraph;
