//! Shared generators for the integration suites.
//!
//! Each test binary compiles this module independently, so not every helper
//! is used by every binary.
#![allow(dead_code)]

use cherrylab::coloring::HostColoring;
use cherrylab::graph::PatternGraph;
use cherrylab::util::pair_rank;

/// Every pair gets its own color.
pub fn rainbow_host(n: usize) -> HostColoring {
    HostColoring::from_fn(n, |u, v| pair_rank(n, u, v) as u32 + 1).unwrap()
}

/// Every pair gets the same color.
#[allow(dead_code)]
pub fn mono_host(n: usize) -> HostColoring {
    HostColoring::from_fn(n, |_, _| 1).unwrap()
}

/// The path 1 - 2 - ... - n.
#[allow(dead_code)]
pub fn path(n: usize) -> PatternGraph {
    PatternGraph::new(n, (1..n as u32).map(|i| (i, i + 1))).unwrap()
}

/// Erdos-Renyi-style graph: each pair kept with probability `percent`/100.
pub fn random_graph(n: usize, percent: u32, seed: u64) -> PatternGraph {
    cherrylab::graph::random_graph(n, percent, seed).unwrap()
}

/// Random tree built by attaching each vertex to a uniformly chosen earlier
/// vertex whose degree is still below `max_deg`.
pub fn random_tree(n: usize, max_deg: usize, seed: u64) -> PatternGraph {
    cherrylab::graph::random_bounded_degree_tree(n, max_deg, seed).unwrap()
}
