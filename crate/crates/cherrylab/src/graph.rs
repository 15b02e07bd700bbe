//! Undirected pattern graphs and their cherry statistics.
//!
//! A *cherry* is a path on three vertices (two edges sharing a middle
//! vertex). The central scalar of the whole crate is
//! `r = sum_v C(deg(v), 2)`, the number of cherries of a pattern; most
//! feasibility thresholds are phrased in terms of `r`.
//!
//! Vertices are dense 1-based labels `1..=n`. Graphs are immutable after
//! construction and all queries are pure, so shared references may be used
//! freely across threads.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors produced by graph construction, queries, and parsing.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex count must be at least 1")]
    EmptyGraph,
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(u32, u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A finite simple undirected graph with vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    n: usize,
    /// Edges normalized to `u < v`, sorted lexicographically.
    edges: Vec<(u32, u32)>,
    /// Sorted adjacency lists, indexed by vertex (entry 0 unused).
    adj: Vec<Vec<u32>>,
}

impl PatternGraph {
    /// Builds a graph from an edge list. Edges may come in any order and
    /// orientation; self-loops and duplicates are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut norm: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for x in [a, b] {
                if x < 1 || x as usize > n {
                    return Err(GraphError::VertexOutOfRange(x, n));
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &norm {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges: norm, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges normalized to `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.adj[v].len()).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Iterates over all vertices `1..=n`.
    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        1..=self.n as u32
    }

    /// Diameter of the graph, or `None` if it is disconnected (or has a
    /// single vertex, in which case the diameter is `Some(0)`).
    pub fn diameter(&self) -> Option<usize> {
        let mut worst = 0usize;
        let mut dist = vec![usize::MAX; self.n + 1];
        for src in 1..=self.n as u32 {
            dist[1..].fill(usize::MAX);
            dist[src as usize] = 0;
            let mut queue = std::collections::VecDeque::from([src]);
            let mut seen = 1usize;
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if dist[y as usize] == usize::MAX {
                        dist[y as usize] = dist[x as usize] + 1;
                        worst = worst.max(dist[y as usize]);
                        seen += 1;
                        queue.push_back(y);
                    }
                }
            }
            if seen != self.n {
                return None;
            }
        }
        Some(worst)
    }

    /// Does every vertex neighborhood have independence number at most 2,
    /// i.e. no vertex has three pairwise non-adjacent neighbors?
    pub fn neighborhood_independence_at_most_two(&self) -> bool {
        for v in 1..=self.n as u32 {
            let ns = self.neighbors(v);
            for i in 0..ns.len() {
                for j in (i + 1)..ns.len() {
                    if self.has_edge(ns[i], ns[j]) {
                        continue;
                    }
                    for k in (j + 1)..ns.len() {
                        if !self.has_edge(ns[i], ns[k]) && !self.has_edge(ns[j], ns[k]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Cherry statistics
// ---------------------------------------------------------------------------

/// Per-vertex cherry statistics of a pattern graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CherryStats {
    /// Total cherry count `r = sum_v C(deg(v), 2)`.
    pub r: u64,
    /// `per_vertex_middle[v]` counts cherries whose middle vertex is `v`
    /// (entry 0 unused).
    pub per_vertex_middle: Vec<u64>,
    /// `per_vertex_leaf[v]` counts cherries in which `v` is an endpoint
    /// (entry 0 unused).
    pub per_vertex_leaf: Vec<u64>,
}

/// Number of cherries (paths on three vertices) of `g`.
///
/// Computed as `sum_v C(deg(v), 2)` with a deterministic parallel sum; the
/// reduction is an integer addition, so the result is independent of worker
/// count and scheduling.
pub fn count_cherries(g: &PatternGraph) -> u64 {
    use rayon::prelude::*;
    (1..=g.vertex_count())
        .into_par_iter()
        .map(|v| {
            let d = g.adj[v].len() as u64;
            d * (d.saturating_sub(1)) / 2
        })
        .sum()
}

/// Full per-vertex cherry statistics.
pub fn cherry_stats(g: &PatternGraph) -> CherryStats {
    let n = g.vertex_count();
    let mut per_vertex_middle = vec![0u64; n + 1];
    let mut per_vertex_leaf = vec![0u64; n + 1];
    let mut r = 0u64;
    for (v, mid_slot) in per_vertex_middle.iter_mut().enumerate().skip(1) {
        let d = g.adj[v].len() as u64;
        let mid = d * d.saturating_sub(1) / 2;
        *mid_slot = mid;
        r += mid;
    }
    // v is a leaf of one cherry per (neighbor u, other edge at u).
    for v in 1..=n as u32 {
        per_vertex_leaf[v as usize] = leaf_cherry_count(g, v).unwrap();
    }
    CherryStats { r, per_vertex_middle, per_vertex_leaf }
}

/// Number of cherries having `u` as an endpoint:
/// `sum_{u' in N(u)} (deg(u') - 1)`.
pub fn leaf_cherry_count(g: &PatternGraph, u: u32) -> Result<u64, GraphError> {
    if u < 1 || u as usize > g.vertex_count() {
        return Err(GraphError::VertexOutOfRange(u, g.vertex_count()));
    }
    Ok(g.neighbors(u).iter().map(|&w| (g.degree(w) as u64) - 1).sum())
}

// ---------------------------------------------------------------------------
// Degree splits
// ---------------------------------------------------------------------------

/// A split of the vertices into the `ell` highest-degree vertices (the
/// *fixed side*, mapped deterministically by the embedder) and the rest
/// (the *random side*).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeOrder {
    /// All vertices sorted by descending degree, ties broken by ascending
    /// vertex id.
    order: Vec<u32>,
    ell: usize,
    /// Maximum degree among the random side (0 when that side is empty).
    delta_random: usize,
}

impl DegreeOrder {
    /// The fixed side: the `ell` highest-degree vertices, in order.
    pub fn fixed_side(&self) -> &[u32] {
        &self.order[..self.ell]
    }

    /// The random side: the remaining vertices, in order.
    pub fn random_side(&self) -> &[u32] {
        &self.order[self.ell..]
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Maximum degree over the random side.
    pub fn delta_random(&self) -> usize {
        self.delta_random
    }

    /// Self-check: with `d = delta_random`, the top `ell` vertices each have
    /// degree `>= d`, so the pattern contains at least `ell * C(d, 2)`
    /// cherries; hence `d (d - 1) * ell <= 2 r` must always hold. Returns
    /// the outcome of that exact integer comparison (vacuously true for
    /// `ell = 0`).
    pub fn random_side_degree_bound_holds(&self, r: u64) -> bool {
        let d = self.delta_random as u64;
        (d * d.saturating_sub(1)).saturating_mul(self.ell as u64) <= 2 * r
    }
}

/// Sorts the vertices by descending degree (ties by ascending id) and splits
/// off the top `ell` as the fixed side.
pub fn degree_order(g: &PatternGraph, ell: usize) -> Result<DegreeOrder, GraphError> {
    if ell > g.vertex_count() {
        return Err(GraphError::VertexOutOfRange(ell as u32, g.vertex_count()));
    }
    let mut order: Vec<u32> = (1..=g.vertex_count() as u32).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let delta_random = order[ell..].iter().map(|&v| g.degree(v)).max().unwrap_or(0);
    Ok(DegreeOrder { order, ell, delta_random })
}

// ---------------------------------------------------------------------------
// Extremal edge-count self-checks
// ---------------------------------------------------------------------------

/// Scope of an edge-count check: the whole graph or the edges incident to a
/// vertex subset.
#[derive(Debug, Clone, Copy)]
pub enum EdgeScope<'a> {
    /// All edges; checked against `max(n, sqrt(r * n))`.
    All,
    /// Edges with at least one endpoint in the subset `T`; checked against
    /// `max(4 |T|, 2 sqrt(r |T|))`.
    Incident(&'a [u32]),
}

/// Outcome of an extremal edge-count check. The square-root half of the
/// bound is kept in squared form so the verdict is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBoundReport {
    /// Edge count that was measured.
    pub actual: u64,
    /// Linear half of the bound (`n` or `4 |T|`).
    pub linear_bound: u64,
    /// Square of the root half of the bound (`r n` or `4 r |T|`).
    pub sqrt_bound_squared: u128,
    /// `actual <= max(linear_bound, sqrt(sqrt_bound_squared))`, decided by
    /// integer squaring.
    pub holds: bool,
}

impl EdgeBoundReport {
    /// Approximate numeric value of the bound, for display only.
    pub fn approx_bound(&self) -> f64 {
        (self.linear_bound as f64).max((self.sqrt_bound_squared as f64).sqrt())
    }
}

/// Checks the edge count of `g` (or of the edges meeting a subset) against
/// the cherry-based extremal bound. The bound is a theorem for simple
/// graphs, so `holds` is a self-check that must never come back `false`.
pub fn extremal_edge_check(g: &PatternGraph, scope: EdgeScope<'_>) -> Result<EdgeBoundReport, GraphError> {
    let r = count_cherries(g) as u128;
    let (actual, linear_bound, sqrt_bound_squared) = match scope {
        EdgeScope::All => {
            let n = g.vertex_count() as u64;
            (g.edge_count() as u64, n, r * n as u128)
        }
        EdgeScope::Incident(t) => {
            let mut in_t = vec![false; g.vertex_count() + 1];
            for &v in t {
                if v < 1 || v as usize > g.vertex_count() {
                    return Err(GraphError::VertexOutOfRange(v, g.vertex_count()));
                }
                in_t[v as usize] = true;
            }
            let t_size = in_t.iter().filter(|&&b| b).count() as u64;
            let touching = g
                .edges()
                .iter()
                .filter(|&&(u, v)| in_t[u as usize] || in_t[v as usize])
                .count() as u64;
            (touching, 4 * t_size, 4 * r * t_size as u128)
        }
    };
    let holds = actual <= linear_bound || (actual as u128) * (actual as u128) <= sqrt_bound_squared;
    Ok(EdgeBoundReport { actual, linear_bound, sqrt_bound_squared, holds })
}

// ---------------------------------------------------------------------------
// Seeded random generators
// ---------------------------------------------------------------------------

/// Seeded Erdős–Rényi-style graph: each of the `C(n, 2)` pairs becomes an
/// edge independently with probability `edge_percent / 100`. Deterministic
/// for a fixed seed.
pub fn random_graph(n: usize, edge_percent: u32, seed: u64) -> Result<PatternGraph, GraphError> {
    if edge_percent > 100 {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("edge percentage must be at most 100, got {edge_percent}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n as u32 {
        for v in (u + 1)..=n as u32 {
            if rng.random_range(0..100) < edge_percent {
                edges.push((u, v));
            }
        }
    }
    PatternGraph::new(n, edges)
}

/// Seeded random tree on `n` vertices with every degree capped at
/// `max_degree`: vertex `v` attaches to a uniformly chosen earlier vertex
/// whose degree is still below the cap. A vertex with spare capacity always
/// exists when `max_degree >= 2`. Deterministic for a fixed seed.
pub fn random_bounded_degree_tree(
    n: usize,
    max_degree: usize,
    seed: u64,
) -> Result<PatternGraph, GraphError> {
    if n >= 2 && max_degree < 2 {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("a tree on {n} vertices needs a degree cap of at least 2"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n + 1];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 2..=n as u32 {
        let candidates: Vec<u32> = (1..v).filter(|&u| deg[u as usize] < max_degree).collect();
        let u = candidates[rng.random_range(0..candidates.len())];
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        edges.push((u, v));
    }
    PatternGraph::new(n, edges)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl PatternGraph {
    /// Parses the line-based graph format:
    ///
    /// ```text
    /// p graph <n> <m>
    /// e <u> <v>        (m lines, 1-based, u < v)
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored. The parse is
    /// strict: the header must come first, every edge line must satisfy
    /// `u < v`, and the edge count must match the header.
    pub fn from_reader(reader: impl Read) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return parse_err(lineno, "duplicate header line");
                    }
                    if fields.len() != 4 || fields[1] != "graph" {
                        return parse_err(lineno, "expected `p graph <n> <m>`");
                    }
                    let n = parse_num(fields[2], lineno, "vertex count")?;
                    let m = parse_num(fields[3], lineno, "edge count")?;
                    header = Some((n, m));
                }
                "e" => {
                    if header.is_none() {
                        return parse_err(lineno, "edge line before header");
                    }
                    if fields.len() != 3 {
                        return parse_err(lineno, "expected `e <u> <v>`");
                    }
                    let u: u32 = parse_num(fields[1], lineno, "endpoint")? as u32;
                    let v: u32 = parse_num(fields[2], lineno, "endpoint")? as u32;
                    if u >= v {
                        return parse_err(lineno, &format!("edge endpoints must satisfy u < v, got {u} >= {v}"));
                    }
                    edges.push((u, v));
                }
                other => return parse_err(lineno, &format!("unknown record `{other}`")),
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 0, msg: "missing `p graph` header".into() })?;
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges but {} were listed", edges.len()),
            });
        }
        Self::new(n, edges)
    }

    /// Serializes in the canonical order (edges sorted, `u < v`). Parsing
    /// the output reproduces the graph byte-for-byte on re-serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p graph {} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

fn parse_err<T>(line: usize, msg: &str) -> Result<T, GraphError> {
    Err(GraphError::Parse { line, msg: msg.to_string() })
}

fn parse_num(s: &str, line: usize, what: &str) -> Result<usize, GraphError> {
    s.parse().map_err(|_| GraphError::Parse { line, msg: format!("invalid {what} `{s}`") })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> PatternGraph {
        PatternGraph::new(n, (1..n as u32).map(|i| (i, i + 1))).unwrap()
    }

    fn star(leaves: u32) -> PatternGraph {
        PatternGraph::new(leaves as usize + 1, (2..=leaves + 1).map(|v| (1, v))).unwrap()
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(matches!(PatternGraph::new(0, []), Err(GraphError::EmptyGraph)));
        assert!(matches!(PatternGraph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1))));
        assert!(matches!(PatternGraph::new(3, [(1, 4)]), Err(GraphError::VertexOutOfRange(4, 3))));
        assert!(matches!(
            PatternGraph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        ));
    }

    #[test]
    fn cherry_counts_for_named_graphs() {
        // A path on 3 vertices is a single cherry.
        assert_eq!(count_cherries(&path_graph(3)), 1);
        // The star K_{1,4}: C(4,2) = 6 cherries, all centered at the hub.
        assert_eq!(count_cherries(&star(4)), 6);
        // The triangle: every vertex is the middle of one cherry.
        let k3 = PatternGraph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(count_cherries(&k3), 3);
        // An empty graph has none.
        assert_eq!(count_cherries(&PatternGraph::new(5, []).unwrap()), 0);
    }

    #[test]
    fn leaf_cherry_counts() {
        let k3 = PatternGraph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
        for v in 1..=3 {
            assert_eq!(leaf_cherry_count(&k3, v).unwrap(), 2);
        }
        // Star: the hub ends no cherry, each leaf ends deg(hub) - 1 of them.
        let s = star(4);
        assert_eq!(leaf_cherry_count(&s, 1).unwrap(), 0);
        assert_eq!(leaf_cherry_count(&s, 2).unwrap(), 3);
        assert!(leaf_cherry_count(&s, 9).is_err());
    }

    #[test]
    fn stats_agree_with_scalar_queries() {
        let g = path_graph(6);
        let stats = cherry_stats(&g);
        assert_eq!(stats.r, count_cherries(&g));
        assert_eq!(stats.per_vertex_middle.iter().sum::<u64>(), stats.r);
        // Each cherry has two endpoints.
        assert_eq!(stats.per_vertex_leaf.iter().sum::<u64>(), 2 * stats.r);
    }

    #[test]
    fn degree_order_breaks_ties_by_ascending_id() {
        let g = path_graph(5); // degrees: 1,2,2,2,1
        let split = degree_order(&g, 2).unwrap();
        assert_eq!(split.fixed_side(), &[2, 3]);
        assert_eq!(split.random_side(), &[4, 1, 5]);
        assert_eq!(split.delta_random(), 2);
        assert!(split.random_side_degree_bound_holds(count_cherries(&g)));
        assert!(degree_order(&g, 6).is_err());
    }

    #[test]
    fn extremal_checks_on_star() {
        let s = star(4);
        let all = extremal_edge_check(&s, EdgeScope::All).unwrap();
        assert_eq!(all.actual, 4);
        assert!(all.holds);
        // T = {hub}: 4 incident edges, bound max(4, 2 sqrt(6)) with |T| = 1.
        let t = [1u32];
        let rep = extremal_edge_check(&s, EdgeScope::Incident(&t)).unwrap();
        assert_eq!(rep.actual, 4);
        assert_eq!(rep.linear_bound, 4);
        assert!(rep.holds);
    }

    #[test]
    fn diameter_and_neighborhood_independence() {
        assert_eq!(path_graph(4).diameter(), Some(3));
        assert_eq!(star(5).diameter(), Some(2));
        assert_eq!(PatternGraph::new(3, [(1, 2)]).unwrap().diameter(), None);
        assert_eq!(PatternGraph::new(1, []).unwrap().diameter(), Some(0));
        // A star center has an independent neighborhood of size >= 3.
        assert!(!star(3).neighborhood_independence_at_most_two());
        let k3 = PatternGraph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(k3.neighborhood_independence_at_most_two());
    }

    #[test]
    fn format_round_trip_is_canonical() {
        let g = PatternGraph::new(4, [(3, 4), (1, 3), (1, 2)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "p graph 4 3\ne 1 2\ne 1 3\ne 3 4\n");
        let back = PatternGraph::from_reader(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parser_rejects_bad_input() {
        let cases = [
            ("e 1 2\np graph 3 1\n", "edge line before header"),
            ("p graph 3 1\ne 2 1\n", "u < v"),
            ("p graph 3 2\ne 1 2\n", "header declares"),
            ("p graph 3 1\ne 1 2\ne 1 3\n", "header declares"),
            ("p graph 3 1\nq 1 2\n", "unknown record"),
            ("p graph 3 1\ne 1 5\n", "out of range"),
        ];
        for (text, needle) in cases {
            let err = PatternGraph::from_reader(text.as_bytes()).unwrap_err();
            let msg = err.to_string();
            assert!(msg.contains(needle), "`{msg}` should mention `{needle}`");
        }
    }
}
