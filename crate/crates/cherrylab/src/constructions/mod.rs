//! Deterministic extremal families: colorings that defeat greedy embedding
//! arguments, radius-two trees with prescribed cherry counts, and dense
//! diameter-2 pattern graphs.

mod projective;

pub use projective::{field_table, polarity_graph, FieldTable, SUPPORTED_FIELD_ORDERS};

use thiserror::Error;

use crate::coloring::HostColoring;
use crate::graph::PatternGraph;

/// Errors produced by the construction routines.
#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no field table for order {0}; supported orders: 2, 3, 4, 5, 7, 8, 9, 11, 13")]
    UnsupportedFieldOrder(usize),
    #[error("construction self-check failed: {0}")]
    SelfCheckFailed(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConstructionError> {
    Err(ConstructionError::InvalidParameter(msg.into()))
}

// ---------------------------------------------------------------------------
// Block colorings
// ---------------------------------------------------------------------------

/// Colors `K_n` by an ordered partition into consecutive blocks: the color
/// of an edge is the unordered pair of block indices of its endpoints
/// (encoded as a dense 0-based rank, diagonal included).
fn block_pair_coloring(sizes: &[usize]) -> HostColoring {
    let n: usize = sizes.iter().sum();
    let t = sizes.len();
    let mut block_of = vec![0u32; n + 1];
    let mut v = 1usize;
    for (b, &s) in sizes.iter().enumerate() {
        for _ in 0..s {
            block_of[v] = b as u32;
            v += 1;
        }
    }
    // Rank of the multiset {i, j}, i <= j, among all such over t blocks:
    // sum of row lengths t, t-1, ..., t-i+1 plus the offset within row i.
    let rank = |i: u32, j: u32| -> u32 {
        let (i, j) = (i as usize, j as usize);
        (i * (2 * t - i + 1) / 2 + (j - i)) as u32
    };
    HostColoring::from_fn(n, |u, v| {
        let (a, b) = (block_of[u as usize], block_of[v as usize]);
        rank(a.min(b), a.max(b))
    })
    .expect("block sizes sum to a positive vertex count")
}

/// The parts-of-three coloring: vertices split into consecutive parts of
/// size 3, each edge colored by its unordered pair of part indices.
///
/// For `total_n >= 6` this is locally 3-bounded and globally 9-bounded, yet
/// admits no properly colored spanning tree of radius two: every vertex
/// pair inside a part closes a monochromatic cherry through every outside
/// vertex.
pub fn partition_coloring(total_n: usize) -> Result<HostColoring, ConstructionError> {
    if total_n < 3 || total_n % 3 != 0 {
        return invalid(format!("total_n must be a positive multiple of 3, got {total_n}"));
    }
    Ok(block_pair_coloring(&vec![3; total_n / 3]))
}

/// The near-equal-parts coloring with `ceil(ell / 3)` blocks (sizes
/// differing by at most one), edges colored by unordered block-index pairs.
///
/// Verifies the local bound `k_local <= ceil(3 n / ell)` before returning.
pub fn diam2_coloring(n: usize, ell: usize) -> Result<HostColoring, ConstructionError> {
    if ell < 3 {
        return invalid(format!("ell must be at least 3, got {ell}"));
    }
    if n < ell {
        return invalid(format!("n = {n} must be at least ell = {ell}"));
    }
    let parts = ell.div_ceil(3);
    let base = n / parts;
    let extra = n % parts;
    let sizes: Vec<usize> = (0..parts).map(|i| base + usize::from(i < extra)).collect();
    let c = block_pair_coloring(&sizes);
    let bound = (3 * n).div_ceil(ell);
    let actual = c.boundedness_report().k_local;
    if actual > bound {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "near-equal-parts coloring: k_local = {actual} exceeds claimed bound {bound}"
        )));
    }
    Ok(c)
}

/// The lexicographic block coloring on `n >= 4 ell` vertices.
///
/// Inside the block `X = {1, ..., 4 ell}` an edge is colored by its smaller
/// endpoint; an edge from `X` to the outside is colored by its outside
/// endpoint; edges entirely outside `X` get fresh unique colors
/// `n + 1, n + 2, ...` in lexicographic pair order. The result is globally
/// `4 ell`-bounded (verified before returning), and inside `X` every vertex
/// sees all its higher neighbors through one color — which caps how many
/// vertices of a rainbow copy can land in `X`.
pub fn lex_block_coloring(n: usize, ell: usize) -> Result<HostColoring, ConstructionError> {
    if ell < 1 {
        return invalid(format!("ell must be at least 1, got {ell}"));
    }
    if n < 4 * ell {
        return invalid(format!("n = {n} must be at least 4 ell = {}", 4 * ell));
    }
    let x_top = (4 * ell) as u32;
    let mut fresh = n as u32; // pre-increment yields n+1, n+2, ...
    let c = HostColoring::from_fn(n, |u, v| {
        // from_fn visits pairs in lexicographic order, so fresh ids follow
        // lexicographic order of the outside pairs.
        if u <= x_top && v <= x_top {
            u
        } else if u <= x_top {
            v
        } else {
            fresh += 1;
            fresh
        }
    })
    .expect("n >= 4");
    let actual = c.boundedness_report().k_global;
    if actual > 4 * ell {
        return Err(ConstructionError::SelfCheckFailed(format!(
            "lexicographic block coloring: k_global = {actual} exceeds claimed bound {}",
            4 * ell
        )));
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Radius-two trees
// ---------------------------------------------------------------------------

/// Which of the two radius-two tree families to build from the size
/// parameter `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Requires `m = t^3`: the center has `t^2` children, each child `t`
    /// leaf-children; `m + t^2 + 1` vertices and `t^4 + (t^3 - t^2)/2`
    /// cherries.
    Cube,
    /// Requires `m = s^2`: the center has `s` children, each child `s - 1`
    /// leaf-children; `m + 1` vertices and maximum degree `s`.
    Square,
}

/// Builds the requested radius-two tree. The center is vertex 1, its
/// children follow consecutively, then the leaves grouped by child.
pub fn build_tree(kind: TreeKind, m: u64) -> Result<PatternGraph, ConstructionError> {
    if m < 1 {
        return invalid("m must be positive");
    }
    let (num_children, leaves_per_child) = match kind {
        TreeKind::Cube => {
            let t = exact_root(m, 3)
                .ok_or_else(|| ConstructionError::InvalidParameter(format!("m = {m} is not a perfect cube")))?;
            (t * t, t)
        }
        TreeKind::Square => {
            let s = exact_root(m, 2)
                .ok_or_else(|| ConstructionError::InvalidParameter(format!("m = {m} is not a perfect square")))?;
            (s, s - 1)
        }
    };
    let n = 1 + num_children + num_children * leaves_per_child;
    let mut edges = Vec::with_capacity(n as usize - 1);
    for child in 0..num_children {
        edges.push((1u32, 2 + child as u32));
    }
    let mut next_leaf = 2 + num_children as u32;
    for child in 0..num_children {
        for _ in 0..leaves_per_child {
            edges.push((2 + child as u32, next_leaf));
            next_leaf += 1;
        }
    }
    PatternGraph::new(n as usize, edges).map_err(|e| ConstructionError::SelfCheckFailed(e.to_string()))
}

/// The exact `k`-th root of `m`, if `m` is a perfect `k`-th power.
fn exact_root(m: u64, k: u32) -> Option<u64> {
    let guess = (m as f64).powf(1.0 / k as f64).round() as u64;
    (guess.saturating_sub(2)..=guess + 2).find(|&t| t.checked_pow(k) == Some(m))
}

// ---------------------------------------------------------------------------
// Rook graphs
// ---------------------------------------------------------------------------

/// Disjoint union of `copies` rook graphs on an `m x m` board: two cells of
/// the same copy are adjacent when they share a row or a column.
///
/// Each copy is `(2m - 2)`-regular with diameter 2, and every vertex
/// neighborhood splits into two cliques (the row and the column), so its
/// independence number is at most 2. All three properties are verified on
/// the constructed graph before returning.
pub fn rook_union(m: usize, copies: usize) -> Result<PatternGraph, ConstructionError> {
    if m < 2 {
        return invalid(format!("board size m must be at least 2, got {m}"));
    }
    if copies < 1 {
        return invalid("at least one copy required");
    }
    let per = m * m;
    let n = per * copies;
    let label = |c: usize, i: usize, j: usize| (c * per + i * m + j + 1) as u32;
    let mut edges = Vec::new();
    for c in 0..copies {
        for i in 0..m {
            for j in 0..m {
                // Same row, larger column; same column, larger row.
                for j2 in (j + 1)..m {
                    edges.push((label(c, i, j), label(c, i, j2)));
                }
                for i2 in (i + 1)..m {
                    edges.push((label(c, i, j), label(c, i2, j)));
                }
            }
        }
    }
    let g = PatternGraph::new(n, edges).map_err(|e| ConstructionError::SelfCheckFailed(e.to_string()))?;

    let fail = |what: String| {
        Err(ConstructionError::SelfCheckFailed(format!("rook union m = {m}, copies = {copies}: {what}")))
    };
    for v in 1..=n as u32 {
        if g.degree(v) != 2 * m - 2 {
            return fail(format!("vertex {v} has degree {}", g.degree(v)));
        }
    }
    for c in 0..copies {
        // Diameter 2 per copy: non-adjacent cells differ in both
        // coordinates and meet at a corner cell.
        for a in 0..per {
            for b in (a + 1)..per {
                let (va, vb) = ((c * per + a + 1) as u32, (c * per + b + 1) as u32);
                if g.has_edge(va, vb) {
                    continue;
                }
                let (ia, ja) = (a / m, a % m);
                let (ib, jb) = (b / m, b % m);
                if ia == ib || ja == jb {
                    return fail("cells sharing a line are not adjacent".into());
                }
                let corner = label(c, ia, jb);
                if !(g.has_edge(va, corner) && g.has_edge(vb, corner)) {
                    return fail(format!("cells {va} and {vb} lack a common neighbor"));
                }
            }
        }
        // Neighborhood structure: the row and column of every cell are
        // cliques covering its whole neighborhood.
        for i in 0..m {
            for j in 0..m {
                let v = label(c, i, j);
                let row: Vec<u32> = (0..m).filter(|&j2| j2 != j).map(|j2| label(c, i, j2)).collect();
                let col: Vec<u32> = (0..m).filter(|&i2| i2 != i).map(|i2| label(c, i2, j)).collect();
                for list in [&row, &col] {
                    for x in 0..list.len() {
                        for y in (x + 1)..list.len() {
                            if !g.has_edge(list[x], list[y]) {
                                return fail(format!("row/column of {v} is not a clique"));
                            }
                        }
                    }
                }
                if g.degree(v) != row.len() + col.len() {
                    return fail(format!("neighborhood of {v} exceeds its row and column"));
                }
            }
        }
    }
    Ok(g)
}
