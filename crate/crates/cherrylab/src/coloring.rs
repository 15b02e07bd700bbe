//! Edge-colorings of the complete host graph `K_n`.
//!
//! A [`HostColoring`] assigns a color id to every unordered pair of
//! `1..=n`. Colors are stored in a flat triangular array in lexicographic
//! pair order, so lookup is O(1) and memory is O(n^2) — comfortable for
//! hosts up to roughly twenty thousand vertices.
//!
//! Boundedness is measured two ways:
//! * *locally k-bounded* — at every vertex, each color appears on at most
//!   `k` incident edges;
//! * *globally k-bounded* — each color appears on at most `k` edges in
//!   total.
//!
//! A *proper* copy of a pattern is one whose adjacent edge images always
//! receive distinct colors; a *rainbow* copy additionally uses pairwise
//! distinct colors on all edge images. Local boundedness is the natural
//! hypothesis when hunting proper copies, global boundedness when hunting
//! rainbow ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::PatternGraph;
use crate::util::{pair_at_rank, pair_count, pair_rank};

/// Errors produced by coloring construction, queries, and parsing.
#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("host must have at least {min} vertices, got {got}")]
    HostTooSmall { min: usize, got: usize },
    #[error("color array length {got} does not match C({n}, 2) = {want}")]
    WrongLength { n: usize, got: usize, want: usize },
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, usize),
    #[error("bound level k must be at least 1")]
    InvalidBound,
    #[error("embedding map has {got} entries but the pattern has {want} vertices")]
    MapLengthMismatch { got: usize, want: usize },
    #[error("embedding map is not injective: host vertex {0} repeats")]
    NonInjective(u32),
    #[error("subset must be non-empty, sorted, distinct, and within 1..={0}")]
    BadSubset(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// What counts as a valid copy of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyMode {
    /// Adjacent pattern-edge images must receive distinct colors.
    Proper,
    /// All pattern-edge images must receive pairwise distinct colors.
    Rainbow,
}

impl CopyMode {
    /// The boundedness notion conventionally paired with this copy mode.
    pub fn bound_mode(self) -> BoundMode {
        match self {
            CopyMode::Proper => BoundMode::Local,
            CopyMode::Rainbow => BoundMode::Global,
        }
    }
}

impl std::fmt::Display for CopyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CopyMode::Proper => "proper",
            CopyMode::Rainbow => "rainbow",
        })
    }
}

/// Which boundedness measure a constraint refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Local,
    Global,
}

impl std::fmt::Display for BoundMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundMode::Local => "local",
            BoundMode::Global => "global",
        })
    }
}

// ---------------------------------------------------------------------------
// HostColoring
// ---------------------------------------------------------------------------

/// An edge-coloring of the complete graph on `1..=n`, immutable after
/// construction. Color ids are arbitrary `u32` values; they need not be
/// contiguous.
#[derive(Debug)]
pub struct HostColoring {
    n: usize,
    /// Triangular array in lexicographic pair order.
    colors: Vec<u32>,
    /// Lazily computed boundedness report.
    bounds: OnceLock<BoundednessReport>,
}

impl Clone for HostColoring {
    fn clone(&self) -> Self {
        Self { n: self.n, colors: self.colors.clone(), bounds: OnceLock::new() }
    }
}

impl PartialEq for HostColoring {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.colors == other.colors
    }
}
impl Eq for HostColoring {}

impl HostColoring {
    /// Wraps a flat triangular color array (lexicographic pair order).
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self, ColoringError> {
        if n < 1 {
            return Err(ColoringError::HostTooSmall { min: 1, got: n });
        }
        let want = pair_count(n);
        if colors.len() != want {
            return Err(ColoringError::WrongLength { n, got: colors.len(), want });
        }
        Ok(Self { n, colors, bounds: OnceLock::new() })
    }

    /// Builds a coloring by evaluating `f(u, v)` on every pair `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(u32, u32) -> u32) -> Result<Self, ColoringError> {
        if n < 1 {
            return Err(ColoringError::HostTooSmall { min: 1, got: n });
        }
        let mut colors = Vec::with_capacity(pair_count(n));
        for u in 1..=n as u32 {
            for v in (u + 1)..=n as u32 {
                colors.push(f(u, v));
            }
        }
        Ok(Self { n, colors, bounds: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_pairs(&self) -> usize {
        self.colors.len()
    }

    /// Color of the edge `{u, v}`; the order of the endpoints is irrelevant.
    #[inline]
    pub fn color(&self, u: u32, v: u32) -> u32 {
        debug_assert!(u != v);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[pair_rank(self.n, a, b)]
    }

    /// Largest color id in use (0 for a one-vertex host).
    pub fn max_color_id(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// The coloring induced on a subset of host vertices (sorted, distinct),
    /// relabeled to `1..=len`.
    pub fn induced(&self, verts: &[u32]) -> Result<HostColoring, ColoringError> {
        let ok = !verts.is_empty()
            && verts.windows(2).all(|w| w[0] < w[1])
            && verts.iter().all(|&v| v >= 1 && v as usize <= self.n);
        if !ok {
            return Err(ColoringError::BadSubset(self.n));
        }
        HostColoring::from_fn(verts.len(), |u, v| {
            self.color(verts[u as usize - 1], verts[v as usize - 1])
        })
    }

    /// Boundedness report, computed on first use and cached.
    pub fn boundedness_report(&self) -> &BoundednessReport {
        self.bounds.get_or_init(|| compute_boundedness(self))
    }
}

// ---------------------------------------------------------------------------
// Boundedness
// ---------------------------------------------------------------------------

/// How often each color is used, per vertex and in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundednessReport {
    /// Maximum, over vertices `v` and colors `c`, of the number of edges at
    /// `v` carrying `c`. 0 only for a one-vertex host.
    pub k_local: usize,
    /// Maximum, over colors, of the total number of edges carrying it.
    pub k_global: usize,
    /// Number of distinct colors in use.
    pub num_colors: usize,
    totals: ColorTotals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ColorTotals {
    /// Indexed directly by color id (palettes that are dense enough).
    Dense(Vec<u32>),
    /// Sparse palettes (huge ids) fall back to a map.
    Sparse(BTreeMap<u32, u32>),
}

impl BoundednessReport {
    /// Total number of edges carrying `color`.
    pub fn color_total(&self, color: u32) -> usize {
        match &self.totals {
            ColorTotals::Dense(v) => {
                v.get(color as usize).copied().unwrap_or(0) as usize
            }
            ColorTotals::Sparse(m) => m.get(&color).copied().unwrap_or(0) as usize,
        }
    }

    /// `(color, total)` for every color in use, ascending by color id.
    pub fn totals(&self) -> Vec<(u32, usize)> {
        match &self.totals {
            ColorTotals::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|&(_, &t)| t > 0)
                .map(|(c, &t)| (c as u32, t as usize))
                .collect(),
            ColorTotals::Sparse(m) => m.iter().map(|(&c, &t)| (c, t as usize)).collect(),
        }
    }

    /// Is the coloring k-bounded at `level` in the given mode?
    pub fn is_bounded(&self, mode: BoundMode, level: usize) -> bool {
        match mode {
            BoundMode::Local => self.k_local <= level,
            BoundMode::Global => self.k_global <= level,
        }
    }

    /// The measured bound for the given mode.
    pub fn level(&self, mode: BoundMode) -> usize {
        match mode {
            BoundMode::Local => self.k_local,
            BoundMode::Global => self.k_global,
        }
    }
}

fn compute_boundedness(c: &HostColoring) -> BoundednessReport {
    let n = c.n;
    // Global totals: index directly when the palette is dense enough,
    // otherwise fall back to a map (arbitrary user-supplied ids).
    let max_color = c.max_color_id() as usize;
    let dense = n >= 2 && max_color < 8 * c.colors.len() + 1024;
    let (totals, k_global, num_colors) = if dense {
        let mut t = vec![0u32; max_color + 1];
        for &col in &c.colors {
            t[col as usize] += 1;
        }
        let k_global = t.iter().copied().max().unwrap_or(0) as usize;
        let num_colors = t.iter().filter(|&&x| x > 0).count();
        (ColorTotals::Dense(t), k_global, num_colors)
    } else {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for &col in &c.colors {
            *m.entry(col).or_insert(0) += 1;
        }
        let k_global = m.values().copied().max().unwrap_or(0) as usize;
        let num_colors = m.len();
        (ColorTotals::Sparse(m), k_global, num_colors)
    };
    // Local bound: for each vertex, sort its incident colors and take the
    // longest run. One reusable buffer keeps memory at O(n).
    let mut k_local = 0usize;
    let mut buf: Vec<u32> = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..=n as u32 {
        buf.clear();
        for w in 1..=n as u32 {
            if w != v {
                buf.push(c.color(v, w));
            }
        }
        buf.sort_unstable();
        let mut run = 0usize;
        let mut prev = None;
        for &col in &buf {
            if Some(col) == prev {
                run += 1;
            } else {
                run = 1;
                prev = Some(col);
            }
            k_local = k_local.max(run);
        }
    }
    BoundednessReport { k_local, k_global, num_colors, totals }
}

// ---------------------------------------------------------------------------
// Monochromatic structures
// ---------------------------------------------------------------------------

/// Which monochromatic structures to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoKind {
    /// Vertex triples `(v1, v2, v3)`, `v1 < v3`, with
    /// `c(v1 v2) = c(v2 v3)` — the images that spoil proper copies. Each
    /// center-symmetric pair is reported once.
    Triples,
    /// Unordered pairs of disjoint equal-colored edges — the images that
    /// additionally spoil rainbow copies.
    DisjointPairs,
}

/// A capped enumeration of monochromatic structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoScan {
    pub items: MonoItems,
    /// True when the cap cut the enumeration short.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoItems {
    Triples(Vec<(u32, u32, u32)>),
    DisjointPairs(Vec<[(u32, u32); 2]>),
}

impl MonoItems {
    pub fn len(&self) -> usize {
        match self {
            MonoItems::Triples(v) => v.len(),
            MonoItems::DisjointPairs(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lazily enumerates monochromatic triples in order
/// (middle, endpoint, endpoint).
pub struct MonoTriples<'a> {
    c: &'a HostColoring,
    v2: u32,
    v1: u32,
    v3: u32,
}

impl<'a> Iterator for MonoTriples<'a> {
    type Item = (u32, u32, u32);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.c.n as u32;
        while self.v2 <= n {
            // Advance (v1, v3) with v1 < v3, both distinct from v2.
            while self.v1 < n {
                self.v3 += 1;
                if self.v3 > n {
                    self.v1 += 1;
                    self.v3 = self.v1; // next loop pass bumps it
                    continue;
                }
                let (v1, v2, v3) = (self.v1, self.v2, self.v3);
                if v1 == v2 || v3 == v2 {
                    continue;
                }
                if self.c.color(v1, v2) == self.c.color(v2, v3) {
                    return Some((v1, v2, v3));
                }
            }
            self.v2 += 1;
            self.v1 = 1;
            self.v3 = 1;
        }
        None
    }
}

/// Lazily enumerates unordered pairs of disjoint equal-colored edges,
/// grouped by ascending color id.
pub struct MonoDisjointPairs {
    /// Edge lists per color (ascending color, edges in lexicographic order).
    classes: Vec<Vec<(u32, u32)>>,
    class: usize,
    i: usize,
    j: usize,
}

impl Iterator for MonoDisjointPairs {
    type Item = [(u32, u32); 2];

    fn next(&mut self) -> Option<Self::Item> {
        while self.class < self.classes.len() {
            let edges = &self.classes[self.class];
            while self.i + 1 < edges.len() {
                self.j += 1;
                if self.j >= edges.len() {
                    self.i += 1;
                    self.j = self.i; // next bump sets j = i + 1
                    continue;
                }
                let (a, b) = (edges[self.i], edges[self.j]);
                if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                    return Some([a, b]);
                }
            }
            self.class += 1;
            self.i = 0;
            self.j = 0;
        }
        None
    }
}

impl HostColoring {
    /// Streaming enumeration of monochromatic triples; O(n^3) if driven to
    /// completion.
    pub fn mono_triples(&self) -> MonoTriples<'_> {
        MonoTriples { c: self, v2: 1, v1: 1, v3: 1 }
    }

    /// Streaming enumeration of monochromatic disjoint edge pairs.
    pub fn mono_disjoint_pairs(&self) -> MonoDisjointPairs {
        let mut groups: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
        for rank in 0..self.colors.len() {
            let (u, v) = pair_at_rank(self.n, rank);
            groups.entry(self.colors[rank]).or_default().push((u, v));
        }
        let classes = groups.into_values().filter(|v| v.len() >= 2).collect();
        MonoDisjointPairs { classes, class: 0, i: 0, j: 0 }
    }

    /// Counts all monochromatic triples and asserts the structural cap
    /// `count <= n (n - 1) k_local` (each reported triple stands for two
    /// oriented walks, and there are at most `n (n-1) k_local` of those).
    pub fn count_mono_triples(&self) -> u64 {
        let count = self.mono_triples().count() as u64;
        let n = self.n as u64;
        let cap = n * n.saturating_sub(1) * self.boundedness_report().k_local as u64;
        assert!(
            count <= cap,
            "monochromatic triple count {count} exceeds structural cap {cap}"
        );
        count
    }
}

/// Enumerates monochromatic structures with a cap. When more than `limit`
/// structures exist, the first `limit` are returned and `truncated` is set —
/// never a silent cut.
pub fn mono_structures(c: &HostColoring, kind: MonoKind, limit: usize) -> MonoScan {
    match kind {
        MonoKind::Triples => {
            let mut items: Vec<(u32, u32, u32)> = Vec::new();
            let mut truncated = false;
            for t in c.mono_triples() {
                if items.len() == limit {
                    truncated = true;
                    break;
                }
                items.push(t);
            }
            MonoScan { items: MonoItems::Triples(items), truncated }
        }
        MonoKind::DisjointPairs => {
            let mut items: Vec<[(u32, u32); 2]> = Vec::new();
            let mut truncated = false;
            for p in c.mono_disjoint_pairs() {
                if items.len() == limit {
                    truncated = true;
                    break;
                }
                items.push(p);
            }
            MonoScan { items: MonoItems::DisjointPairs(items), truncated }
        }
    }
}

/// Which host vertices a co-degree query ranges over.
#[derive(Debug, Clone, Copy)]
pub enum VertexScope<'a> {
    All,
    /// Restrict candidates to this subset (need not be sorted).
    Within(&'a [u32]),
}

/// Number of vertices `v2` (in scope, distinct from both endpoints) with
/// `c(v1 v2) = c(v2 v3)` — the monochromatic co-degree of the pair.
pub fn pair_codegree(
    c: &HostColoring,
    v1: u32,
    v3: u32,
    scope: VertexScope<'_>,
) -> Result<u64, ColoringError> {
    for x in [v1, v3] {
        if x < 1 || x as usize > c.n {
            return Err(ColoringError::VertexOutOfRange(x, c.n));
        }
    }
    let count = |v2: u32| v2 != v1 && v2 != v3 && c.color(v1, v2) == c.color(v2, v3);
    Ok(match scope {
        VertexScope::All => (1..=c.n as u32).filter(|&v2| count(v2)).count() as u64,
        VertexScope::Within(set) => {
            for &x in set {
                if x < 1 || x as usize > c.n {
                    return Err(ColoringError::VertexOutOfRange(x, c.n));
                }
            }
            set.iter().filter(|&&v2| count(v2)).count() as u64
        }
    })
}

// ---------------------------------------------------------------------------
// Embeddings and copy verification
// ---------------------------------------------------------------------------

/// An injective map from pattern vertices to host vertices, together with
/// the copy mode it is claimed to satisfy. `map[i]` is the host image of
/// pattern vertex `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<u32>,
    pub mode: CopyMode,
}

impl Embedding {
    /// Builds an embedding, rejecting repeated images.
    pub fn new(map: Vec<u32>, mode: CopyMode) -> Result<Self, ColoringError> {
        let mut sorted = map.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ColoringError::NonInjective(w[0]));
        }
        Ok(Self { map, mode })
    }

    /// Host image of pattern vertex `u` (1-based).
    #[inline]
    pub fn image_of(&self, u: u32) -> u32 {
        self.map[u as usize - 1]
    }
}

/// Verdict of a copy check: either the embedding realizes a valid copy, or
/// the first witness against it in a canonical scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopyVerdict {
    Ok,
    /// A pattern cherry whose two edge images share a color
    /// (`pattern = (end, middle, end)` with ends ascending).
    MonoCherry { pattern: (u32, u32, u32), host: (u32, u32, u32), color: u32 },
    /// Two disjoint pattern edges whose images share a color (rainbow mode
    /// only).
    EqualDisjointPair { pattern: [(u32, u32); 2], host: [(u32, u32); 2], color: u32 },
}

impl CopyVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, CopyVerdict::Ok)
    }
}

/// Checks whether `f` maps `g` onto a valid copy in `c` under `f.mode`.
///
/// Rainbow validity implies proper validity; the cherry scan runs first in
/// both modes, so a rainbow violation witness is only ever reported when no
/// monochromatic cherry image exists. The witness is the first violation in
/// a canonical deterministic order.
pub fn check_copy(
    c: &HostColoring,
    g: &PatternGraph,
    f: &Embedding,
) -> Result<CopyVerdict, ColoringError> {
    if f.map.len() != g.vertex_count() {
        return Err(ColoringError::MapLengthMismatch { got: f.map.len(), want: g.vertex_count() });
    }
    let mut seen = vec![false; c.n + 1];
    for &img in &f.map {
        if img < 1 || img as usize > c.n {
            return Err(ColoringError::VertexOutOfRange(img, c.n));
        }
        if seen[img as usize] {
            return Err(ColoringError::NonInjective(img));
        }
        seen[img as usize] = true;
    }
    // Cherry scan: middle ascending, then endpoint pair lexicographic.
    for mid in g.vertices() {
        let ns = g.neighbors(mid);
        for i in 0..ns.len() {
            for j in (i + 1)..ns.len() {
                let (a, b) = (ns[i], ns[j]);
                let (fa, fm, fb) = (f.image_of(a), f.image_of(mid), f.image_of(b));
                let col = c.color(fa, fm);
                if col == c.color(fm, fb) {
                    return Ok(CopyVerdict::MonoCherry {
                        pattern: (a, mid, b),
                        host: (fa, fm, fb),
                        color: col,
                    });
                }
            }
        }
    }
    if f.mode == CopyMode::Rainbow {
        let edges = g.edges();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (e1, e2) = (edges[i], edges[j]);
                if e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1 {
                    continue; // shared endpoint: covered by the cherry scan
                }
                let h1 = (f.image_of(e1.0), f.image_of(e1.1));
                let h2 = (f.image_of(e2.0), f.image_of(e2.1));
                let col = c.color(h1.0, h1.1);
                if col == c.color(h2.0, h2.1) {
                    return Ok(CopyVerdict::EqualDisjointPair {
                        pattern: [e1, e2],
                        host: [h1, h2],
                        color: col,
                    });
                }
            }
        }
    }
    Ok(CopyVerdict::Ok)
}

// ---------------------------------------------------------------------------
// Random bounded colorings
// ---------------------------------------------------------------------------

/// Generates a random coloring of `K_n` that is k-bounded in the requested
/// mode, deterministically for a fixed seed.
///
/// * Global mode shuffles all `C(n, 2)` pairs and hands out one color per
///   chunk of `k` pairs, so every color total is exactly `k` (the last chunk
///   may be smaller).
/// * Local mode starts from the canonical round-robin proper edge-coloring
///   of `K_n` (perfect matchings for even `n`, near-perfect for odd `n`),
///   shuffles the rounds, and merges them `k` at a time. Every vertex meets
///   each round at most once, so each merged color appears at most `k`
///   times per vertex.
pub fn random_bounded_coloring(
    n: usize,
    k: usize,
    mode: BoundMode,
    seed: u64,
) -> Result<HostColoring, ColoringError> {
    if n < 2 {
        return Err(ColoringError::HostTooSmall { min: 2, got: n });
    }
    if k < 1 {
        return Err(ColoringError::InvalidBound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coloring = match mode {
        BoundMode::Global => {
            let mut ranks: Vec<u32> = (0..pair_count(n) as u32).collect();
            ranks.shuffle(&mut rng);
            let mut colors = vec![0u32; pair_count(n)];
            for (pos, &rank) in ranks.iter().enumerate() {
                colors[rank as usize] = (pos / k) as u32;
            }
            HostColoring::new(n, colors)?
        }
        BoundMode::Local => {
            let rounds = round_robin_rounds(n);
            let mut order: Vec<usize> = (0..rounds.len()).collect();
            order.shuffle(&mut rng);
            let mut colors = vec![0u32; pair_count(n)];
            for (pos, &round_idx) in order.iter().enumerate() {
                let color = (pos / k) as u32;
                for &(u, v) in &rounds[round_idx] {
                    colors[pair_rank(n, u, v)] = color;
                }
            }
            HostColoring::new(n, colors)?
        }
    };
    debug_assert!(coloring.boundedness_report().is_bounded(mode, k));
    Ok(coloring)
}

/// The canonical round-robin 1-factorization of `K_n` (even `n`: `n - 1`
/// perfect matchings; odd `n`: `n` near-perfect matchings, one idle vertex
/// per round). Every pair appears in exactly one round.
fn round_robin_rounds(n: usize) -> Vec<Vec<(u32, u32)>> {
    let mut rounds = Vec::new();
    if n % 2 == 0 {
        // Circle on 1..=n-1, center n. Round t pairs the center with t+1 and
        // folds the circle around it.
        let m = n - 1;
        for t in 0..m {
            let mut round = vec![((t + 1) as u32, n as u32)];
            for i in 1..=(m - 1) / 2 {
                let a = ((t + i) % m + 1) as u32;
                let b = ((t + m - i) % m + 1) as u32;
                round.push((a.min(b), a.max(b)));
            }
            rounds.push(round);
        }
    } else {
        // Circle on 1..=n; in round t the vertex t+1 idles.
        for t in 0..n {
            let mut round = Vec::new();
            for i in 1..=(n - 1) / 2 {
                let a = ((t + i) % n + 1) as u32;
                let b = ((t + n - i) % n + 1) as u32;
                round.push((a.min(b), a.max(b)));
            }
            rounds.push(round);
        }
    }
    rounds
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl HostColoring {
    /// Parses the line-based coloring format:
    ///
    /// ```text
    /// p ecoloring <n> <num_colors>
    /// c <u> <v> <color>       (one line per pair, u < v, every pair once)
    /// ```
    ///
    /// The parse is strict: every unordered pair of `1..=n` must appear
    /// exactly once and the declared distinct-color count must match.
    pub fn from_reader(reader: impl Read) -> Result<Self, ColoringError> {
        let mut header: Option<(usize, usize)> = None;
        let mut colors: Vec<Option<u32>> = Vec::new();
        let mut n = 0usize;
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
                        return cparse_err(lineno, "duplicate header line");
                    }
                    if fields.len() != 4 || fields[1] != "ecoloring" {
                        return cparse_err(lineno, "expected `p ecoloring <n> <num_colors>`");
                    }
                    let hn: usize = cparse_num(fields[2], lineno, "vertex count")?;
                    let nc: usize = cparse_num(fields[3], lineno, "color count")?;
                    if hn < 1 {
                        return cparse_err(lineno, "vertex count must be at least 1");
                    }
                    n = hn;
                    colors = vec![None; pair_count(n)];
                    header = Some((hn, nc));
                }
                "c" => {
                    if header.is_none() {
                        return cparse_err(lineno, "color line before header");
                    }
                    if fields.len() != 4 {
                        return cparse_err(lineno, "expected `c <u> <v> <color>`");
                    }
                    let u: u32 = cparse_num(fields[1], lineno, "endpoint")? as u32;
                    let v: u32 = cparse_num(fields[2], lineno, "endpoint")? as u32;
                    let col: u32 = cparse_num(fields[3], lineno, "color")? as u32;
                    if u >= v {
                        return cparse_err(lineno, &format!("pair must satisfy u < v, got {u} >= {v}"));
                    }
                    if v as usize > n {
                        return cparse_err(lineno, &format!("vertex {v} out of range 1..={n}"));
                    }
                    let rank = pair_rank(n, u, v);
                    if colors[rank].is_some() {
                        return cparse_err(lineno, &format!("pair {{{u}, {v}}} listed twice"));
                    }
                    colors[rank] = Some(col);
                }
                other => return cparse_err(lineno, &format!("unknown record `{other}`")),
            }
        }
        let (_, declared_colors) =
            header.ok_or(ColoringError::Parse { line: 0, msg: "missing `p ecoloring` header".into() })?;
        let mut flat = Vec::with_capacity(colors.len());
        for (rank, slot) in colors.iter().enumerate() {
            match slot {
                Some(c) => flat.push(*c),
                None => {
                    let (u, v) = pair_at_rank(n, rank);
                    return Err(ColoringError::Parse {
                        line: 0,
                        msg: format!("pair {{{u}, {v}}} missing — the coloring must be total"),
                    });
                }
            }
        }
        let coloring = HostColoring::new(n, flat)?;
        let distinct = coloring.boundedness_report().num_colors;
        if distinct != declared_colors {
            return Err(ColoringError::Parse {
                line: 0,
                msg: format!("header declares {declared_colors} colors but {distinct} are used"),
            });
        }
        Ok(coloring)
    }

    /// Serializes in canonical order (pairs lexicographic). Re-parsing and
    /// re-serializing reproduces the bytes exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let distinct = self.boundedness_report().num_colors;
        let _ = writeln!(out, "p ecoloring {} {}", self.n, distinct);
        for rank in 0..self.colors.len() {
            let (u, v) = pair_at_rank(self.n, rank);
            let _ = writeln!(out, "c {u} {v} {}", self.colors[rank]);
        }
        out
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ColoringError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<(), ColoringError> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

fn cparse_err<T>(line: usize, msg: &str) -> Result<T, ColoringError> {
    Err(ColoringError::Parse { line, msg: msg.to_string() })
}

fn cparse_num(s: &str, line: usize, what: &str) -> Result<usize, ColoringError> {
    s.parse().map_err(|_| ColoringError::Parse { line, msg: format!("invalid {what} `{s}`") })
}
