//! Exhaustive search oracles: small-scale ground truth for the randomized
//! embedder and certified nonexistence results.
//!
//! Three backtracking searches, all budget-guarded so that an exhausted
//! budget is reported as *inconclusive* — never conflated with a certified
//! "none":
//!
//! * [`brute_force_embed`] — injective pattern-to-host maps in degeneracy
//!   order, pruning partial maps that already violate the copy mode;
//! * [`radius2_spanning_tree_search`] — properly colored spanning trees of
//!   radius at most two in the host, over all centers, child sets, and
//!   grandchild attachments;
//! * [`rainbow_block_check`] — certifies that no rainbow copy of a pattern
//!   puts more than `t` image vertices inside a given host block, or
//!   produces a counterexample embedding.

use std::collections::BTreeSet;

use crate::coloring::{check_copy, CopyMode, Embedding, HostColoring};
use crate::graph::PatternGraph;

use super::EmbedError;

/// Node-budget bookkeeping shared by the searches.
struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    /// Accounts one search node; false means the budget is exhausted.
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.cap
    }
}

/// Assignment order that keeps every vertex's already-assigned neighbor
/// count small: reverse order of iterated minimum-degree removal.
fn degeneracy_order(g: &PatternGraph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut removed = vec![false; n + 1];
    let mut deg: Vec<usize> = std::iter::once(0)
        .chain((1..=n as u32).map(|v| g.degree(v)))
        .collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (1..=n as u32)
            .filter(|&v| !removed[v as usize])
            .min_by_key(|&v| (deg[v as usize], v))
            .expect("vertices remain");
        removed[v as usize] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    }
    order.reverse();
    order
}

/// Outcome of an exhaustive embedding search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Embedding),
    /// The full space was exhausted: no copy exists.
    NoneCertified,
    /// The node budget ran out before exhaustion: no claim either way.
    Inconclusive,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Embedding> {
        match self {
            SearchOutcome::Found(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_none_certified(&self) -> bool {
        matches!(self, SearchOutcome::NoneCertified)
    }
}

/// An outcome together with the search effort spent reaching it.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

enum Walk {
    Found(Vec<u32>),
    Exhausted,
    OutOfBudget,
}

struct EmbedSearch<'a> {
    g: &'a PatternGraph,
    c: &'a HostColoring,
    rainbow: bool,
    order: Vec<u32>,
    /// Neighbors of `order[i]` that appear at positions `< i`.
    back: Vec<Vec<u32>>,
    img: Vec<u32>,
    used_host: Vec<bool>,
    /// Proper mode: colors already incident to each pattern vertex's image.
    used_at: Vec<Vec<u32>>,
    /// Rainbow mode: colors used anywhere in the partial copy.
    used_global: BTreeSet<u32>,
    budget: Budget,
}

impl<'a> EmbedSearch<'a> {
    fn new(g: &'a PatternGraph, c: &'a HostColoring, mode: CopyMode, cap: u64) -> Self {
        let order = degeneracy_order(g);
        let mut pos = vec![usize::MAX; g.vertex_count() + 1];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        let back: Vec<Vec<u32>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                g.neighbors(v).iter().copied().filter(|&w| pos[w as usize] < i).collect()
            })
            .collect();
        Self {
            g,
            c,
            rainbow: matches!(mode, CopyMode::Rainbow),
            order,
            back,
            img: vec![0; g.vertex_count() + 1],
            used_host: vec![false; c.n() + 1],
            used_at: vec![Vec::new(); g.vertex_count() + 1],
            used_global: BTreeSet::new(),
            budget: Budget::new(cap),
        }
    }

    /// Colors the candidate edge set would add; `None` when the partial map
    /// would already violate the mode.
    fn admissible_colors(&self, v: u32, host: u32, back: &[u32]) -> Option<Vec<u32>> {
        let mut new_cols = Vec::with_capacity(back.len());
        for &u in back {
            let col = self.c.color(host, self.img[u as usize]);
            if self.rainbow {
                if self.used_global.contains(&col) || new_cols.contains(&col) {
                    return None;
                }
            } else {
                // Two new edges share vertex v; a repeat among them is a
                // monochromatic cherry at v.
                if new_cols.contains(&col) || self.used_at[u as usize].contains(&col) {
                    return None;
                }
            }
            new_cols.push(col);
        }
        let _ = v;
        Some(new_cols)
    }

    fn walk(&mut self, depth: usize, in_x: usize, x_prune: Option<(&[bool], usize)>) -> Walk {
        if depth == self.order.len() {
            if let Some((_, need)) = x_prune {
                if in_x < need {
                    return Walk::Exhausted;
                }
            }
            let np = self.g.vertex_count();
            let map: Vec<u32> = (1..=np).map(|u| self.img[u]).collect();
            return Walk::Found(map);
        }
        // Even an all-in-block completion cannot reach the block quota.
        if let Some((_, need)) = x_prune {
            if in_x + (self.order.len() - depth) < need {
                return Walk::Exhausted;
            }
        }
        let v = self.order[depth];
        let back = std::mem::take(&mut self.back[depth]);
        for host in 1..=self.c.n() as u32 {
            if self.used_host[host as usize] {
                continue;
            }
            if !self.budget.tick() {
                self.back[depth] = back;
                return Walk::OutOfBudget;
            }
            let Some(new_cols) = self.admissible_colors(v, host, &back) else {
                continue;
            };
            // Commit.
            self.img[v as usize] = host;
            self.used_host[host as usize] = true;
            for (&u, &col) in back.iter().zip(&new_cols) {
                if self.rainbow {
                    self.used_global.insert(col);
                } else {
                    self.used_at[u as usize].push(col);
                    self.used_at[v as usize].push(col);
                }
            }
            let in_x_next = in_x
                + x_prune.map_or(0, |(mask, _)| usize::from(mask[host as usize]));
            let sub = self.walk(depth + 1, in_x_next, x_prune);
            // Undo.
            for (&u, &col) in back.iter().zip(&new_cols) {
                if self.rainbow {
                    self.used_global.remove(&col);
                } else {
                    self.used_at[u as usize].pop();
                    let at_v = &mut self.used_at[v as usize];
                    let idx = at_v.iter().rposition(|&x| x == col).expect("just pushed");
                    at_v.remove(idx);
                }
            }
            self.used_host[host as usize] = false;
            self.img[v as usize] = 0;
            match sub {
                Walk::Exhausted => {}
                other => {
                    self.back[depth] = back;
                    return other;
                }
            }
        }
        self.back[depth] = back;
        Walk::Exhausted
    }
}

/// Exhaustive backtracking search for a copy of `g` in `c` under `mode`.
///
/// Returns a verified embedding, a certified "none exists" after full
/// exhaustion, or an explicit inconclusive verdict when `node_budget`
/// search nodes did not suffice.
pub fn brute_force_embed(
    g: &PatternGraph,
    c: &HostColoring,
    mode: CopyMode,
    node_budget: u64,
) -> Result<SearchReport, EmbedError> {
    if g.vertex_count() > c.n() {
        return Err(EmbedError::PatternTooLarge { pattern: g.vertex_count(), host: c.n() });
    }
    let mut s = EmbedSearch::new(g, c, mode, node_budget);
    let outcome = match s.walk(0, 0, None) {
        Walk::Found(map) => {
            let embedding = Embedding::new(map, mode)?;
            let verdict = check_copy(c, g, &embedding)?;
            if !verdict.is_ok() {
                return Err(EmbedError::PostVerification(format!("{verdict:?}")));
            }
            SearchOutcome::Found(embedding)
        }
        Walk::Exhausted => SearchOutcome::NoneCertified,
        Walk::OutOfBudget => SearchOutcome::Inconclusive,
    };
    Ok(SearchReport { outcome, nodes: s.budget.used })
}

/// Outcome of the spanning-tree search.
#[derive(Debug, Clone)]
pub enum Radius2Outcome {
    /// A properly colored spanning tree of radius at most two, with its
    /// identity embedding into the host.
    Found { tree: PatternGraph, embedding: Embedding },
    NoneCertified,
    Inconclusive,
}

impl Radius2Outcome {
    pub fn is_none_certified(&self) -> bool {
        matches!(self, Radius2Outcome::NoneCertified)
    }
}

/// Outcome plus effort for the spanning-tree search.
#[derive(Debug, Clone)]
pub struct Radius2Report {
    pub outcome: Radius2Outcome,
    pub nodes: u64,
}

/// Attaches grandchildren to children, keeping every child's incident
/// colors distinct. Returns the attachment, or `None` on exhaustion;
/// `Err(())` signals budget exhaustion.
#[allow(clippy::result_unit_err)]
fn attach_grandchildren(
    c: &HostColoring,
    children: &[u32],
    grandchildren: &[u32],
    used_at: &mut Vec<Vec<u32>>,
    assignment: &mut Vec<u32>,
    budget: &mut Budget,
) -> Result<bool, ()> {
    let gi = assignment.len();
    if gi == grandchildren.len() {
        return Ok(true);
    }
    let g = grandchildren[gi];
    for (ci, &ch) in children.iter().enumerate() {
        if !budget.tick() {
            return Err(());
        }
        let col = c.color(ch, g);
        if used_at[ci].contains(&col) {
            continue;
        }
        used_at[ci].push(col);
        assignment.push(ch);
        if attach_grandchildren(c, children, grandchildren, used_at, assignment, budget)? {
            return Ok(true);
        }
        assignment.pop();
        used_at[ci].pop();
    }
    Ok(false)
}

/// Searches the host for a properly colored spanning tree of radius at most
/// two: a center, a nonempty child set seeing distinct colors from the
/// center, and an attachment of all remaining vertices to children that
/// keeps each child's incident colors distinct. Certifies nonexistence by
/// exhausting all centers and child sets.
pub fn radius2_spanning_tree_search(
    c: &HostColoring,
    node_budget: u64,
) -> Result<Radius2Report, EmbedError> {
    let n = c.n();
    if n < 2 {
        return Err(EmbedError::BadParameter(
            "spanning-tree search needs a host with at least 2 vertices".into(),
        ));
    }
    if n > u64::BITS as usize {
        return Ok(Radius2Report { outcome: Radius2Outcome::Inconclusive, nodes: 0 });
    }
    let mut budget = Budget::new(node_budget);
    for center in 1..=n as u32 {
        let others: Vec<u32> = (1..=n as u32).filter(|&v| v != center).collect();
        let m = others.len();
        for mask in 1u64..(1u64 << m) {
            if !budget.tick() {
                return Ok(Radius2Report {
                    outcome: Radius2Outcome::Inconclusive,
                    nodes: budget.used,
                });
            }
            let children: Vec<u32> =
                (0..m).filter(|&i| mask & (1 << i) != 0).map(|i| others[i]).collect();
            let mut center_cols: Vec<u32> =
                children.iter().map(|&ch| c.color(center, ch)).collect();
            center_cols.sort_unstable();
            if center_cols.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let grandchildren: Vec<u32> =
                (0..m).filter(|&i| mask & (1 << i) == 0).map(|i| others[i]).collect();
            let mut used_at: Vec<Vec<u32>> =
                children.iter().map(|&ch| vec![c.color(center, ch)]).collect();
            let mut assignment: Vec<u32> = Vec::with_capacity(grandchildren.len());
            match attach_grandchildren(
                c,
                &children,
                &grandchildren,
                &mut used_at,
                &mut assignment,
                &mut budget,
            ) {
                Err(()) => {
                    return Ok(Radius2Report {
                        outcome: Radius2Outcome::Inconclusive,
                        nodes: budget.used,
                    })
                }
                Ok(false) => continue,
                Ok(true) => {
                    let mut edges: Vec<(u32, u32)> =
                        children.iter().map(|&ch| (center, ch)).collect();
                    edges.extend(grandchildren.iter().zip(&assignment).map(|(&g, &ch)| (ch, g)));
                    let tree = PatternGraph::new(n, edges)?;
                    let embedding =
                        Embedding::new((1..=n as u32).collect(), CopyMode::Proper)?;
                    let verdict = check_copy(c, &tree, &embedding)?;
                    if !verdict.is_ok() {
                        return Err(EmbedError::PostVerification(format!("{verdict:?}")));
                    }
                    return Ok(Radius2Report {
                        outcome: Radius2Outcome::Found { tree, embedding },
                        nodes: budget.used,
                    });
                }
            }
        }
    }
    Ok(Radius2Report { outcome: Radius2Outcome::NoneCertified, nodes: budget.used })
}

/// Outcome of the block-quota rainbow search.
#[derive(Debug, Clone)]
pub enum BlockCheckOutcome {
    /// No rainbow copy of the pattern has more than `t` image vertices in
    /// the block.
    Certified,
    /// A rainbow copy exceeding the quota, as a verified embedding.
    Counterexample(Embedding),
    Inconclusive,
}

impl BlockCheckOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, BlockCheckOutcome::Certified)
    }
}

/// Outcome plus effort for the block-quota search.
#[derive(Debug, Clone)]
pub struct BlockCheckReport {
    pub outcome: BlockCheckOutcome,
    pub nodes: u64,
}

/// Certifies that every rainbow copy of `h` in `c` has at most `t` image
/// vertices inside the block `x`, or exhibits a counterexample. The search
/// prunes both on rainbow violations and on partial maps that can no
/// longer reach `t + 1` block vertices.
pub fn rainbow_block_check(
    c: &HostColoring,
    h: &PatternGraph,
    x: &[u32],
    t: usize,
    node_budget: u64,
) -> Result<BlockCheckReport, EmbedError> {
    let n = c.n();
    let mut in_block = vec![false; n + 1];
    for &v in x {
        if v < 1 || v as usize > n {
            return Err(EmbedError::BadParameter(format!(
                "block vertex {v} outside host 1..={n}"
            )));
        }
        in_block[v as usize] = true;
    }
    if h.vertex_count() > n {
        // No injection exists at all, so the quota claim holds vacuously.
        return Ok(BlockCheckReport { outcome: BlockCheckOutcome::Certified, nodes: 0 });
    }
    let mut s = EmbedSearch::new(h, c, CopyMode::Rainbow, node_budget);
    let outcome = match s.walk(0, 0, Some((&in_block, t + 1))) {
        Walk::Found(map) => {
            let embedding = Embedding::new(map, CopyMode::Rainbow)?;
            let verdict = check_copy(c, h, &embedding)?;
            if !verdict.is_ok() {
                return Err(EmbedError::PostVerification(format!("{verdict:?}")));
            }
            let inside =
                embedding.map.iter().filter(|&&v| in_block[v as usize]).count();
            if inside <= t {
                return Err(EmbedError::PostVerification(format!(
                    "search returned a copy with only {inside} block vertices"
                )));
            }
            BlockCheckOutcome::Counterexample(embedding)
        }
        Walk::Exhausted => BlockCheckOutcome::Certified,
        Walk::OutOfBudget => BlockCheckOutcome::Inconclusive,
    };
    Ok(BlockCheckReport { outcome, nodes: s.budget.used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{lex_block_coloring, partition_coloring};
    use crate::util::pair_rank;

    fn rainbow_host(n: usize) -> HostColoring {
        HostColoring::from_fn(n, |u, v| pair_rank(n, u, v) as u32 + 1).unwrap()
    }

    fn mono_host(n: usize) -> HostColoring {
        HostColoring::from_fn(n, |_, _| 1).unwrap()
    }

    fn path(n: usize) -> PatternGraph {
        PatternGraph::new(n, (1..n as u32).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle4() -> PatternGraph {
        PatternGraph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
    }

    #[test]
    fn degeneracy_order_star_has_unit_back_degree() {
        // A star has degeneracy 1: every vertex sees at most one neighbor
        // earlier in the order.
        let g = PatternGraph::new(5, [(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let order = degeneracy_order(&g);
        assert_eq!(order.len(), 5);
        let mut pos = [usize::MAX; 6];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        for (i, &v) in order.iter().enumerate() {
            let back =
                g.neighbors(v).iter().filter(|&&w| pos[w as usize] < i).count();
            assert!(back <= 1, "vertex {v} has back-degree {back}");
        }
    }

    #[test]
    fn brute_none_on_monochromatic_host() {
        let report =
            brute_force_embed(&path(3), &mono_host(5), CopyMode::Proper, 1_000_000).unwrap();
        assert!(report.outcome.is_none_certified());
    }

    #[test]
    fn brute_none_for_rainbow_cycle_in_lex_blocks() {
        // Every edge inside the block is colored by its smaller endpoint,
        // so the minimum image vertex of a cycle repeats its own color.
        let c = lex_block_coloring(8, 2).unwrap();
        let report = brute_force_embed(&cycle4(), &c, CopyMode::Rainbow, 10_000_000).unwrap();
        assert!(report.outcome.is_none_certified());
    }

    #[test]
    fn brute_finds_copies_in_rainbow_hosts() {
        let c = rainbow_host(6);
        for mode in [CopyMode::Proper, CopyMode::Rainbow] {
            let report = brute_force_embed(&path(4), &c, mode, 1_000_000).unwrap();
            let emb = report.outcome.found().expect("rainbow host embeds everything");
            assert!(check_copy(&c, &path(4), emb).unwrap().is_ok());
        }
    }

    #[test]
    fn brute_budget_exhaustion_is_inconclusive() {
        let report = brute_force_embed(&path(4), &mono_host(8), CopyMode::Proper, 2).unwrap();
        assert!(matches!(report.outcome, SearchOutcome::Inconclusive));
    }

    #[test]
    fn brute_rejects_oversized_pattern() {
        assert!(brute_force_embed(&path(6), &mono_host(5), CopyMode::Proper, 10).is_err());
    }

    #[test]
    fn radius2_none_on_three_part_blocks() {
        let c = partition_coloring(9).unwrap();
        let report = radius2_spanning_tree_search(&c, 100_000_000).unwrap();
        assert!(report.outcome.is_none_certified());
    }

    #[test]
    fn radius2_witness_on_rainbow_host() {
        let c = rainbow_host(9);
        let report = radius2_spanning_tree_search(&c, 1_000_000).unwrap();
        match report.outcome {
            Radius2Outcome::Found { tree, embedding } => {
                assert_eq!(tree.vertex_count(), 9);
                assert_eq!(tree.edge_count(), 8);
                assert!(tree.diameter().is_some(), "spanning tree must be connected");
                assert!(tree.diameter().unwrap() <= 4);
                assert!(check_copy(&c, &tree, &embedding).unwrap().is_ok());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn radius2_none_on_monochromatic_host() {
        let c = mono_host(9);
        let report = radius2_spanning_tree_search(&c, 10_000_000).unwrap();
        assert!(report.outcome.is_none_certified());
    }

    #[test]
    fn radius2_budget_exhaustion_is_inconclusive() {
        let c = partition_coloring(9).unwrap();
        let report = radius2_spanning_tree_search(&c, 5).unwrap();
        assert!(matches!(report.outcome, Radius2Outcome::Inconclusive));
    }

    #[test]
    fn block_check_certifies_lex_square() {
        // Block {1..4} of the single-block lexicographic coloring spans no
        // rainbow 4-cycle, so no copy can have all four vertices inside.
        let c = lex_block_coloring(16, 1).unwrap();
        let report =
            rainbow_block_check(&c, &cycle4(), &[1, 2, 3, 4], 3, 10_000_000).unwrap();
        assert!(report.outcome.is_certified());
    }

    #[test]
    fn block_check_finds_counterexample_on_rainbow_host() {
        let c = rainbow_host(8);
        let report =
            rainbow_block_check(&c, &cycle4(), &[1, 2, 3, 4], 3, 10_000_000).unwrap();
        match report.outcome {
            BlockCheckOutcome::Counterexample(emb) => {
                let inside = emb.map.iter().filter(|&&v| v <= 4).count();
                assert!(inside >= 4);
                assert!(check_copy(&c, &cycle4(), &emb).unwrap().is_ok());
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn block_check_quota_beyond_pattern_size_is_certified() {
        let c = rainbow_host(8);
        let report = rainbow_block_check(&c, &cycle4(), &[1, 2, 3, 4], 4, 1_000).unwrap();
        assert!(report.outcome.is_certified());
    }

    #[test]
    fn block_check_budget_exhaustion_is_inconclusive() {
        let c = rainbow_host(8);
        let report = rainbow_block_check(&c, &cycle4(), &[1, 2, 3, 4], 3, 1).unwrap();
        assert!(matches!(report.outcome, BlockCheckOutcome::Inconclusive));
    }
}
