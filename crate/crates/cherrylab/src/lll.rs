//! Exact feasibility arithmetic for the resampling embedder.
//!
//! The embedder maps a pattern into a colored host by fixing the `ell`
//! highest-degree pattern vertices onto a pre-cleaned host clique (the
//! *fixed side*) and assigning the rest by a uniform random bijection (the
//! *random side*). A copy attempt fails only at one of finitely many *bad
//! events*:
//!
//! * a pattern cherry whose two edge images share a color, or
//! * (rainbow mode) two disjoint pattern edges whose images share a color.
//!
//! Each event is classified by which of its pattern vertices sit on the
//! random side — classes [`EventClass::B1`] through [`EventClass::B10`] —
//! and has probability `1 / (n - ell) * ... * (n - ell - d + 1)` where `d`
//! counts its random-side vertices. Feasibility is decided by budget sums
//! with per-class coefficients; everything here is exact rational
//! arithmetic (`BigRational`), so verdicts like "the budget at the design
//! constant is below 1/4" are proofs, not approximations.
//!
//! The threshold formulas translate the same budgets into the largest
//! boundedness level `k` for which the embedding argument applies at a
//! given host size.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::CopyMode;
use crate::util::floor_ratio_three_quarter_root;

/// Errors from classification, probability, and budget computations.
#[derive(Debug, Error)]
pub enum LllError {
    #[error("cherry tuple must satisfy u1 < u3 and pairwise distinctness")]
    MalformedCherry,
    #[error("edge-pair tuple must satisfy u1 < u2, u3 < u4, u1 < u3, all distinct")]
    MalformedPair,
    #[error(
        "membership pattern is inconsistent with the degree split: the fixed side \
         is a prefix of the vertex order, so {0}"
    )]
    InvalidMembership(String),
    #[error("budget constant must exceed 6, got {0}")]
    ConstantTooSmall(u64),
    #[error("random side has {have} vertices but the event needs {need}")]
    RandomSideTooSmall { have: usize, need: usize },
    #[error("threshold query: {0}")]
    BadQuery(String),
}

/// Which side of the degree split a pattern vertex is mapped by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// One of the `ell` highest-degree vertices, mapped deterministically.
    Fixed,
    /// Mapped by the uniform random bijection.
    Random,
}

/// The vertex tuple of a bad event.
///
/// Cherries are `(u1, u2, u3)` with middle `u2` and `u1 < u3`. Disjoint
/// edge pairs are `(u1, u2, u3, u4)` for edges `{u1, u2}`, `{u3, u4}` with
/// `u1 < u2`, `u3 < u4`, `u1 < u3` — so `u1` is the smallest of the four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTuple {
    Cherry(u32, u32, u32),
    DisjointPair(u32, u32, u32, u32),
}

impl PatternTuple {
    /// Builds a cherry tuple, normalizing the endpoint order.
    pub fn cherry(end_a: u32, middle: u32, end_b: u32) -> Result<Self, LllError> {
        if end_a == end_b || end_a == middle || end_b == middle {
            return Err(LllError::MalformedCherry);
        }
        Ok(PatternTuple::Cherry(end_a.min(end_b), middle, end_a.max(end_b)))
    }

    /// Builds a disjoint-pair tuple, normalizing edge and pair order.
    pub fn disjoint_pair(e1: (u32, u32), e2: (u32, u32)) -> Result<Self, LllError> {
        let a = (e1.0.min(e1.1), e1.0.max(e1.1));
        let b = (e2.0.min(e2.1), e2.0.max(e2.1));
        let (first, second) = if a.0 < b.0 { (a, b) } else { (b, a) };
        let t = PatternTuple::DisjointPair(first.0, first.1, second.0, second.1);
        let vs = t.vertices();
        for i in 0..4 {
            for j in (i + 1)..4 {
                if vs[i] == vs[j] {
                    return Err(LllError::MalformedPair);
                }
            }
        }
        Ok(t)
    }

    /// The tuple's vertices in canonical order.
    pub fn vertices(&self) -> Vec<u32> {
        match *self {
            PatternTuple::Cherry(a, b, c) => vec![a, b, c],
            PatternTuple::DisjointPair(a, b, c, d) => vec![a, b, c, d],
        }
    }

    pub fn is_cherry(&self) -> bool {
        matches!(self, PatternTuple::Cherry(..))
    }
}

/// Bad-event classes, keyed by tuple shape and random-side membership.
///
/// Cherries `(u1, u2, u3)`:
/// * `B1` — all three on the random side;
/// * `B2` — `u1` fixed, `u2, u3` random;
/// * `B3` — `u2` fixed, `u1, u3` random;
/// * `B4` — `u1, u2` fixed, `u3` random;
/// * `B5` — `u1, u3` fixed, `u2` random.
///
/// Disjoint pairs `(u1, u2, u3, u4)`:
/// * `B6` — all four random;
/// * `B7` — `u1` fixed, rest random;
/// * `B8` — `u1, u2` fixed, `u3, u4` random;
/// * `B9` — `u1, u3` fixed, `u2, u4` random;
/// * `B10` — `u1, u3` fixed plus exactly one of `u2, u4` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventClass {
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    B8,
    B9,
    B10,
}

impl EventClass {
    pub const ALL: [EventClass; 10] = [
        EventClass::B1,
        EventClass::B2,
        EventClass::B3,
        EventClass::B4,
        EventClass::B5,
        EventClass::B6,
        EventClass::B7,
        EventClass::B8,
        EventClass::B9,
        EventClass::B10,
    ];

    /// Classes arising from cherry events.
    pub fn is_cherry_class(self) -> bool {
        matches!(self, EventClass::B1 | EventClass::B2 | EventClass::B3 | EventClass::B4 | EventClass::B5)
    }

    /// Number of random-side vertices in an event of this class — the
    /// falling-factorial depth of its probability.
    pub fn random_arity(self) -> usize {
        match self {
            EventClass::B1 => 3,
            EventClass::B2 | EventClass::B3 => 2,
            EventClass::B4 | EventClass::B5 => 1,
            EventClass::B6 => 4,
            EventClass::B7 => 3,
            EventClass::B8 | EventClass::B9 => 2,
            EventClass::B10 => 1,
        }
    }
}

impl std::fmt::Display for EventClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Outcome of classifying a tuple against a membership pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// A genuine bad-event class.
    Class(EventClass),
    /// Every vertex is on the fixed side: the event is resolved up front by
    /// the deterministic map and never enters the resampling budget.
    FixedResolved,
}

/// Classifies a cherry by the sides of `(u1, u2, u3)`.
///
/// The fixed side is a prefix of the degree order relabeling, so `u1 < u3`
/// forces: if `u3` is fixed then so is `u1`. Patterns violating that are
/// rejected.
pub fn classify_cherry(sides: [Side; 3]) -> Result<Classification, LllError> {
    use Side::{Fixed, Random};
    match sides {
        [Random, Random, Random] => Ok(Classification::Class(EventClass::B1)),
        [Fixed, Random, Random] => Ok(Classification::Class(EventClass::B2)),
        [Random, Fixed, Random] => Ok(Classification::Class(EventClass::B3)),
        [Fixed, Fixed, Random] => Ok(Classification::Class(EventClass::B4)),
        [Fixed, Random, Fixed] => Ok(Classification::Class(EventClass::B5)),
        [Fixed, Fixed, Fixed] => Ok(Classification::FixedResolved),
        [Random, _, Fixed] => Err(LllError::InvalidMembership(
            "a fixed u3 requires a fixed u1 (u1 < u3)".into(),
        )),
    }
}

/// Classifies a disjoint edge pair by the sides of `(u1, u2, u3, u4)`.
///
/// `u1` is the smallest vertex of the event and `u3 < u4`, so a fixed
/// vertex anywhere forces `u1` fixed, and a fixed `u4` forces `u3` fixed.
pub fn classify_pair(sides: [Side; 4]) -> Result<Classification, LllError> {
    use Side::{Fixed, Random};
    if sides[0] == Random && sides[1..].contains(&Fixed) {
        return Err(LllError::InvalidMembership(
            "a fixed vertex anywhere requires a fixed u1 (the smallest)".into(),
        ));
    }
    if sides[3] == Fixed && sides[2] == Random {
        return Err(LllError::InvalidMembership("a fixed u4 requires a fixed u3 (u3 < u4)".into()));
    }
    Ok(match sides {
        [Random, Random, Random, Random] => Classification::Class(EventClass::B6),
        [Fixed, Random, Random, Random] => Classification::Class(EventClass::B7),
        [Fixed, Fixed, Random, Random] => Classification::Class(EventClass::B8),
        [Fixed, Random, Fixed, Random] => Classification::Class(EventClass::B9),
        [Fixed, Random, Fixed, Fixed] | [Fixed, Fixed, Fixed, Random] => {
            Classification::Class(EventClass::B10)
        }
        [Fixed, Fixed, Fixed, Fixed] => Classification::FixedResolved,
        // The guards above exhaust the remaining patterns.
        _ => unreachable!("invalid membership patterns rejected above"),
    })
}

/// Classifies a tuple given a side oracle (typically "is the vertex among
/// the `ell` highest-degree ones").
pub fn classify_bad_event(
    tuple: &PatternTuple,
    side_of: impl Fn(u32) -> Side,
) -> Result<Classification, LllError> {
    match *tuple {
        PatternTuple::Cherry(a, b, c) => classify_cherry([side_of(a), side_of(b), side_of(c)]),
        PatternTuple::DisjointPair(a, b, c, d) => {
            classify_pair([side_of(a), side_of(b), side_of(c), side_of(d)])
        }
    }
}

/// Order-free cherry classification: the class is determined by the side of
/// the middle vertex and the number of fixed endpoints, independent of how
/// the endpoints are labeled. Total — never rejects.
pub fn classify_cherry_sides(middle: Side, fixed_endpoints: usize) -> Classification {
    debug_assert!(fixed_endpoints <= 2);
    match (middle, fixed_endpoints) {
        (Side::Random, 0) => Classification::Class(EventClass::B1),
        (Side::Random, 1) => Classification::Class(EventClass::B2),
        (Side::Fixed, 0) => Classification::Class(EventClass::B3),
        (Side::Fixed, 1) => Classification::Class(EventClass::B4),
        (Side::Random, _) => Classification::Class(EventClass::B5),
        (Side::Fixed, _) => Classification::FixedResolved,
    }
}

/// Order-free pair classification: the class is determined by how many
/// vertices of each edge are fixed, independent of edge or endpoint
/// labeling. Total — never rejects.
pub fn classify_pair_sides(fixed_per_edge: [usize; 2]) -> Classification {
    debug_assert!(fixed_per_edge.iter().all(|&f| f <= 2));
    let (hi, lo) = (
        fixed_per_edge[0].max(fixed_per_edge[1]),
        fixed_per_edge[0].min(fixed_per_edge[1]),
    );
    match (hi, lo) {
        (0, 0) => Classification::Class(EventClass::B6),
        (1, 0) => Classification::Class(EventClass::B7),
        (2, 0) => Classification::Class(EventClass::B8),
        (1, 1) => Classification::Class(EventClass::B9),
        (2, 1) => Classification::Class(EventClass::B10),
        _ => Classification::FixedResolved,
    }
}

/// Classifies a tuple by side counts alone, without assuming the vertex
/// labels follow the degree order. Agrees with [`classify_bad_event`] on
/// every membership pattern that the ordered form accepts.
pub fn classify_bad_event_unordered(
    tuple: &PatternTuple,
    side_of: impl Fn(u32) -> Side,
) -> Classification {
    let fixed = |v: u32| usize::from(side_of(v) == Side::Fixed);
    match *tuple {
        PatternTuple::Cherry(a, b, c) => classify_cherry_sides(side_of(b), fixed(a) + fixed(c)),
        PatternTuple::DisjointPair(a, b, c, d) => {
            classify_pair_sides([fixed(a) + fixed(b), fixed(c) + fixed(d)])
        }
    }
}

/// A concrete bad event: a pattern tuple, its host images (same order), and
/// its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadEvent {
    pub pattern: PatternTuple,
    pub host: Vec<u32>,
    pub class: EventClass,
}

impl BadEvent {
    /// Builds an event, validating tuple/host arity and classifying by side
    /// counts (the tuple's vertex labels need not follow the degree order).
    pub fn new(
        pattern: PatternTuple,
        host: Vec<u32>,
        side_of: impl Fn(u32) -> Side,
    ) -> Result<Self, LllError> {
        let arity = pattern.vertices().len();
        if host.len() != arity {
            return Err(LllError::InvalidMembership(format!(
                "host tuple has {} entries for a {arity}-vertex event",
                host.len()
            )));
        }
        match classify_bad_event_unordered(&pattern, side_of) {
            Classification::Class(class) => Ok(Self { pattern, host, class }),
            Classification::FixedResolved => Err(LllError::InvalidMembership(
                "an all-fixed tuple is not a resamplable event".into(),
            )),
        }
    }
}

/// Probability of a canonical bad event under a uniform random bijection
/// from a random side of size `n - ell`: the reciprocal falling factorial
/// `1 / ((n-ell)(n-ell-1)...(n-ell-d+1))` with `d = class.random_arity()`.
pub fn event_probability(class: EventClass, n: usize, ell: usize) -> Result<BigRational, LllError> {
    let d = class.random_arity();
    let have = n.saturating_sub(ell);
    if have < d {
        return Err(LllError::RandomSideTooSmall { have, need: d });
    }
    let mut denom = BigInt::one();
    for i in 0..d {
        denom *= BigInt::from(have - i);
    }
    Ok(BigRational::new(BigInt::one(), denom))
}

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

/// Denominator shapes of the per-class budget coefficients.
#[derive(Debug, Clone, Copy)]
enum Denom {
    /// `2 C - 4`
    TwoCMinus4,
    /// `C - k`
    CMinus(u64),
}

impl Denom {
    fn eval(self, c: u64) -> BigInt {
        match self {
            Denom::TwoCMinus4 => BigInt::from(2 * c - 4),
            Denom::CMinus(k) => BigInt::from(c - k),
        }
    }
}

/// Per-class coefficient caps for the two neighborhood orientations of the
/// budget sum (events hanging off either endpoint of a shared host pair).
/// Each entry is `(numerator, denominator shape)`.
fn class_coefficients(class: EventClass) -> [(u64, Denom); 2] {
    use Denom::{CMinus, TwoCMinus4};
    match class {
        EventClass::B1 => [(3, TwoCMinus4), (1, CMinus(1))],
        EventClass::B2 => [(8, CMinus(2)), (4, CMinus(1))],
        EventClass::B3 => [(3, CMinus(2)), (1, CMinus(1))],
        EventClass::B4 => [(4, CMinus(1)), (3, CMinus(1))],
        EventClass::B5 => [(10, CMinus(1)), (3, CMinus(1))],
        EventClass::B6 => [(4, CMinus(5)), (4, CMinus(6))],
        EventClass::B7 => [(5, CMinus(4)), (5, CMinus(3))],
        EventClass::B8 => [(1, CMinus(1)), (4, CMinus(3))],
        EventClass::B9 => [(3, CMinus(2)), (1, CMinus(1))],
        EventClass::B10 => [(4, CMinus(1)), (8, CMinus(1))],
    }
}

/// How many host-pair intersection patterns a single event tuple admits:
/// each event blocks one host pair per random-side coordinate pattern — 3
/// when only cherries are in play, 4 once disjoint pairs join in rainbow
/// mode. Stored per mode as event metadata rather than folded into the
/// coefficient table.
pub fn intersection_multiplier(mode: CopyMode) -> u64 {
    match mode {
        CopyMode::Proper => 3,
        CopyMode::Rainbow => 4,
    }
}

/// Which classes participate in a mode's budget.
pub fn classes_for_mode(mode: CopyMode) -> &'static [EventClass] {
    match mode {
        CopyMode::Proper => &EventClass::ALL[..5],
        CopyMode::Rainbow => &EventClass::ALL[..],
    }
}

/// The per-class budget decomposition at design constant `C`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LllBudget {
    pub mode: CopyMode,
    pub constant: u64,
    /// Class term: `multiplier * (u-coefficient + v-coefficient)`.
    pub per_class: BTreeMap<EventClass, BigRational>,
    /// Sum of all class terms.
    pub total: BigRational,
}

/// Computes the exact per-class budget at constant `c > 6`.
pub fn lll_budget(mode: CopyMode, c: u64) -> Result<LllBudget, LllError> {
    if c <= 6 {
        return Err(LllError::ConstantTooSmall(c));
    }
    let mult = BigInt::from(intersection_multiplier(mode));
    let mut per_class = BTreeMap::new();
    let mut total = BigRational::zero();
    for &class in classes_for_mode(mode) {
        let mut term = BigRational::zero();
        for (num, den) in class_coefficients(class) {
            term += BigRational::new(BigInt::from(num), den.eval(c));
        }
        term *= BigRational::from(mult.clone());
        total += term.clone();
        per_class.insert(class, term);
    }
    Ok(LllBudget { mode, constant: c, per_class, total })
}

/// The aggregated closed form of the same budget:
///
/// * proper: `3 * (25/(2C-4) + 26/(C-1))`
/// * rainbow: `4 * (25/(2C-4) + 26/(C-1))`
///   `+ 4 * (14/(C-1) + 3/(C-2) + 9/(C-3) + 5/(C-4) + 4/(C-5) + 4/(C-6))`
///
/// Must equal [`lll_budget`]'s total identically; tests enforce this.
pub fn budget_closed_form(mode: CopyMode, c: u64) -> Result<BigRational, LllError> {
    if c <= 6 {
        return Err(LllError::ConstantTooSmall(c));
    }
    let frac = |num: u64, den: BigInt| BigRational::new(BigInt::from(num), den);
    let cherry = frac(25, BigInt::from(2 * c - 4)) + frac(26, BigInt::from(c - 1));
    Ok(match mode {
        CopyMode::Proper => BigRational::from(BigInt::from(3)) * cherry,
        CopyMode::Rainbow => {
            let pair = frac(14, BigInt::from(c - 1))
                + frac(3, BigInt::from(c - 2))
                + frac(9, BigInt::from(c - 3))
                + frac(5, BigInt::from(c - 4))
                + frac(4, BigInt::from(c - 5))
                + frac(4, BigInt::from(c - 6));
            BigRational::from(BigInt::from(4)) * (cherry + pair)
        }
    })
}

/// Verdict of the two feasibility conditions for the resampling argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    /// `1 / (n - ell) <= 1/4` — no single event is too likely.
    pub single_event_ok: bool,
    /// `budget.total <= 1/4` — the neighborhood sum is under control.
    pub neighborhood_ok: bool,
}

impl FeasibilityVerdict {
    pub fn ok(&self) -> bool {
        self.single_event_ok && self.neighborhood_ok
    }
}

/// Checks both feasibility conditions exactly.
pub fn lll_feasibility_check(n: usize, ell: usize, budget: &LllBudget) -> FeasibilityVerdict {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let single_event_ok = match n.checked_sub(ell) {
        Some(gap) if gap >= 1 => {
            BigRational::new(BigInt::one(), BigInt::from(gap)) <= quarter
        }
        _ => false,
    };
    FeasibilityVerdict { single_event_ok, neighborhood_ok: budget.total <= quarter }
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

/// Which boundedness threshold to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    /// Proper copies of an `r`-cherry spanning pattern: `n / (560 r^(3/4))`.
    ShearerProper,
    /// Rainbow copies of an `r`-cherry spanning pattern:
    /// `n / (1512 r^(3/4))`.
    ShearerRainbow,
    /// Proper Hamilton-path-style bound in terms of the pattern maximum
    /// degree: `n / (22.4 delta^2)` (held exactly as `5 n / (112 delta^2)`).
    BkpLocal,
    /// Rainbow analogue: `n / (51 delta^2)`, improving to `n / (42 delta^2)`
    /// once `n >= 100`.
    BkpGlobal,
}

impl ThresholdKind {
    /// Does the formula consume the cherry count (`r`) or the maximum
    /// degree?
    pub fn uses_cherries(self) -> bool {
        matches!(self, ThresholdKind::ShearerProper | ThresholdKind::ShearerRainbow)
    }
}

/// A threshold evaluation request. Exactly one of `r`/`delta` must be set,
/// matching the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdQuery {
    pub kind: ThresholdKind,
    pub n: u64,
    pub r: Option<u64>,
    pub delta: Option<u64>,
}

/// Result of a threshold evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Largest admissible boundedness level (0 when the formula gives less
    /// than 1 — the guarantee is then vacuous at this size).
    pub k: u64,
    /// True when `r = 0` clamped the answer to `n - 1`: with no cherries any
    /// boundedness level works, so the hypothesis is vacuous rather than
    /// binding.
    pub vacuous: bool,
}

/// Evaluates a boundedness threshold exactly (floor of the formula).
pub fn threshold(q: &ThresholdQuery) -> Result<ThresholdResult, LllError> {
    if q.n < 1 {
        return Err(LllError::BadQuery("host size n must be at least 1".into()));
    }
    match (q.kind.uses_cherries(), q.r, q.delta) {
        (true, Some(r), None) => {
            if r == 0 {
                // No cherries: every coloring works, clamp to the largest
                // sensible level and flag the clamp.
                return Ok(ThresholdResult { k: q.n - 1, vacuous: true });
            }
            let c = match q.kind {
                ThresholdKind::ShearerProper => 560,
                ThresholdKind::ShearerRainbow => 1512,
                _ => unreachable!(),
            };
            Ok(ThresholdResult { k: floor_ratio_three_quarter_root(q.n, c, r), vacuous: false })
        }
        (false, None, Some(delta)) => {
            if delta < 1 {
                return Err(LllError::BadQuery("maximum degree must be at least 1".into()));
            }
            let k = match q.kind {
                // 22.4 = 112/5 exactly.
                ThresholdKind::BkpLocal => 5 * q.n / (112 * delta * delta),
                ThresholdKind::BkpGlobal => {
                    let divisor = if q.n >= 100 { 42 } else { 51 };
                    q.n / (divisor * delta * delta)
                }
                _ => unreachable!(),
            };
            Ok(ThresholdResult { k, vacuous: false })
        }
        (true, _, _) => Err(LllError::BadQuery("this kind takes r (cherry count), not delta".into())),
        (false, _, _) => Err(LllError::BadQuery("this kind takes delta (max degree), not r".into())),
    }
}
