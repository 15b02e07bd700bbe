//! Finite fields of small order and polarity graphs of projective planes.
//!
//! The polarity graph of the projective plane over `GF(q)` has the
//! `q^2 + q + 1` projective points as vertices, two distinct points adjacent
//! when their homogeneous coordinates are orthogonal. It is `(q+1)`-regular
//! except at the `q + 1` self-orthogonal points (degree `q`), has diameter
//! 2, and packs close to the extremal number of edges for its cherry count
//! — which makes it the standard stress-test host/pattern around here.

use super::ConstructionError;
use crate::graph::PatternGraph;

/// Field orders with a table implementation in this crate: the primes up to
/// 13 and the prime powers 4, 8, 9.
pub const SUPPORTED_FIELD_ORDERS: &[usize] = &[2, 3, 4, 5, 7, 8, 9, 11, 13];

/// Addition/multiplication tables of a finite field of small order, with
/// elements encoded as `0..q` (0 and 1 are the identities).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl FieldTable {
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
}

/// Builds the field of order `q`, verifying the field axioms exhaustively
/// before returning (cheap for the supported orders).
///
/// Prime orders use modular arithmetic. The prime-power orders use fixed
/// irreducible polynomials: `x^2 + x + 1` for order 4, `x^3 + x + 1` for
/// order 8, and `x^2 + 1` over the field of order 3 for order 9.
pub fn field_table(q: usize) -> Result<FieldTable, ConstructionError> {
    if !SUPPORTED_FIELD_ORDERS.contains(&q) {
        return Err(ConstructionError::UnsupportedFieldOrder(q));
    }
    let mut add = vec![0u8; q * q];
    let mut mul = vec![0u8; q * q];
    for a in 0..q {
        for b in 0..q {
            let (s, p) = match q {
                4 | 8 => {
                    // Binary polynomials: addition is XOR, multiplication is
                    // carry-less followed by reduction.
                    let poly = if q == 4 { 0b111u32 } else { 0b1011u32 };
                    let deg = if q == 4 { 2 } else { 3 };
                    ((a ^ b) as u8, gf2_poly_mul(a as u32, b as u32, poly, deg) as u8)
                }
                9 => {
                    // Elements a1*x + a0 encoded as 3*a1 + a0 over GF(3),
                    // with x^2 = -1 = 2.
                    let (a1, a0) = (a / 3, a % 3);
                    let (b1, b0) = (b / 3, b % 3);
                    let s = (3 * ((a1 + b1) % 3) + (a0 + b0) % 3) as u8;
                    let p1 = (a1 * b0 + a0 * b1) % 3;
                    let p0 = (a0 * b0 + 2 * a1 * b1) % 3;
                    (s, (3 * p1 + p0) as u8)
                }
                _ => (((a + b) % q) as u8, ((a * b) % q) as u8),
            };
            add[a * q + b] = s;
            mul[a * q + b] = p;
        }
    }
    let table = FieldTable { q, add, mul };
    verify_field_axioms(&table)?;
    Ok(table)
}

/// Carry-less multiplication of binary polynomials modulo `poly` (a degree-
/// `deg` irreducible polynomial given as a bit mask).
fn gf2_poly_mul(a: u32, b: u32, poly: u32, deg: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << deg) != 0 {
            a ^= poly;
        }
    }
    acc
}

/// Exhaustive field-axiom check: both operations commutative and
/// associative, multiplication distributes over addition, 0/1 are
/// identities, and all required inverses exist.
fn verify_field_axioms(f: &FieldTable) -> Result<(), ConstructionError> {
    let q = f.q as u8;
    let fail = |what: &str| Err(ConstructionError::SelfCheckFailed(format!("field of order {q}: {what}")));
    for a in 0..q {
        if f.add(a, 0) != a || f.mul(a, 1) != a {
            return fail("identity law");
        }
        if !(0..q).any(|b| f.add(a, b) == 0) {
            return fail("missing additive inverse");
        }
        if a != 0 && !(0..q).any(|b| f.mul(a, b) == 1) {
            return fail("missing multiplicative inverse");
        }
        for b in 0..q {
            if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                return fail("commutativity");
            }
            for c in 0..q {
                if f.add(f.add(a, b), c) != f.add(a, f.add(b, c)) {
                    return fail("additive associativity");
                }
                if f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)) {
                    return fail("multiplicative associativity");
                }
                if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)) {
                    return fail("distributivity");
                }
            }
        }
    }
    Ok(())
}

/// A projective point in canonical form: homogeneous coordinates scaled so
/// the first nonzero coordinate is 1.
type Point = [u8; 3];

/// The `q^2 + q + 1` canonical projective points, in a fixed order:
/// `(1, a, b)` lexicographically, then `(0, 1, a)`, then `(0, 0, 1)`.
fn projective_points(q: usize) -> Vec<Point> {
    let mut pts = Vec::with_capacity(q * q + q + 1);
    for a in 0..q as u8 {
        for b in 0..q as u8 {
            pts.push([1, a, b]);
        }
    }
    for a in 0..q as u8 {
        pts.push([0, 1, a]);
    }
    pts.push([0, 0, 1]);
    pts
}

/// Builds the polarity graph of the projective plane of order `q`.
///
/// Vertices are the canonical projective points (1-based, in the order of
/// [`projective_points`]); distinct points are adjacent when their dot
/// product vanishes. The construction verifies, before returning: the
/// vertex count `q^2 + q + 1`, degrees only `q` and `q + 1` with exactly
/// `q + 1` vertices of degree `q` (the self-orthogonal points), and
/// diameter 2.
pub fn polarity_graph(q: usize) -> Result<PatternGraph, ConstructionError> {
    let f = field_table(q)?;
    let pts = projective_points(q);
    let dot = |x: &Point, y: &Point| -> u8 {
        let mut acc = 0u8;
        for i in 0..3 {
            acc = f.add(acc, f.mul(x[i], y[i]));
        }
        acc
    };
    let n = pts.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if dot(&pts[i], &pts[j]) == 0 {
                edges.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    let g = PatternGraph::new(n, edges).map_err(|e| ConstructionError::SelfCheckFailed(e.to_string()))?;

    // Self-checks; all are theorems about the construction.
    let fail = |what: String| Err(ConstructionError::SelfCheckFailed(format!("polarity graph q = {q}: {what}")));
    if n != q * q + q + 1 {
        return fail(format!("vertex count {n}"));
    }
    let mut low_degree = 0usize;
    for v in 1..=n as u32 {
        let d = g.degree(v);
        let self_orthogonal = dot(&pts[v as usize - 1], &pts[v as usize - 1]) == 0;
        let expected = if self_orthogonal { q } else { q + 1 };
        if d != expected {
            return fail(format!("vertex {v} has degree {d}, expected {expected}"));
        }
        if d == q {
            low_degree += 1;
        }
    }
    if low_degree != q + 1 {
        return fail(format!("{low_degree} vertices of degree q, expected {}", q + 1));
    }
    if g.diameter() != Some(2) {
        return fail("diameter is not 2".into());
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::count_cherries;

    #[test]
    fn field_tables_build_for_all_supported_orders() {
        for &q in SUPPORTED_FIELD_ORDERS {
            let f = field_table(q).unwrap();
            assert_eq!(f.order(), q);
        }
        assert!(matches!(field_table(6), Err(ConstructionError::UnsupportedFieldOrder(6))));
        assert!(matches!(field_table(16), Err(ConstructionError::UnsupportedFieldOrder(16))));
    }

    #[test]
    fn gf4_multiplication_examples() {
        // With elements {0, 1, x, x+1} encoded as 0..4 and x^2 = x + 1:
        let f = field_table(4).unwrap();
        assert_eq!(f.mul(2, 2), 3); // x * x = x + 1
        assert_eq!(f.mul(2, 3), 1); // x * (x+1) = x^2 + x = 1
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn gf9_has_characteristic_three() {
        let f = field_table(9).unwrap();
        let three = f.add(1, f.add(1, 1));
        assert_eq!(three, 0);
    }

    #[test]
    fn small_polarity_graphs() {
        // Order 2: 7 vertices and 9 edges; the 3 self-orthogonal points
        // have degree 2.
        let g = polarity_graph(2).unwrap();
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.max_degree(), 3);

        // Order 3: 13 vertices, degrees 3 and 4.
        let g = polarity_graph(3).unwrap();
        assert_eq!(g.vertex_count(), 13);
        assert_eq!(g.max_degree(), 4);
        let deg3 = g.vertices().filter(|&v| g.degree(v) == 3).count();
        assert_eq!(deg3, 4);
        assert_eq!(g.diameter(), Some(2));
    }

    #[test]
    fn polarity_edge_and_cherry_counts_scale() {
        // Edge count is (q+1)(q^2+q+1)/2 minus the q+1 halved degrees:
        // ((q+1)(q^2+q+1) - (q+1)) / 2 = (q+1)(q^2+q)/2.
        for q in [2usize, 3, 4, 5] {
            let g = polarity_graph(q).unwrap();
            assert_eq!(g.edge_count(), (q + 1) * (q * q + q) / 2, "q = {q}");
            assert!(count_cherries(&g) > 0);
        }
    }
}
