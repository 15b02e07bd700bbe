//! Shared numeric helpers.
//!
//! Several quantities in this crate compare integers against irrational
//! expressions of the form `a * r^(1/4)` or `n / (c * r^(3/4))`. Those
//! comparisons are decided exactly by raising both sides to the fourth power
//! in arbitrary-precision integers; no floating point is involved in any
//! verdict.

use num::BigUint;

/// Number of unordered vertex pairs of an `n`-vertex set.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Rank of the pair `{u, v}` (1-based labels, `u < v`) in lexicographic
/// order of all unordered pairs of `1..=n`: `(1,2), (1,3), ..., (n-1,n)`.
pub fn pair_rank(n: usize, u: u32, v: u32) -> usize {
    debug_assert!(1 <= u && u < v && (v as usize) <= n);
    let u = u as usize - 1; // 0-based row
    let v = v as usize - 1; // 0-based column
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_rank`]: the pair at `rank` in lexicographic order.
pub fn pair_at_rank(n: usize, rank: usize) -> (u32, u32) {
    debug_assert!(rank < pair_count(n));
    // Row u (0-based) covers ranks [u*n - u(u+1)/2, ...) with n-1-u entries.
    let mut u = 0usize;
    let mut row_start = 0usize;
    loop {
        let row_len = n - 1 - u;
        if rank < row_start + row_len {
            let v = u + 1 + (rank - row_start);
            return (u as u32 + 1, v as u32 + 1);
        }
        row_start += row_len;
        u += 1;
    }
}

/// Smallest integer `m` with `m >= 2 * r^(1/4)`, i.e. the least `m` such
/// that `m^4 >= 16 r`.
pub fn ceil_two_quarter_root(r: u64) -> u64 {
    if r == 0 {
        return 0;
    }
    let bound = BigUint::from(16u32) * BigUint::from(r);
    least_with_fourth_power_at_least(&bound)
}

/// Largest integer `t` with `t <= a * r^(1/4)`, i.e. the greatest `t` such
/// that `t^4 <= a^4 * r`.
pub fn floor_scaled_quarter_root(a: u64, r: u64) -> u64 {
    let bound = BigUint::from(a).pow(4) * BigUint::from(r);
    greatest_with_fourth_power_at_most(&bound)
}

/// Does `x <= a * r^(1/4)` hold? Decided exactly as `x^4 <= a^4 * r`.
pub fn le_scaled_quarter_root(x: u64, a: u64, r: u64) -> bool {
    BigUint::from(x).pow(4) <= BigUint::from(a).pow(4) * BigUint::from(r)
}

/// Largest integer `k` with `k <= n / (c * r^(3/4))` for `r >= 1`, i.e. the
/// greatest `k` such that `(c*k)^4 * r^3 <= n^4`.
pub fn floor_ratio_three_quarter_root(n: u64, c: u64, r: u64) -> u64 {
    assert!(r >= 1 && c >= 1);
    let n4 = BigUint::from(n).pow(4);
    let r3 = BigUint::from(r).pow(3);
    let c4 = BigUint::from(c).pow(4);
    greatest_with(|k| BigUint::from(k).pow(4) * &c4 * &r3 <= n4, n)
}

/// Smallest integer `m` with `m^4 >= bound`.
fn least_with_fourth_power_at_least(bound: &BigUint) -> u64 {
    // m <= 2^16 for any u64 bound scaled by small constants; search wider to
    // stay safe for arbitrary BigUint inputs produced above.
    let mut lo = 0u64;
    let mut hi = 1u64;
    while &BigUint::from(hi).pow(4) < bound {
        hi = hi.saturating_mul(2);
    }
    // Invariant: lo^4 < bound <= hi^4.
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if &BigUint::from(mid).pow(4) >= bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if BigUint::from(lo).pow(4) >= *bound {
        lo
    } else {
        hi
    }
}

/// Largest integer `t` with `t^4 <= bound`.
fn greatest_with_fourth_power_at_most(bound: &BigUint) -> u64 {
    greatest_with(|t| &BigUint::from(t).pow(4) <= bound, u64::MAX / 2)
}

/// Largest `k <= cap` satisfying the monotone predicate (true on a prefix).
fn greatest_with(pred: impl Fn(u64) -> bool, cap: u64) -> u64 {
    if !pred(0) {
        return 0;
    }
    let mut lo = 0u64; // pred(lo) holds
    let mut hi = 1u64;
    while hi <= cap && pred(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    let mut hi = hi.min(cap.saturating_add(1)); // pred(hi) fails or hi > cap
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Derives the seed for a numbered phase from a master seed.
///
/// The phase index is folded into the master seed and the result is passed
/// through the SplitMix64 finalizer, so consecutive phases get statistically
/// unrelated streams while remaining a pure function of `(master, phase)`.
pub fn derive_seed(master: u64, phase: u64) -> u64 {
    splitmix64(master ^ (phase.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rank_round_trips() {
        for n in 2..=12usize {
            let mut rank = 0usize;
            for u in 1..=n as u32 {
                for v in (u + 1)..=n as u32 {
                    assert_eq!(pair_rank(n, u, v), rank);
                    assert_eq!(pair_at_rank(n, rank), (u, v));
                    rank += 1;
                }
            }
            assert_eq!(rank, pair_count(n));
        }
    }

    #[test]
    fn ceil_two_quarter_root_matches_reference() {
        // Reference by scanning: least m with m^4 >= 16 r.
        for r in 0..2000u64 {
            let got = ceil_two_quarter_root(r);
            let want = (0..).find(|m: &u64| m.pow(4) >= 16 * r).unwrap();
            assert_eq!(got, want, "r = {r}");
        }
        assert_eq!(ceil_two_quarter_root(16), 4); // 2 * 16^(1/4) = 4 exactly
        assert_eq!(ceil_two_quarter_root(17), 5);
    }

    #[test]
    fn floor_scaled_quarter_root_matches_reference() {
        for a in 1..6u64 {
            for r in 0..500u64 {
                let got = floor_scaled_quarter_root(a, r);
                let want = (0..).take_while(|t: &u64| t.pow(4) <= a.pow(4) * r).last().unwrap();
                assert_eq!(got, want, "a = {a}, r = {r}");
            }
        }
    }

    #[test]
    fn ratio_floor_examples() {
        // n / (c * r^(3/4)) with r a perfect fourth power is exact:
        // 8960 / (560 * 16^(3/4)) = 8960 / 4480 = 2.
        assert_eq!(floor_ratio_three_quarter_root(8960, 560, 16), 2);
        assert_eq!(floor_ratio_three_quarter_root(8959, 560, 16), 1);
        assert_eq!(floor_ratio_three_quarter_root(100, 560, 10000), 0);
    }

    #[test]
    fn derived_seeds_differ_by_phase() {
        let s = derive_seed(42, 0);
        for phase in 1..100 {
            assert_ne!(derive_seed(42, phase), s);
        }
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
