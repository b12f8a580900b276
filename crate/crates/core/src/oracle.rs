//! Brute-force reference implementations.
//!
//! Everything here is deliberately naive and shares no code with the
//! optimised paths it is used to check: walks are enumerated one by one,
//! roots are found by scanning the whole candidate space, and modular
//! arithmetic is done by repeated multiplication.

use num_bigint::BigUint;

use crate::mf::{Multifunction, SingleMap};
use crate::PointSet;

/// Counts `k`-walks from `from` to `to` by explicit depth-first enumeration.
pub fn count_walks(f: &Multifunction, from: &PointSet, to: &PointSet, k: usize) -> BigUint {
    fn walk(f: &Multifunction, at: usize, left: usize, to: &PointSet, count: &mut u64) {
        if left == 0 {
            if to.contains(at) {
                *count += 1;
            }
            return;
        }
        for next in f.image_of(at).iter() {
            walk(f, next, left - 1, to, count);
        }
    }
    let mut count = 0u64;
    for x in from.iter() {
        walk(f, x, k, to, &mut count);
    }
    BigUint::from(count)
}

/// `{x : F^k(x) ∩ A ≠ ∅}` by searching each orbit for a hit at depth `k`.
pub fn inverse_image(f: &Multifunction, a: &PointSet, k: usize) -> PointSet {
    fn reaches(f: &Multifunction, at: usize, left: usize, a: &PointSet) -> bool {
        if left == 0 {
            return a.contains(at);
        }
        f.image_of(at).iter().any(|next| reaches(f, next, left - 1, a))
    }
    (0..f.size()).filter(|&x| reaches(f, x, k, a)).collect()
}

fn mask_image(g: &[u64], set: u64) -> u64 {
    let mut out = 0;
    let mut s = set;
    while s != 0 {
        let x = s.trailing_zeros() as usize;
        s &= s - 1;
        out |= g[x];
    }
    out
}

/// `G^n` on masks, by repeated application to singletons.
pub fn mask_power(g: &[u64], n: u64) -> Vec<u64> {
    (0..g.len())
        .map(|x| (0..n).fold(1u64 << x, |s, _| mask_image(g, s)))
        .collect()
}

/// All subsets of `0..size` in size-then-value order.
pub fn canonical_subsets(size: usize) -> Vec<u64> {
    let mut v: Vec<u64> = (0..(1u64 << size)).collect();
    v.sort_by_key(|&m| (m.count_ones(), m));
    v
}

/// Scans every candidate `G` (each image any subset) in canonical order and
/// returns the first with `G^n = F` accepted by `admit`.
///
/// Only usable for tiny ground sets: the candidate space has `2^(size^2)`
/// elements.
pub fn first_multi_root(f: &Multifunction, n: u64, admit: impl Fn(&[u64]) -> bool) -> Option<Vec<u64>> {
    let size = f.size();
    assert!(size <= 4, "naive root enumeration is limited to 4 points");
    let target = f.masks();
    let subsets = canonical_subsets(size);
    let total = subsets.len().pow(size as u32);
    let mut g = vec![0u64; size];
    for code in 0..total {
        let mut c = code;
        for x in (0..size).rev() {
            g[x] = subsets[c % subsets.len()];
            c /= subsets.len();
        }
        if mask_power(&g, n) == target && admit(&g) {
            return Some(g);
        }
    }
    None
}

/// Scans all `size^size` maps in lexicographic order for `g^n = f`.
pub fn first_single_root(f: &SingleMap, n: u64) -> Option<Vec<usize>> {
    let size = f.size();
    assert!(size <= 7, "naive map enumeration is limited to 7 points");
    let total = size.pow(size as u32);
    let mut g = vec![0usize; size];
    for code in 0..total {
        let mut c = code;
        for x in (0..size).rev() {
            g[x] = c % size;
            c /= size;
        }
        let ok = (0..size).all(|x| (0..n).fold(x, |y, _| g[y]) == f.apply(x));
        if ok {
            return Some(g);
        }
    }
    None
}

fn is_prime_by_trial(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

/// `d^p ≢ d (mod p²)` for every prime `p ≤ d`, by repeated multiplication.
pub fn solar_by_trial(d: u64) -> bool {
    (2..=d).filter(|&p| is_prime_by_trial(p)).all(|p| {
        let m = p * p;
        let mut acc = 1u64;
        for _ in 0..p {
            acc = acc * (d % m) % m;
        }
        acc != d % m
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_size_then_value() {
        assert_eq!(canonical_subsets(2), vec![0b00, 0b01, 0b10, 0b11]);
        assert_eq!(canonical_subsets(3)[4..7], [0b011, 0b101, 0b110]);
    }

    #[test]
    fn naive_solar_small_values() {
        let firsts: Vec<u64> = (2..16).filter(|&d| solar_by_trial(d)).collect();
        assert_eq!(firsts, vec![2, 3, 6, 11, 14, 15]);
    }

    #[test]
    fn naive_single_root_of_identity_is_identity() {
        let id = SingleMap::from_vec(vec![0, 1, 2]).unwrap();
        assert_eq!(first_single_root(&id, 3), Some(vec![0, 1, 2]));
    }
}
