//! Fixed-point structure of single-valued maps and the order exclusions it
//! implies.
//!
//! For a fixed point `x` of `f` the tail set is `T_x(f) = f^{-1}({x}) \ {x}`;
//! `x` is isolated iff its tail is empty.

use std::fmt;

use crate::mf::SingleMap;
use crate::PointSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub point: usize,
    /// `T_x(f)`, ascending.
    pub tail: Vec<usize>,
    /// For each tail point `y`, whether `f^{-1}({y})` is nonempty.
    pub tail_preimage_nonempty: Vec<bool>,
}

impl FixedPoint {
    pub fn is_isolated(&self) -> bool {
        self.tail.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointProfile {
    pub fixed_points: Vec<FixedPoint>,
    /// Size of the union of tails over the non-isolated fixed points.
    pub union_tail_size: usize,
}

impl FixedPointProfile {
    pub fn non_isolated(&self) -> impl Iterator<Item = &FixedPoint> {
        self.fixed_points.iter().filter(|p| !p.is_isolated())
    }
}

pub fn fixed_point_profile(f: &SingleMap) -> FixedPointProfile {
    let n = f.size();
    let mut preimages = vec![Vec::new(); n];
    for x in 0..n {
        preimages[f.apply(x)].push(x);
    }
    let fixed_points: Vec<FixedPoint> = (0..n)
        .filter(|&x| f.apply(x) == x)
        .map(|x| {
            let tail: Vec<usize> = preimages[x].iter().copied().filter(|&y| y != x).collect();
            let tail_preimage_nonempty = tail.iter().map(|&y| !preimages[y].is_empty()).collect();
            FixedPoint { point: x, tail, tail_preimage_nonempty }
        })
        .collect();
    let union: PointSet = fixed_points.iter().flat_map(|p| p.tail.iter().copied()).collect();
    FixedPointProfile { union_tail_size: union.len(), fixed_points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExclusionRule {
    /// Rice's lemma: some non-isolated fixed point has a tail point with a
    /// preimage; excludes every order above the total tail size.
    Rice,
    /// `k ≥ 2` non-isolated fixed points whose tails all have preimages;
    /// excludes orders above the largest tail size with no divisor in `2..=k`.
    NonIsolated,
    /// Polynomial form of the non-isolated rule for `α(z − β)^d + β`.
    ShiftedMonomial,
}

impl ExclusionRule {
    pub fn id(self) -> &'static str {
        match self {
            ExclusionRule::Rice => "rice",
            ExclusionRule::NonIsolated => "non-isolated",
            ExclusionRule::ShiftedMonomial => "shifted-monomial",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            ExclusionRule::Rice => "Rice's lemma: non-isolated fixed point with a tail point having a preimage; no roots of order n > L",
            ExclusionRule::NonIsolated => {
                "non-isolated fixed point theorem: k >= 2 non-isolated fixed points, tails of size <= l with preimages; no roots of order n > l with m not dividing n for 2 <= m <= k"
            }
            ExclusionRule::ShiftedMonomial => {
                "prime shifted monomial a(z-b)^d+b: d-1 non-isolated fixed points; no roots of order n > d-1 with m not dividing n for 2 <= m <= d-1"
            }
        }
    }
}

/// A set of excluded root orders: every `n > lower_bound` not divisible by
/// any `m` in `2..=forbidden_divisor_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderExclusion {
    pub lower_bound: u64,
    pub forbidden_divisor_max: Option<u64>,
    pub source: ExclusionRule,
}

impl OrderExclusion {
    pub fn excludes(&self, n: u64) -> bool {
        n > self.lower_bound
            && match self.forbidden_divisor_max {
                None => true,
                Some(k) => (2..=k).all(|m| !n.is_multiple_of(m)),
            }
    }

    /// Excluded orders in `2..=limit`.
    pub fn excluded_up_to(&self, limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&n| self.excludes(n)).collect()
    }
}

impl fmt::Display for OrderExclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n > {}", self.lower_bound)?;
        match self.forbidden_divisor_max {
            Some(k) if k >= 2 => write!(f, " with no divisor in 2..={k}"),
            _ => Ok(()),
        }
    }
}

pub fn rice_exclusion(f: &SingleMap) -> Option<OrderExclusion> {
    let profile = fixed_point_profile(f);
    let applies = profile.non_isolated().any(|p| p.tail_preimage_nonempty.iter().any(|&b| b));
    applies.then_some(OrderExclusion {
        lower_bound: profile.union_tail_size as u64,
        forbidden_divisor_max: None,
        source: ExclusionRule::Rice,
    })
}

/// `k` is the number of all non-isolated fixed points and `l` the largest
/// tail among them.
pub fn non_isolated_exclusion(f: &SingleMap) -> Option<OrderExclusion> {
    let profile = fixed_point_profile(f);
    non_isolated_parameters(&profile).map(|(k, l)| OrderExclusion {
        lower_bound: l as u64,
        forbidden_divisor_max: Some(k as u64),
        source: ExclusionRule::NonIsolated,
    })
}

/// `(k, l)` when the non-isolated rule applies.
pub fn non_isolated_parameters(profile: &FixedPointProfile) -> Option<(usize, usize)> {
    let points: Vec<&FixedPoint> = profile.non_isolated().collect();
    let k = points.len();
    if k < 2 {
        return None;
    }
    if !points.iter().all(|p| p.tail_preimage_nonempty.iter().all(|&b| b)) {
        return None;
    }
    let l = points.iter().map(|p| p.tail.len()).max().unwrap_or(0);
    Some((k, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fig67;
    use crate::oracle;
    use crate::search::{find_single_root, Outcome, SearchConfig};

    #[test]
    fn fig67_profile() {
        let (f, _) = fig67();
        let p = fixed_point_profile(&f);
        let names: Vec<&str> = p.non_isolated().map(|x| f.ground().label(x.point)).collect();
        assert_eq!(names, vec!["x1", "x2", "x3", "x4"]);
        assert!(p.non_isolated().all(|x| x.tail.len() == 2 && x.tail_preimage_nonempty.iter().all(|&b| b)));
        assert_eq!(p.union_tail_size, 8);
        assert_eq!(non_isolated_parameters(&p), Some((4, 2)));
    }

    #[test]
    fn fig67_exclusions() {
        let (f, _) = fig67();
        let e = non_isolated_exclusion(&f).unwrap();
        assert_eq!(e.excluded_up_to(30), vec![5, 7, 11, 13, 17, 19, 23, 25, 29]);
        assert!(!e.excludes(4));
        let r = rice_exclusion(&f).unwrap();
        assert_eq!(r.lower_bound, 8);
        assert!(r.excludes(9) && !r.excludes(8));
    }

    #[test]
    fn identity_has_only_isolated_points() {
        let id = SingleMap::from_vec(vec![0, 1, 2, 3]).unwrap();
        let p = fixed_point_profile(&id);
        assert_eq!(p.fixed_points.len(), 4);
        assert!(p.fixed_points.iter().all(FixedPoint::is_isolated));
        assert_eq!(p.union_tail_size, 0);
        assert!(rice_exclusion(&id).is_none());
        assert!(non_isolated_exclusion(&id).is_none());
    }

    #[test]
    fn three_point_chain() {
        // f(a) = a, f(b) = a, f(c) = b
        let f = SingleMap::from_vec(vec![0, 0, 1]).unwrap();
        let p = fixed_point_profile(&f);
        assert_eq!(p.fixed_points, vec![FixedPoint { point: 0, tail: vec![1], tail_preimage_nonempty: vec![true] }]);
        assert_eq!(p.union_tail_size, 1);
        let r = rice_exclusion(&f).unwrap();
        assert_eq!(r.excluded_up_to(6), vec![2, 3, 4, 5, 6]);
        assert!(non_isolated_exclusion(&f).is_none());
        for n in 2..=4 {
            assert_eq!(oracle::first_single_root(&f, n), None);
        }
    }

    #[test]
    fn permutation_has_no_exclusion() {
        let f = SingleMap::from_vec(vec![1, 2, 0, 4, 3]).unwrap();
        assert!(rice_exclusion(&f).is_none());
    }

    #[test]
    fn two_fixed_points_exclude_odd_orders() {
        // a <- b <- c and d <- e <- f, with a and d fixed: k = 2, l = 1
        let f = SingleMap::from_vec(vec![0, 0, 1, 3, 3, 4]).unwrap();
        let e = non_isolated_exclusion(&f).unwrap();
        assert_eq!((e.lower_bound, e.forbidden_divisor_max), (1, Some(2)));
        assert_eq!(e.excluded_up_to(9), vec![3, 5, 7, 9]);
        let r = find_single_root(&f, 3, u64::MAX, &SearchConfig::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::ExhaustedNone { .. }));
    }

    #[test]
    fn divisor_clause() {
        let e = OrderExclusion { lower_bound: 2, forbidden_divisor_max: Some(3), source: ExclusionRule::NonIsolated };
        assert_eq!(e.excluded_up_to(26), vec![5, 7, 11, 13, 17, 19, 23, 25]);
        assert_eq!(e.to_string(), "n > 2 with no divisor in 2..=3");
    }
}
