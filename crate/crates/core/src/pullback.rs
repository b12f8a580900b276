//! Pullback multifunctions `x ↦ f^{-1}({x})` of single-valued maps.
//!
//! A total multifunction is a pullback exactly when its values are pairwise
//! disjoint and cover the ground set; the map it pulls back is then read off
//! as `f(x) = y` iff `x ∈ F(y)`. A total pullback `F` of `f` has an `n`-th
//! root `G` among pullbacks iff `f` has an `n`-th root `g`, with `G` the
//! pullback of `g`.

use std::fmt;

use crate::mf::{Multifunction, SingleMap};
use crate::{Error, PointSet, Result};

pub fn pullback_of(f: &SingleMap) -> Multifunction {
    let mut images = vec![PointSet::new(); f.size()];
    for (x, &y) in f.as_slice().iter().enumerate() {
        images[y].insert(x);
    }
    Multifunction::new(f.ground().clone(), images).expect("indices in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PullbackCondition {
    /// Values at distinct points are disjoint.
    Disjointness,
    /// `Im(F) = X`.
    Surjectivity,
    /// `Dom(F) = X`.
    Totality,
}

impl fmt::Display for PullbackCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PullbackCondition::Disjointness => "disjointness",
            PullbackCondition::Surjectivity => "surjectivity",
            PullbackCondition::Totality => "totality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackWitness {
    pub is_pullback: bool,
    pub witness_map: Option<SingleMap>,
    /// Every failed condition, not only the first.
    pub failed_conditions: Vec<PullbackCondition>,
}

fn disjoint_values(f: &Multifunction) -> bool {
    let mut seen = PointSet::new();
    for img in f.images() {
        if seen.intersects(img) {
            return false;
        }
        seen.union_with(img);
    }
    true
}

pub fn is_pullback(f: &Multifunction) -> PullbackWitness {
    let mut failed = Vec::new();
    if !disjoint_values(f) {
        failed.push(PullbackCondition::Disjointness);
    }
    if !f.is_onto() {
        failed.push(PullbackCondition::Surjectivity);
    }
    if !f.is_total() {
        failed.push(PullbackCondition::Totality);
    }
    if !failed.is_empty() {
        return PullbackWitness { is_pullback: false, witness_map: None, failed_conditions: failed };
    }
    let mut image = vec![0; f.size()];
    for (y, x) in f.edges() {
        image[x] = y;
    }
    let map = SingleMap::new(f.ground().clone(), image).expect("indices in range");
    PullbackWitness { is_pullback: true, witness_map: Some(map), failed_conditions: Vec::new() }
}

/// Preconditions of [`decomposition_check`] that can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionPrecondition {
    /// `G1 ∘ G2 ≠ F` (or the ground sets differ).
    NotAFactorization,
    /// One of `F`, `G1`, `G2` has an empty value somewhere.
    PartialDomain,
    /// `F` is not a pullback multifunction.
    NotPullback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionReport {
    Inapplicable(Vec<DecompositionPrecondition>),
    Checked {
        /// `Im(G1) = X`.
        outer_onto: bool,
        /// `G2` has pairwise disjoint values.
        inner_disjoint: bool,
        /// When `G1 = G2`, whether that common factor is itself a pullback.
        root_is_pullback: Option<bool>,
    },
}

impl DecompositionReport {
    /// True when applicable and every reported conclusion holds.
    pub fn conclusions_hold(&self) -> bool {
        match self {
            DecompositionReport::Inapplicable(_) => false,
            DecompositionReport::Checked { outer_onto, inner_disjoint, root_is_pullback } => {
                *outer_onto && *inner_disjoint && root_is_pullback.unwrap_or(true)
            }
        }
    }
}

/// Checks the consequences of writing a total pullback `F` as `G1 ∘ G2`.
///
/// `g1 == g2` is the case of a square root; for higher order roots pass
/// `g1 = G` and `g2 = G^{n-1}`, where `root_is_pullback` is not reported.
pub fn decomposition_check(f: &Multifunction, g1: &Multifunction, g2: &Multifunction) -> DecompositionReport {
    let mut pre = Vec::new();
    if g1.compose(g2).map_or(true, |c| &c != f) {
        pre.push(DecompositionPrecondition::NotAFactorization);
    }
    if !(f.is_total() && g1.is_total() && g2.is_total()) {
        pre.push(DecompositionPrecondition::PartialDomain);
    }
    if !is_pullback(f).is_pullback {
        pre.push(DecompositionPrecondition::NotPullback);
    }
    if !pre.is_empty() {
        return DecompositionReport::Inapplicable(pre);
    }
    DecompositionReport::Checked {
        outer_onto: g1.is_onto(),
        inner_disjoint: disjoint_values(g2),
        root_is_pullback: (g1 == g2).then(|| is_pullback(g1).is_pullback),
    }
}

/// Checks an `n`-th root `G` of a total pullback `F` (that is, `G^n = F`).
pub fn root_decomposition_check(f: &Multifunction, g: &Multifunction, n: u64) -> Result<DecompositionReport> {
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: n });
    }
    let rest = g.iterate(n - 1);
    Ok(match decomposition_check(f, g, &rest) {
        DecompositionReport::Checked { outer_onto, inner_disjoint, .. } => DecompositionReport::Checked {
            outer_onto,
            inner_disjoint,
            root_is_pullback: g.is_total().then(|| is_pullback(g).is_pullback),
        },
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferReport {
    /// `g^n = f`.
    pub map_root: bool,
    /// `(pullback of g)^n = pullback of f`.
    pub pullback_root: bool,
    pub agree: bool,
}

/// Evaluates both sides of the root correspondence for a surjective `f`.
pub fn transfer_root(f: &SingleMap, g: &SingleMap, n: u64) -> Result<TransferReport> {
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: n });
    }
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch);
    }
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let map_root = &g.iterate(n) == f;
    let pullback_root = pullback_of(g).iterate(n) == pullback_of(f);
    Ok(TransferReport { map_root, pullback_root, agree: map_root == pullback_root })
}
