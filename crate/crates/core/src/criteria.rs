//! Finite nonexistence certificates for iterative roots.
//!
//! Each rule compares a "large" quantity measured at a non-fixed witness
//! point `x0` (a 2-step count) against the "small" one-step counts at every
//! other point. If `Q > M·N³` where `N` bounds the one-step counts away from
//! `x0`, then `F` has no root of any order `n ≥ 2` whose images have at most
//! `M` points (or, for the inverse rules, whose inverse images do). With
//! extra class and coverage hypotheses the conclusion strengthens to "no
//! roots at all".
//!
//! | rule            | `Q`                  | per-point bound       | coverage |
//! |-----------------|----------------------|-----------------------|----------|
//! | `ForwardPaths`  | `#P_F(X, x0; 2)`     | `#P_F(X, x; 1) ≤ N`   | `Dom(F) = X` |
//! | `ForwardPoints` | `#F^{-2}({x0})`      | `#F^{-1}({x}) ≤ N`    | `Dom(F) = X` |
//! | `InversePaths`  | `#P_F(x0, X; 2)`     | `#P_F(x, X; 1) ≤ N`   | `Im(F) = X`  |
//! | `InversePoints` | `#F^2(x0)`           | `#F(x) ≤ N`           | `Im(F) = X`  |
//!
//! The comparison is strict and exact. The rules are sufficient conditions
//! only: a scan that finds nothing proves nothing.

use std::fmt;

use num_bigint::BigUint;

use crate::mf::Multifunction;
use crate::paths::path_matrix;
use crate::{Error, Execution, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    ForwardPaths,
    ForwardPoints,
    InversePaths,
    InversePoints,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::ForwardPaths, Rule::ForwardPoints, Rule::InversePaths, Rule::InversePoints];

    pub fn id(self) -> &'static str {
        match self {
            Rule::ForwardPaths => "forward-paths",
            Rule::ForwardPoints => "forward-points",
            Rule::InversePaths => "inverse-paths",
            Rule::InversePoints => "inverse-points",
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::ForwardPaths => "forward path rule: #P(X,x0;2) > M*N^3, #P(X,x;1) <= N for x != x0",
            Rule::ForwardPoints => "forward point rule: #F^-2({x0}) > M*N^3, #F^-1({x}) <= N for x != x0",
            Rule::InversePaths => "inverse path rule: #P(x0,X;2) > M*N^3, #P(x,X;1) <= N for x != x0",
            Rule::InversePoints => "inverse point rule: #F^2(x0) > M*N^3, #F(x) <= N for x != x0",
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Rule::InversePaths | Rule::InversePoints)
    }

    /// The rule that `self` becomes after inverting the multifunction.
    pub fn dual(self) -> Rule {
        match self {
            Rule::ForwardPaths => Rule::InversePaths,
            Rule::ForwardPoints => Rule::InversePoints,
            Rule::InversePaths => Rule::ForwardPaths,
            Rule::InversePoints => Rule::ForwardPoints,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Hypotheses a certificate tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    /// `Dom(F) = X`.
    Totality,
    /// `Im(F) = X`.
    Surjectivity,
    /// `x0 ∉ F(x0)`.
    X0NotFixed,
    /// `Q > M·N³`.
    QExceedsMN3,
    /// The one-step count at every `x ≠ x0` is at most `N`.
    NBoundHolds,
    /// `F ∈ 𝓕_M` (forward rules) or `F ∈ 𝓕⁻¹_M` (inverse rules).
    ClassMembership,
}

impl Hypothesis {
    pub fn id(self) -> &'static str {
        match self {
            Hypothesis::Totality => "totality",
            Hypothesis::Surjectivity => "surjectivity",
            Hypothesis::X0NotFixed => "x0_not_fixed",
            Hypothesis::QExceedsMN3 => "Q_exceeds_MN3",
            Hypothesis::NBoundHolds => "N_bound_holds",
            Hypothesis::ClassMembership => "class_membership",
        }
    }

    fn dual(self) -> Hypothesis {
        match self {
            Hypothesis::Totality => Hypothesis::Surjectivity,
            Hypothesis::Surjectivity => Hypothesis::Totality,
            other => other,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Root classes a certificate can exclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootClass {
    /// `𝓕_M`: every image has at most `M` points.
    MaxOutDegree(u64),
    /// `𝓕⁻¹_M`: every inverse image has at most `M` points.
    MaxInDegree(u64),
}

impl RootClass {
    fn dual(self) -> RootClass {
        match self {
            RootClass::MaxOutDegree(m) => RootClass::MaxInDegree(m),
            RootClass::MaxInDegree(m) => RootClass::MaxOutDegree(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    /// No roots of any order `n ≥ 2` inside the class.
    NoRootsInClass(RootClass),
    /// No roots of any order `n ≥ 2` whatsoever.
    NoRootsAtAll,
    /// The listed base hypotheses failed.
    NotApplicable(Vec<Hypothesis>),
}

impl Conclusion {
    pub fn fires(&self) -> bool {
        !matches!(self, Conclusion::NotApplicable(_))
    }

    /// The same conclusion as read on the inverse multifunction.
    pub fn dual(&self) -> Conclusion {
        match self {
            Conclusion::NoRootsInClass(c) => Conclusion::NoRootsInClass(c.dual()),
            Conclusion::NoRootsAtAll => Conclusion::NoRootsAtAll,
            Conclusion::NotApplicable(h) => {
                let mut h: Vec<Hypothesis> = h.iter().map(|x| x.dual()).collect();
                h.sort();
                Conclusion::NotApplicable(h)
            }
        }
    }
}

/// One checked instance of a nonexistence rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub rule: Rule,
    pub x0: usize,
    pub m: u64,
    pub n: u64,
    /// The two-step quantity at `x0`.
    pub measured_q: BigUint,
    /// Largest one-step count over `x ≠ x0`.
    pub measured_n_max: BigUint,
    /// Every tested hypothesis with its outcome, base hypotheses first.
    pub checklist: Vec<(Hypothesis, bool)>,
    pub conclusion: Conclusion,
}

impl Certificate {
    pub fn holds(&self, h: Hypothesis) -> Option<bool> {
        self.checklist.iter().find(|(k, _)| *k == h).map(|&(_, v)| v)
    }

    pub fn fires(&self) -> bool {
        self.conclusion.fires()
    }

    pub fn mn3(&self) -> BigUint {
        BigUint::from(self.m) * BigUint::from(self.n).pow(3)
    }

    /// Recomputes the certificate from `f` and compares.
    pub fn recheck(&self, f: &Multifunction) -> Result<bool> {
        Ok(&check(f, self.rule, self.x0, self.m, self.n)? == self)
    }
}

/// Per-point quantities every rule draws on, computed once per multifunction.
#[derive(Debug, Clone)]
pub struct Measurements {
    in_degree: Vec<usize>,
    out_degree: Vec<usize>,
    paths_in_2: Vec<BigUint>,
    paths_out_2: Vec<BigUint>,
    preimage_2: Vec<usize>,
    image_2: Vec<usize>,
    self_member: PointSet,
    total: bool,
    onto: bool,
}

impl Measurements {
    pub fn of(f: &Multifunction) -> Self {
        let n = f.size();
        let squared = path_matrix(f, 2);
        let f2 = f.iterate(2);
        let mut preimage_2 = vec![0; n];
        for (_, y) in f2.edges() {
            preimage_2[y] += 1;
        }
        Measurements {
            in_degree: f.in_degrees(),
            out_degree: f.out_degrees(),
            paths_in_2: (0..n).map(|y| squared.column_sum(y)).collect(),
            paths_out_2: (0..n).map(|x| squared.row_sum(x)).collect(),
            preimage_2,
            image_2: f2.out_degrees(),
            self_member: (0..n).filter(|&x| f.image_of(x).contains(x)).collect(),
            total: f.is_total(),
            onto: f.is_onto(),
        }
    }

    fn size(&self) -> usize {
        self.in_degree.len()
    }

    fn q(&self, rule: Rule, x0: usize) -> BigUint {
        match rule {
            Rule::ForwardPaths => self.paths_in_2[x0].clone(),
            Rule::ForwardPoints => BigUint::from(self.preimage_2[x0]),
            Rule::InversePaths => self.paths_out_2[x0].clone(),
            Rule::InversePoints => BigUint::from(self.image_2[x0]),
        }
    }

    /// The one-step count bounded by `N`, per rule.
    fn one_step(&self, rule: Rule) -> &[usize] {
        if rule.is_inverse() {
            &self.out_degree
        } else {
            &self.in_degree
        }
    }

    /// The degree bounded by `M` for class membership.
    fn class_degree(&self, rule: Rule) -> &[usize] {
        if rule.is_inverse() {
            &self.in_degree
        } else {
            &self.out_degree
        }
    }

    /// Smallest valid `N` for `x0`: the largest one-step count elsewhere, at least 1.
    pub fn minimal_n(&self, rule: Rule, x0: usize) -> u64 {
        self.n_max(rule, x0).max(1) as u64
    }

    fn n_max(&self, rule: Rule, x0: usize) -> usize {
        self.one_step(rule)
            .iter()
            .enumerate()
            .filter(|&(x, _)| x != x0)
            .map(|(_, &d)| d)
            .max()
            .unwrap_or(0)
    }

    pub fn certificate(&self, rule: Rule, x0: usize, m: u64, n: u64) -> Certificate {
        let q = self.q(rule, x0);
        let n_max = self.n_max(rule, x0);
        let mn3 = BigUint::from(m) * BigUint::from(n).pow(3);
        let (base_cover, extra_cover, cover_ok, extra_cover_ok) = if rule.is_inverse() {
            (Hypothesis::Surjectivity, Hypothesis::Totality, self.onto, self.total)
        } else {
            (Hypothesis::Totality, Hypothesis::Surjectivity, self.total, self.onto)
        };
        let base = [
            (base_cover, cover_ok),
            (Hypothesis::X0NotFixed, !self.self_member.contains(x0)),
            (Hypothesis::QExceedsMN3, q > mn3),
            (Hypothesis::NBoundHolds, n_max as u64 <= n),
        ];
        let in_class = self.class_degree(rule).iter().all(|&d| d as u64 <= m);
        let extra = [(Hypothesis::ClassMembership, in_class), (extra_cover, extra_cover_ok)];

        let mut failed: Vec<Hypothesis> = base.iter().filter(|(_, ok)| !ok).map(|&(h, _)| h).collect();
        failed.sort();
        let conclusion = if !failed.is_empty() {
            Conclusion::NotApplicable(failed)
        } else if extra.iter().all(|&(_, ok)| ok) {
            Conclusion::NoRootsAtAll
        } else if rule.is_inverse() {
            Conclusion::NoRootsInClass(RootClass::MaxInDegree(m))
        } else {
            Conclusion::NoRootsInClass(RootClass::MaxOutDegree(m))
        };
        Certificate {
            rule,
            x0,
            m,
            n,
            measured_q: q,
            measured_n_max: BigUint::from(n_max),
            checklist: base.into_iter().chain(extra).collect(),
            conclusion,
        }
    }
}

fn validate(f: &Multifunction, x0: usize, m: u64, n: u64) -> Result<()> {
    f.ground().check_point(x0)?;
    if m == 0 {
        return Err(Error::ZeroCount("M"));
    }
    if n == 0 {
        return Err(Error::ZeroCount("N"));
    }
    Ok(())
}

/// Runs `rule` at `(x0, M, N)`.
pub fn check(f: &Multifunction, rule: Rule, x0: usize, m: u64, n: u64) -> Result<Certificate> {
    validate(f, x0, m, n)?;
    Ok(Measurements::of(f).certificate(rule, x0, m, n))
}

pub fn check_forward_paths(f: &Multifunction, x0: usize, m: u64, n: u64) -> Result<Certificate> {
    check(f, Rule::ForwardPaths, x0, m, n)
}

pub fn check_forward_points(f: &Multifunction, x0: usize, m: u64, n: u64) -> Result<Certificate> {
    check(f, Rule::ForwardPoints, x0, m, n)
}

pub fn check_inverse_paths(f: &Multifunction, x0: usize, m: u64, n: u64) -> Result<Certificate> {
    check(f, Rule::InversePaths, x0, m, n)
}

pub fn check_inverse_points(f: &Multifunction, x0: usize, m: u64, n: u64) -> Result<Certificate> {
    check(f, Rule::InversePoints, x0, m, n)
}

/// Every firing certificate over all rules and witness points, with `N`
/// chosen minimal for each `(rule, x0)`. Ordered by rule, then `x0`.
pub fn scan(f: &Multifunction, m: u64) -> Vec<Certificate> {
    scan_with(f, m, Execution::default())
}

pub fn scan_with(f: &Multifunction, m: u64, exec: Execution) -> Vec<Certificate> {
    scan_rules(f, m, &Rule::ALL, exec)
}

pub fn scan_rules(f: &Multifunction, m: u64, rules: &[Rule], exec: Execution) -> Vec<Certificate> {
    if m == 0 {
        return Vec::new();
    }
    let meas = Measurements::of(f);
    let jobs: Vec<(Rule, usize)> = rules
        .iter()
        .flat_map(|&r| (0..meas.size()).map(move |x| (r, x)))
        .collect();
    let mut out: Vec<Certificate> = exec
        .map(&jobs, |&(rule, x0)| meas.certificate(rule, x0, m, meas.minimal_n(rule, x0)))
        .into_iter()
        .filter(Certificate::fires)
        .collect();
    out.sort_by_key(|c| (c.rule, c.x0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use std::sync::Arc;

    fn mf(masks: &[u64]) -> Multifunction {
        Multifunction::from_masks(masks).unwrap()
    }

    #[test]
    fn f1_forward_paths_fires_in_class() {
        let f1 = instances::f1(3).unwrap();
        let x0 = f1.ground().index_of("x0").unwrap();
        let c = check_forward_paths(&f1, x0, 2, 1).unwrap();
        assert_eq!(c.measured_q, BigUint::from(4u32));
        assert_eq!(c.measured_n_max, BigUint::from(1u32));
        assert_eq!(c.conclusion, Conclusion::NoRootsInClass(RootClass::MaxOutDegree(2)));
        assert_eq!(c.holds(Hypothesis::Surjectivity), Some(false));
        assert_eq!(c.holds(Hypothesis::ClassMembership), Some(true));
    }

    #[test]
    fn f1_forward_points_is_not_strict() {
        let f1 = instances::f1(3).unwrap();
        let x0 = f1.ground().index_of("x0").unwrap();
        let c = check_forward_points(&f1, x0, 2, 1).unwrap();
        assert_eq!(c.measured_q, BigUint::from(2u32));
        assert_eq!(c.measured_q, c.mn3());
        assert_eq!(c.conclusion, Conclusion::NotApplicable(vec![Hypothesis::QExceedsMN3]));
    }

    #[test]
    fn f2_forward_rules_exclude_all_roots() {
        let f2 = instances::f2(3).unwrap();
        let x0 = f2.ground().index_of("x0").unwrap();
        let paths = check_forward_paths(&f2, x0, 2, 1).unwrap();
        assert_eq!(paths.measured_q, BigUint::from(3u32));
        assert_eq!(paths.conclusion, Conclusion::NoRootsAtAll);
        let points = check_forward_points(&f2, x0, 2, 1).unwrap();
        assert_eq!(points.measured_q, BigUint::from(3u32));
        assert_eq!(points.conclusion, Conclusion::NoRootsAtAll);
    }

    #[test]
    fn identity_never_fires() {
        let id = Multifunction::identity(Arc::new(crate::GroundSet::numbered(4).unwrap()));
        for rule in Rule::ALL {
            let c = check(&id, rule, 2, 3, 1).unwrap();
            match c.conclusion {
                Conclusion::NotApplicable(h) => assert!(h.contains(&Hypothesis::X0NotFixed)),
                other => panic!("{rule} fired: {other:?}"),
            }
        }
        assert!(scan(&id, 1).is_empty());
        assert!(scan(&id, 5).is_empty());
    }

    #[test]
    fn empty_image_blocks_forward_points() {
        let f = mf(&[0b010, 0b100, 0]);
        let c = check_forward_points(&f, 2, 1, 1).unwrap();
        let Conclusion::NotApplicable(h) = c.conclusion else { panic!() };
        assert!(h.contains(&Hypothesis::Totality));
    }

    #[test]
    fn inverse_rules_on_inverted_f1() {
        let f1 = instances::f1(3).unwrap();
        let x0 = f1.ground().index_of("x0").unwrap();
        let inv = f1.invert();
        let paths = check_inverse_paths(&inv, x0, 2, 1).unwrap();
        assert_eq!(paths.measured_q, BigUint::from(4u32));
        assert_eq!(paths.conclusion, Conclusion::NoRootsInClass(RootClass::MaxInDegree(2)));
        let points = check_inverse_points(&inv, x0, 2, 1).unwrap();
        assert_eq!(points.measured_q, BigUint::from(2u32));
        assert!(!points.fires());
        // on F1 itself only one 2-path leaves x0
        let own = check_inverse_paths(&f1, x0, 2, 1).unwrap();
        assert_eq!(own.measured_q, BigUint::from(1u32));
        let Conclusion::NotApplicable(h) = own.conclusion else { panic!() };
        assert!(h.contains(&Hypothesis::Surjectivity));
        assert!(h.contains(&Hypothesis::QExceedsMN3));
    }

    #[test]
    fn fan_out_instance_fires_inverse_points() {
        // c = 0 with F(c) = {1..5}, each i -> i+1 mod 5 within {1..5}, and 6 -> c.
        // F²(c) = {1..5}, #F(x) ≤ 1 elsewhere.
        let g = Arc::new(crate::GroundSet::new(["c", "a1", "a2", "a3", "a4", "a5", "b"]).unwrap());
        let f = Multifunction::from_lists(
            g,
            &[vec![1, 2, 3, 4, 5], vec![2], vec![3], vec![4], vec![5], vec![6], vec![0]],
        )
        .unwrap();
        let c = check_inverse_points(&f, 0, 2, 1).unwrap();
        assert_eq!(c.measured_q, BigUint::from(5u32));
        assert!(c.fires());
    }

    #[test]
    fn singleton_self_loop_inverse_points() {
        let f = mf(&[1]);
        let c = check_inverse_points(&f, 0, 1, 1).unwrap();
        assert_eq!(c.conclusion, Conclusion::NotApplicable(vec![Hypothesis::X0NotFixed, Hypothesis::QExceedsMN3]));
    }

    #[test]
    fn argument_errors() {
        let f = mf(&[1]);
        assert!(matches!(check_forward_paths(&f, 3, 1, 1), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(check_forward_paths(&f, 0, 0, 1).unwrap_err(), Error::ZeroCount("M"));
        assert_eq!(check_forward_paths(&f, 0, 1, 0).unwrap_err(), Error::ZeroCount("N"));
    }

    #[test]
    fn scan_f1_and_f2() {
        let f1 = instances::f1(3).unwrap();
        let x0 = f1.ground().index_of("x0").unwrap();
        let found = scan(&f1, 2);
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].rule, found[0].x0), (Rule::ForwardPaths, x0));
        let inv = scan(&f1.invert(), 2);
        assert_eq!(inv.iter().map(|c| (c.rule, c.x0)).collect::<Vec<_>>(), vec![(Rule::InversePaths, x0)]);

        let f2 = instances::f2(3).unwrap();
        let x0 = f2.ground().index_of("x0").unwrap();
        let found: Vec<_> = scan(&f2, 2).into_iter().map(|c| (c.rule, c.x0)).collect();
        assert_eq!(found, vec![(Rule::ForwardPaths, x0), (Rule::ForwardPoints, x0)]);
    }

    #[test]
    fn certificates_recheck() {
        let f2 = instances::f2(4).unwrap();
        for c in scan(&f2, 2) {
            assert!(c.recheck(&f2).unwrap());
        }
    }
}
