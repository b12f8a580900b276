//! Nonexistence advice for iterative roots of complex polynomials and of
//! their pullback multifunctions.
//!
//! Rules that only look at the degree, the order or integer arithmetic are
//! exact. `CubicSpecial` and `ShiftedMonomialPrime` compare floating
//! coefficients and report the tolerance they used.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Serialize;

use crate::fixedpoint::{ExclusionRule, OrderExclusion};
use crate::{Error, Result};

/// Relative tolerance for coefficient matching.
pub const COEFF_TOL: f64 = 1e-9;
/// Absolute tolerance for clustering fixed points.
pub const CLUSTER_TOL: f64 = 1e-7;

/// A complex polynomial, lowest degree coefficient first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        Ok(ComplexPolynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[d] = Complex64::new(1.0, 0.0);
        ComplexPolynomial { coeffs }
    }

    /// `α(z − β)^d + β`.
    pub fn shifted_monomial(alpha: Complex64, beta: Complex64, d: usize) -> Result<Self> {
        let mut coeffs = binomial_expansion(alpha, beta, d);
        coeffs[0] += beta;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Option<ComplexPolynomial> {
        if self.degree() == 0 {
            return None;
        }
        let coeffs = self.coeffs[1..].iter().enumerate().map(|(i, &c)| c * (i + 1) as f64).collect();
        ComplexPolynomial::new(coeffs).ok()
    }

    /// All `d` roots with multiplicity, by Durand–Kerner iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        durand_kerner(&self.coeffs)
    }

    /// Fixed points of `z ↦ p(z)`, i.e. roots of `p(z) − z`.
    pub fn fixed_point_approximations(&self) -> Vec<Complex64> {
        let mut g = self.coeffs.clone();
        if g.len() < 2 {
            g.resize(2, Complex64::new(0.0, 0.0));
        }
        g[1] -= 1.0;
        while g.len() > 1 && g.last() == Some(&Complex64::new(0.0, 0.0)) {
            g.pop();
        }
        durand_kerner(&g)
    }

    /// Distinct fixed points, clustered.
    pub fn distinct_fixed_points(&self) -> Vec<Complex64> {
        let mut g = self.coeffs.clone();
        if g.len() < 2 {
            g.resize(2, Complex64::new(0.0, 0.0));
        }
        g[1] -= 1.0;
        cluster_roots(&g, &self.fixed_point_approximations())
    }

    /// Whether `p` is `x` exactly when `z = x`, i.e. `p(z) − x = a_d (z − x)^d`.
    pub fn is_isolated_fixed_point(&self, x: Complex64) -> bool {
        let mut expected = binomial_expansion(self.leading(), x, self.degree());
        expected[0] += x;
        coefficients_match(&self.coeffs, &expected, COEFF_TOL * 1e2)
    }

    /// Fixed points with a preimage other than themselves.
    pub fn non_isolated_fixed_points(&self) -> Vec<Complex64> {
        self.distinct_fixed_points().into_iter().filter(|&x| !self.is_isolated_fixed_point(x)).collect()
    }

    /// `(α, β)` with `p(z) = α(z − β)^d + β`, within [`COEFF_TOL`].
    pub fn as_shifted_monomial(&self) -> Option<(Complex64, Complex64)> {
        let d = self.degree();
        if d < 2 {
            return None;
        }
        let alpha = self.leading();
        // coefficient of z^{d-1} is -dαβ
        let beta = -self.coeffs[d - 1] / (alpha * d as f64);
        let mut expected = binomial_expansion(alpha, beta, d);
        expected[0] += beta;
        coefficients_match(&self.coeffs, &expected, COEFF_TOL).then_some((alpha, beta))
    }

    /// Whether `p` is exactly `z^d`.
    pub fn is_pure_monomial(&self) -> bool {
        let d = self.degree();
        self.coeffs[..d].iter().all(|c| *c == Complex64::new(0.0, 0.0)) && self.coeffs[d] == Complex64::new(1.0, 0.0)
    }

    /// A linear `h(z) = αz + β` with `h ∘ q ∘ h⁻¹ = p` for
    /// `q(z) = z³ − z² + z`, if one exists within [`COEFF_TOL`].
    pub fn conjugacy_to_special_cubic(&self) -> Option<(Complex64, Complex64)> {
        if self.degree() != 3 {
            return None;
        }
        let a = &self.coeffs;
        let root = (Complex64::new(1.0, 0.0) / a[3]).sqrt();
        [root, -root].into_iter().find_map(|alpha| {
            let beta = -(a[2] + Complex64::new(1.0, 0.0) / alpha) * alpha * alpha / 3.0;
            let conj = conjugate_special_cubic(alpha, beta);
            coefficients_match(a, &conj, COEFF_TOL).then_some((alpha, beta))
        })
    }
}

/// Coefficients of `α q((w − β)/α) + β` for `q(u) = u³ − u² + u`.
fn conjugate_special_cubic(alpha: Complex64, beta: Complex64) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    // u = (w - β)/α as a linear polynomial [c0, c1]
    let u = [-beta / alpha, one / alpha];
    let mul = |p: &[Complex64], q: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
        for (i, &x) in p.iter().enumerate() {
            for (j, &y) in q.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let u2 = mul(&u, &u);
    let u3 = mul(&u2, &u);
    let mut out = vec![Complex64::new(0.0, 0.0); 4];
    for (i, c) in u3.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in u2.iter().enumerate() {
        out[i] -= c;
    }
    for (i, c) in u.iter().enumerate() {
        out[i] += c;
    }
    for c in &mut out {
        *c *= alpha;
    }
    out[0] += beta;
    out
}

/// Coefficients of `α(z − β)^d`.
fn binomial_expansion(alpha: Complex64, beta: Complex64, d: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut binom = 1.0f64;
    for k in 0..=d {
        // term z^k has coefficient α C(d,k) (−β)^{d−k}
        out.push(alpha * binom * (-beta).powu((d - k) as u32));
        binom = binom * (d - k) as f64 / (k + 1) as f64;
    }
    out
}

fn coefficients_match(actual: &[Complex64], expected: &[Complex64], tol: f64) -> bool {
    let len = actual.len().max(expected.len());
    let scale = actual.iter().chain(expected).map(|c| c.norm()).fold(1.0f64, f64::max);
    (0..len).all(|i| {
        let a = actual.get(i).copied().unwrap_or_default();
        let e = expected.get(i).copied().unwrap_or_default();
        (a - e).norm() <= tol * scale.max(a.norm())
    })
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    // Cauchy bound on root moduli
    let radius = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * (radius / 2.0).max(1.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom == Complex64::new(0.0, 0.0) {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Groups approximate roots of `g` into distinct roots.
///
/// Approximations within [`CLUSTER_TOL`] always merge. A multiple root is
/// only resolved to about `ε^{1/m}` by the iteration, so larger groups are
/// merged as well when `g` and its first `m − 1` derivatives nearly vanish
/// at their centre.
fn cluster_roots(g: &[Complex64], approx: &[Complex64]) -> Vec<Complex64> {
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &z in approx {
        match clusters.iter_mut().find(|c| c.iter().any(|w| (w - z).norm() <= CLUSTER_TOL)) {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    let poly = ComplexPolynomial::new(g.to_vec()).expect("nonzero");
    let centre = |c: &[Complex64]| c.iter().sum::<Complex64>() / c.len() as f64;
    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let (ci, cj) = (centre(&clusters[i]), centre(&clusters[j]));
                if (ci - cj).norm() > 1e-3 * (1.0 + ci.norm()) {
                    continue;
                }
                let joined: Vec<Complex64> = clusters[i].iter().chain(&clusters[j]).copied().collect();
                if is_multiple_root(&poly, centre(&joined), joined.len()) {
                    clusters[i] = joined;
                    clusters.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    clusters.iter().map(|c| centre(c)).collect()
}

fn is_multiple_root(p: &ComplexPolynomial, z: Complex64, m: usize) -> bool {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max) * (1.0 + z.norm()).powi(p.degree() as i32);
    let mut q = Some(p.clone());
    for _ in 0..m {
        match q {
            Some(ref poly) if poly.eval(z).norm() <= 1e-6 * scale => q = poly.derivative(),
            Some(_) => return false,
            None => return false,
        }
    }
    true
}

impl fmt::Display for ComplexPolynomial {
    /// Comma-separated coefficients, lowest degree first, each `re+imi`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", complex_text(*c))?;
        }
        Ok(())
    }
}

/// `re+imi`, with negative zero printed as zero.
pub fn complex_text(c: Complex64) -> String {
    format!("{}{:+}i", c.re + 0.0, c.im + 0.0)
}

impl FromStr for ComplexPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(|t| parse_complex(t.trim())).collect::<Result<Vec<_>>>()?;
        ComplexPolynomial::new(coeffs)
    }
}

/// Parses `re`, `imi`, `re+imi` or `re-imi`; a bare `i` means one.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidPolynomial(format!("cannot parse coefficient `{s}`"));
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// `d^p ≢ d (mod p²)` for every prime `p ≤ d`.
pub fn solar_criterion(d: u64) -> Result<bool> {
    if d < 2 {
        return Err(Error::DegreeTooLow(d as usize));
    }
    let base = BigUint::from(d);
    Ok(primes_up_to(d).into_iter().all(|p| {
        let m = BigUint::from(p * p);
        base.modpow(&BigUint::from(p), &m) != &base % &m
    }))
}

/// The first `count` degrees satisfying [`solar_criterion`].
pub fn first_solar(count: usize) -> Vec<u64> {
    (2u64..).filter(|&d| solar_criterion(d).expect("d >= 2")).take(count).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PolyRule {
    Quadratic,
    Solar,
    RiceDegree,
    PrimeOrder,
    CubicSpecial,
    ShiftedMonomialPrime,
}

impl PolyRule {
    pub const ALL: [PolyRule; 6] = [
        PolyRule::Quadratic,
        PolyRule::Solar,
        PolyRule::RiceDegree,
        PolyRule::PrimeOrder,
        PolyRule::CubicSpecial,
        PolyRule::ShiftedMonomialPrime,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PolyRule::Quadratic => "Quadratic",
            PolyRule::Solar => "Solar",
            PolyRule::RiceDegree => "RiceDegree",
            PolyRule::PrimeOrder => "PrimeOrder",
            PolyRule::CubicSpecial => "CubicSpecial",
            PolyRule::ShiftedMonomialPrime => "ShiftedMonomialPrime",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            PolyRule::Quadratic => "pullback of a complex quadratic polynomial: no iterative roots of any order n >= 2",
            PolyRule::Solar => "z^d with d^p != d (mod p^2) for all primes p <= d: no iterative roots of any order n >= 2",
            PolyRule::RiceDegree => "polynomial of degree d >= 2: no iterative roots of order n > d(d-1)",
            PolyRule::PrimeOrder => "polynomial of degree d >= 2: no iterative roots of prime order n > d",
            PolyRule::CubicSpecial => {
                "cubic with fewer than three distinct fixed points, not linearly conjugate to z^3-z^2+z: no iterative roots of any order n >= 2"
            }
            PolyRule::ShiftedMonomialPrime => "a(z-b)^d+b with d prime: no iterative roots of order d",
        }
    }
}

/// Orders a finding rules out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcludedOrders {
    All,
    Above(u64),
    PrimesAbove(u64),
    Pattern(OrderExclusion),
}

impl ExcludedOrders {
    pub fn excludes(&self, n: u64) -> bool {
        n >= 2
            && match self {
                ExcludedOrders::All => true,
                ExcludedOrders::Above(b) => n > *b,
                ExcludedOrders::PrimesAbove(b) => n > *b && is_prime(n),
                ExcludedOrders::Pattern(e) => e.excludes(n),
            }
    }
}

impl fmt::Display for ExcludedOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExcludedOrders::All => f.write_str("all n >= 2"),
            ExcludedOrders::Above(b) => write!(f, "n > {b}"),
            ExcludedOrders::PrimesAbove(b) => write!(f, "prime n > {b}"),
            ExcludedOrders::Pattern(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFinding {
    pub rule: PolyRule,
    /// The polynomial meets the rule's hypotheses.
    pub hypotheses_hold: bool,
    /// Hypotheses hold and the queried order is excluded.
    pub applicable: bool,
    pub excluded: ExcludedOrders,
    pub citation: &'static str,
    /// Set for the numeric rules.
    pub tolerance: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyAdvice {
    pub degree: usize,
    pub order: u64,
    /// One entry per [`PolyRule`], in [`PolyRule::ALL`] order.
    pub findings: Vec<PolyFinding>,
}

impl PolyAdvice {
    /// Findings that exclude the queried order.
    pub fn fired(&self) -> impl Iterator<Item = &PolyFinding> {
        self.findings.iter().filter(|f| f.applicable)
    }

    pub fn fires(&self, rule: PolyRule) -> bool {
        self.fired().any(|f| f.rule == rule)
    }

    pub fn excludes_order(&self) -> bool {
        self.fired().next().is_some()
    }
}

/// Evaluates every rule on `poly` for root order `n`.
///
/// Each finding also covers the pullback multifunction of `poly`.
pub fn advise(poly: &ComplexPolynomial, n: u64) -> Result<PolyAdvice> {
    let d = poly.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: n });
    }
    let du = d as u64;
    let mut findings = Vec::with_capacity(6);
    let mut push = |rule: PolyRule, holds: bool, excluded: ExcludedOrders, tolerance: Option<f64>, note: Option<String>| {
        findings.push(PolyFinding {
            rule,
            hypotheses_hold: holds,
            applicable: holds && excluded.excludes(n),
            excluded,
            citation: rule.citation(),
            tolerance,
            note,
        })
    };

    push(PolyRule::Quadratic, d == 2, ExcludedOrders::All, None, None);

    let solar = poly.is_pure_monomial() && solar_criterion(du)?;
    push(PolyRule::Solar, solar, ExcludedOrders::All, None, None);

    push(PolyRule::RiceDegree, true, ExcludedOrders::Above(du * (du - 1)), None, None);
    push(PolyRule::PrimeOrder, true, ExcludedOrders::PrimesAbove(du), None, None);

    let (cubic, note) = if d == 3 {
        let distinct = poly.distinct_fixed_points().len();
        let conj = poly.conjugacy_to_special_cubic();
        let note = format!(
            "{distinct} distinct fixed point(s) after clustering at {CLUSTER_TOL:e}; {}",
            if conj.is_some() { "conjugate to z^3-z^2+z" } else { "not conjugate to z^3-z^2+z" }
        );
        (distinct < 3 && conj.is_none(), Some(note))
    } else {
        (false, None)
    };
    push(PolyRule::CubicSpecial, cubic, ExcludedOrders::All, Some(COEFF_TOL), note);

    let shifted = if is_prime(du) { poly.as_shifted_monomial() } else { None };
    let note = shifted.map(|(a, b)| format!("alpha = {}, beta = {}", complex_text(a), complex_text(b)));
    push(
        PolyRule::ShiftedMonomialPrime,
        shifted.is_some(),
        ExcludedOrders::Pattern(OrderExclusion {
            lower_bound: du - 1,
            forbidden_divisor_max: Some(du - 1),
            source: ExclusionRule::ShiftedMonomial,
        }),
        Some(COEFF_TOL),
        note,
    );

    Ok(PolyAdvice { degree: d, order: n, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    const PAPER_SOLAR: [u64; 25] =
        [2, 3, 6, 11, 14, 15, 34, 39, 47, 58, 59, 66, 83, 86, 87, 95, 102, 103, 106, 111, 114, 119, 123, 139, 142];

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solar_values() {
        assert!(solar_criterion(2).unwrap());
        assert!(!solar_criterion(4).unwrap());
        assert!(solar_criterion(142).unwrap());
        assert!(solar_criterion(1).is_err());
        assert_eq!(first_solar(1), vec![2]);
        assert_eq!(first_solar(3), vec![2, 3, 6]);
        assert_eq!(first_solar(25), PAPER_SOLAR);
    }

    #[test]
    fn solar_matches_trial_oracle() {
        for d in 2..=200 {
            assert_eq!(solar_criterion(d).unwrap(), oracle::solar_by_trial(d), "d = {d}");
        }
    }

    #[test]
    fn advice_regressions() {
        let z2 = ComplexPolynomial::monomial(2);
        for n in 2..=12 {
            assert!(advise(&z2, n).unwrap().fires(PolyRule::Quadratic));
        }
        let a = advise(&ComplexPolynomial::monomial(5), 5).unwrap();
        assert!(a.fires(PolyRule::ShiftedMonomialPrime));
        assert!(!a.fires(PolyRule::Solar));
        assert_eq!(advise(&ComplexPolynomial::monomial(4), 2).unwrap().fired().count(), 0);
        assert_eq!(advise(&z2, 3).unwrap().findings.len(), 6);
    }

    #[test]
    fn advice_never_contradicts_power_roots() {
        // z^k is a root of order m of z^(k^m)
        for k in 2..=3usize {
            for m in 2..=3u32 {
                let d = k.pow(m);
                let a = advise(&ComplexPolynomial::monomial(d), m as u64).unwrap();
                assert_eq!(a.fired().count(), 0, "z^{d} order {m}");
            }
        }
        // (z-β)^2+β squared is (z-β)^4+β
        let p = ComplexPolynomial::shifted_monomial(c(1.0, 0.0), c(0.5, -1.0), 4).unwrap();
        assert_eq!(advise(&p, 2).unwrap().fired().count(), 0);
    }

    #[test]
    fn degree_errors() {
        let lin = ComplexPolynomial::from_real(&[1.0, 2.0]).unwrap();
        assert_eq!(advise(&lin, 2).unwrap_err(), Error::DegreeTooLow(1));
        assert!(ComplexPolynomial::from_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn rice_and_prime_orders() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 0.0, 3.0]).unwrap();
        let a = advise(&p, 7).unwrap();
        assert!(a.fires(PolyRule::RiceDegree) && a.fires(PolyRule::PrimeOrder));
        let a = advise(&p, 6).unwrap();
        assert!(!a.fires(PolyRule::RiceDegree) && !a.fires(PolyRule::PrimeOrder));
        assert!(advise(&p, 8).unwrap().fires(PolyRule::RiceDegree));
    }

    #[test]
    fn shifted_monomial_detection() {
        let p = ComplexPolynomial::shifted_monomial(c(2.0, 1.0), c(-0.3, 0.7), 5).unwrap();
        let (a, b) = p.as_shifted_monomial().unwrap();
        assert!((a - c(2.0, 1.0)).norm() < 1e-12 && (b - c(-0.3, 0.7)).norm() < 1e-12);
        assert!(advise(&p, 5).unwrap().fires(PolyRule::ShiftedMonomialPrime));
        let q = ComplexPolynomial::from_real(&[0.1, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(q.as_shifted_monomial().is_none());
        assert!(!advise(&q, 5).unwrap().fires(PolyRule::ShiftedMonomialPrime));
        let r = ComplexPolynomial::from_real(&[0.0, 1e-3, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(r.as_shifted_monomial().is_none());
    }

    #[test]
    fn shifted_monomial_non_isolated_count() {
        for d in [2usize, 3, 5, 7] {
            let p = ComplexPolynomial::shifted_monomial(c(1.5, -0.5), c(0.25, 0.5), d).unwrap();
            assert_eq!(p.distinct_fixed_points().len(), d, "degree {d}");
            assert_eq!(p.non_isolated_fixed_points().len(), d - 1, "degree {d}");
        }
    }

    #[test]
    fn special_cubic_and_conjugates() {
        let p = ComplexPolynomial::from_real(&[0.0, 1.0, -1.0, 1.0]).unwrap();
        // z^3 - z^2 = 0: a double fixed point at 0 and a simple one at 1
        assert_eq!(p.distinct_fixed_points().len(), 2);
        assert!(p.conjugacy_to_special_cubic().is_some());
        assert!(!advise(&p, 2).unwrap().fires(PolyRule::CubicSpecial));

        // h(z) = 2z + 1 conjugate of p
        let conj = ComplexPolynomial::new(conjugate_special_cubic(c(2.0, 0.0), c(1.0, 0.0))).unwrap();
        assert!(conj.conjugacy_to_special_cubic().is_some());

        // z^3: fixed points 0, 1, -1 are distinct
        let z3 = ComplexPolynomial::monomial(3);
        assert_eq!(z3.distinct_fixed_points().len(), 3);
        assert!(!advise(&z3, 2).unwrap().fires(PolyRule::CubicSpecial));

        // z^3 + z: p(z) - z = z^3, a triple fixed point
        let triple = ComplexPolynomial::from_real(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(triple.distinct_fixed_points().len(), 1);
        assert!(advise(&triple, 2).unwrap().fires(PolyRule::CubicSpecial));
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(parse_complex("0+1i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("3-4i").unwrap(), c(3.0, -4.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), c(1e-3, 2e-4));
        assert!(parse_complex("x").is_err());
        let p: ComplexPolynomial = "0,0,1".parse().unwrap();
        assert_eq!(p, ComplexPolynomial::monomial(2));
        assert_eq!(p.to_string(), "0+0i,0+0i,1+0i");
    }

    proptest! {
        #[test]
        fn display_round_trip(coeffs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..6)) {
            let mut cs: Vec<Complex64> = coeffs.into_iter().map(|(r, i)| c(r, i)).collect();
            cs.push(c(1.0, 0.0));
            let p = ComplexPolynomial::new(cs).unwrap();
            prop_assert_eq!(p.to_string().parse::<ComplexPolynomial>().unwrap(), p);
        }

        #[test]
        fn roots_are_roots(coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..7)) {
            let mut cs: Vec<Complex64> = coeffs.into_iter().map(|(r, i)| c(r, i)).collect();
            cs.push(c(1.0, 0.0));
            let p = ComplexPolynomial::new(cs).unwrap();
            let scale = p.coeffs().iter().map(|c| c.norm()).sum::<f64>();
            for z in p.roots() {
                prop_assert!(p.eval(z).norm() <= 1e-6 * scale * (1.0 + z.norm()).powi(p.degree() as i32));
            }
        }
    }
}
