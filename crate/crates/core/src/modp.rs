//! Factor-degree patterns of integer polynomials modulo small primes.
//!
//! If `f` reduces mod `p` to a squarefree polynomial of the same degree, the
//! degrees of the irreducible factors of `f` over the rationals are sums of
//! degrees of its factors mod `p`. Intersecting the feasible sets over
//! several primes can force irreducibility of one concrete polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::certificate::{Certificate, CertificateKind, Witness};
use crate::degree_set::DegreeSet;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const DEFAULT_PRIME_BUDGET: usize = 25;

/// Polynomial over `Z/pZ` with residues in `[0, p)`, ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!((2..(1 << 32)).contains(&p), "modulus {p} out of range");
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.normalize();
        poly
    }

    pub fn from_int(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.inv(self.leading());
        Self::new(
            self.p,
            self.coeffs.iter().map(|&c| self.mulm(c, inv)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..len).map(|i| self.get(i) + other.get(i)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..len)
                .map(|i| self.get(i) + self.p - other.get(i))
                .collect(),
        )
    }

    fn get(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dv = divisor.degree().expect("division by zero polynomial");
        let inv = self.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dv {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dv];
        for top in (dv..rem.len()).rev() {
            let t = self.mulm(rem[top], inv);
            if t == 0 {
                continue;
            }
            quot[top - dv] = t;
            let shift = top - dv;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let sub = self.mulm(t, d);
                rem[shift + i] = (rem[shift + i] + self.p - sub) % self.p;
            }
        }
        rem.truncate(dv);
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| self.mulm(c, j as u64 % self.p))
                .collect(),
        )
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly<{}>{:?}", self.p, self.coeffs)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// For each factor degree `d`, the total degree `t` of all irreducible
/// factors of degree `d` modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreePattern {
    pub p: u64,
    pub pattern: Vec<(usize, usize)>,
}

impl DegreePattern {
    pub fn total_degree(&self) -> usize {
        self.pattern.iter().map(|&(_, t)| t).sum()
    }

    /// Factor degrees as a sorted multiset.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .pattern
            .iter()
            .flat_map(|&(d, t)| std::iter::repeat_n(d, t / d))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Distinct-degree factorization of a squarefree polynomial mod `p`.
pub fn ddf_modpoly(f: &ModPoly) -> Result<DegreePattern> {
    let p = f.modulus();
    if f.degree().is_none_or(|d| d == 0) {
        return Ok(DegreePattern {
            p,
            pattern: Vec::new(),
        });
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(p));
    }
    let x = ModPoly::x(p);
    let mut g = f.monic();
    let mut h = x.clone();
    let mut pattern = Vec::new();
    let mut i = 1;
    while g.degree().unwrap() >= 2 * i {
        // h = x^(p^i) mod g
        h = h.pow_mod(p, &g);
        let d = g.gcd(&h.sub(&x));
        if d.degree().unwrap() > 0 {
            pattern.push((i, d.degree().unwrap()));
            g = g.div_rem(&d).0;
            h = h.rem(&g);
        }
        i += 1;
    }
    if let Some(dg) = g.degree().filter(|&d| d > 0) {
        pattern.push((dg, dg));
    }
    Ok(DegreePattern { p, pattern })
}

/// Distinct-degree factorization of `f mod p`. The prime must not divide the
/// leading coefficient and the reduction must be squarefree.
pub fn ddf(f: &IntPoly, p: u64) -> Result<DegreePattern> {
    let reduced = ModPoly::from_int(f, p);
    if reduced.degree() != f.degree() {
        return Err(Error::LeadingCoefficientDivisible(p));
    }
    ddf_modpoly(&reduced)
}

/// Every degree a rational factor may have given the pattern: choose between
/// `0` and `t/d` factors of each degree `d`.
pub fn feasible_degrees_modp(pattern: &DegreePattern) -> DegreeSet {
    DegreeSet::from_subset_sums(pattern.total_degree(), pattern.degree_multiset())
}

/// Result of running the mod-`p` intersection.
#[derive(Debug, Clone)]
pub struct ModpOutcome {
    pub degrees: DegreeSet,
    pub witnesses: Vec<Witness>,
}

impl ModpOutcome {
    pub fn certified(&self) -> bool {
        self.degrees.is_trivial()
    }
}

/// Intersects feasible degree sets over ascending usable primes, starting
/// from `start`, until the set is `{0, k}` or `prime_budget` primes have been
/// used. Primes dividing the leading coefficient or giving a non-squarefree
/// reduction are skipped. A polynomial with a square factor over `Q` has no
/// usable prime at all, so for it the search ends after a fixed number of
/// attempts.
pub fn modp_intersection(f: &IntPoly, prime_budget: usize, start: DegreeSet) -> ModpOutcome {
    let k = f.degree().unwrap_or(0);
    let mut outcome = ModpOutcome {
        degrees: start,
        witnesses: Vec::new(),
    };
    if k <= 1 || outcome.certified() {
        return outcome;
    }
    let mut used = 0;
    let mut p = 1u64;
    let max_tries = 20 * prime_budget + 200;
    for _ in 0..max_tries {
        if used >= prime_budget {
            break;
        }
        p = next_prime(p);
        let Ok(pattern) = ddf(f, p) else {
            continue;
        };
        used += 1;
        let feasible = feasible_degrees_modp(&pattern);
        let narrowed = outcome.degrees.intersect(&feasible);
        if narrowed != outcome.degrees {
            outcome.witnesses.push(Witness {
                prime: p,
                exponent: None,
                degrees: Some(feasible),
            });
            outcome.degrees = narrowed;
        }
        if outcome.certified() {
            break;
        }
    }
    outcome
}

/// Irreducibility certificate for one concrete polynomial, or `None` when the
/// budget runs out. `None` does not mean the polynomial is reducible.
pub fn certify_modp(f: &IntPoly, prime_budget: usize) -> Option<Certificate> {
    let k = f.degree()?;
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(Certificate::new(
            CertificateKind::ModPIntersection,
            Vec::new(),
        ));
    }
    let outcome = modp_intersection(f, prime_budget, DegreeSet::full(k));
    outcome
        .certified()
        .then(|| Certificate::new(CertificateKind::ModPIntersection, outcome.witnesses))
}

fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 1;
        if p >= 2
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d))
        {
            return p;
        }
    }
}

/// Complete factorization mod `p`: leading coefficient times monic
/// irreducible factors, sorted by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModFactorization {
    pub leading: u64,
    pub factors: Vec<ModPoly>,
}

impl ModFactorization {
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.factors.iter().map(|f| f.degree().unwrap()).collect();
        d.sort_unstable();
        d
    }
}

/// Exhaustive trial division by every monic polynomial of degree up to half
/// the input degree. Test oracle only: degree `<= 8`, `p <= 7`.
pub fn brute_factor_modp(f: &ModPoly) -> Result<ModFactorization> {
    let p = f.modulus();
    let deg = f
        .degree()
        .ok_or(Error::Precondition("cannot factor zero".into()))?;
    if deg > 8 || p > 7 {
        return Err(Error::BruteForceLimits { degree: deg, p });
    }
    let leading = f.leading();
    let mut rest = f.monic();
    let mut factors = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap() >= 2 * d {
        let mut divided = false;
        for cand in monic_polys(p, d) {
            let (q, r) = rest.div_rem(&cand);
            if r.is_zero() {
                factors.push(cand);
                rest = q;
                divided = true;
                break;
            }
        }
        // retry the same degree so repeated factors are caught
        if !divided {
            d += 1;
        }
    }
    if rest.degree().unwrap() > 0 {
        factors.push(rest);
    }
    Ok(ModFactorization { leading, factors })
}

fn monic_polys(p: u64, d: usize) -> impl Iterator<Item = ModPoly> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(idx % p);
            idx /= p;
        }
        coeffs.push(1);
        ModPoly::new(p, coeffs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn ddf_examples() {
        let pat = ddf(&ip(&[1, 1, 1]), 2).unwrap();
        assert_eq!(pat.pattern, vec![(2, 2)]);
        assert_eq!(ddf(&ip(&[1, 0, 1]), 2), Err(Error::NotSquarefree(2)));
        assert_eq!(ddf(&ip(&[1, 1, 0, 1]), 2).unwrap().pattern, vec![(3, 3)]);
        assert_eq!(
            ddf(&ip(&[1, 1, 2]), 2),
            Err(Error::LeadingCoefficientDivisible(2))
        );
        // x^3 - x = x(x-1)(x+1) mod 5
        assert_eq!(ddf(&ip(&[0, -1, 0, 1]), 5).unwrap().pattern, vec![(1, 3)]);
        // (x^2+1)(x-2) mod 3: x^2+1 irreducible mod 3
        let f = &ip(&[1, 0, 1]) * &ip(&[-2, 1]);
        assert_eq!(ddf(&f, 3).unwrap().pattern, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn feasible_examples() {
        let k2 = DegreePattern {
            p: 2,
            pattern: vec![(2, 2)],
        };
        assert_eq!(feasible_degrees_modp(&k2).degrees(), vec![0, 2]);
        let mixed = DegreePattern {
            p: 3,
            pattern: vec![(1, 1), (2, 2)],
        };
        assert_eq!(feasible_degrees_modp(&mixed).degrees(), vec![0, 1, 2, 3]);
        let cubic = DegreePattern {
            p: 2,
            pattern: vec![(3, 3)],
        };
        assert_eq!(feasible_degrees_modp(&cubic).degrees(), vec![0, 3]);
    }

    #[test]
    fn certify_examples() {
        let c = certify_modp(&ip(&[1, 1, 1]), 1).unwrap();
        assert_eq!(c.witnesses[0].prime, 2);
        let product = &ip(&[1, 0, 1]) * &ip(&[2, 0, 1]);
        assert!(certify_modp(&product, 25).is_none());
        assert!(certify_modp(&ip(&[3, 5]), 0).is_some());
        assert!(certify_modp(&ip(&[7]), 5).is_none());
        // squares are rejected up front
        let sq = &ip(&[1, 1, 1]) * &ip(&[1, 1, 1]);
        assert!(certify_modp(&sq, 25).is_none());
        // x^4 + 1 is reducible mod every prime but irreducible over Q
        assert!(certify_modp(&ip(&[1, 0, 0, 0, 1]), 50).is_none());
        assert!(certify_modp(&ip(&[-2, 0, 0, 0, 0, 1]), 25).is_some());
    }

    #[test]
    fn brute_examples() {
        let f = ModPoly::from_int(&ip(&[4, 4, 1]), 2);
        let fact = brute_factor_modp(&f).unwrap();
        assert_eq!(fact.factors, vec![ModPoly::x(2), ModPoly::x(2)]);
        let g = ModPoly::new(2, vec![1, 1, 1]);
        assert_eq!(brute_factor_modp(&g).unwrap().factors, vec![g.clone()]);
        let x = ModPoly::x(5);
        assert_eq!(brute_factor_modp(&x).unwrap().factors, vec![x.clone()]);
        let big = ModPoly::new(11, vec![1, 1]);
        assert!(matches!(
            brute_factor_modp(&big),
            Err(Error::BruteForceLimits { .. })
        ));
        let deg9 = ModPoly::new(2, vec![1; 10]);
        assert!(brute_factor_modp(&deg9).is_err());
    }

    #[test]
    fn modpoly_arithmetic() {
        let p = 7;
        let a = ModPoly::new(p, vec![3, 0, 5, 1]);
        let b = ModPoly::new(p, vec![6, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().is_none_or(|d| d < 1));
        let x = ModPoly::x(p);
        let m = ModPoly::new(p, vec![1, 0, 0, 1]);
        // x^7 mod (x^3 + 1) = x^(7 mod 6) * (-1)^(7 div 3) ... compare with repeated multiply
        let mut slow = ModPoly::one(p);
        for _ in 0..7 {
            slow = slow.mul(&x).rem(&m);
        }
        assert_eq!(x.pow_mod(7, &m), slow);
    }
}
