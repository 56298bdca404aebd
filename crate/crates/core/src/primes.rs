//! Prime tables, `p`-adic valuations, prime-gap quantities and the
//! factorization of the part of an integer supported on primes `> k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper limit for [`coprime_part_factor`].
pub const DEFAULT_FACTOR_BOUND: u128 = 100_000_000_000_000;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes up to `limit` inclusive.
    pub fn sieve(limit: u64) -> Self {
        let lim = limit as usize;
        let mut composite = vec![false; lim + 1];
        let mut primes = Vec::new();
        for i in 2..=lim {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut m = i.saturating_mul(i);
            while m <= lim {
                composite[m] = true;
                m += i;
            }
        }
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, m: u64) -> bool {
        assert!(
            m <= self.limit,
            "{m} beyond prime table limit {}",
            self.limit
        );
        self.primes.binary_search(&m).is_ok()
    }

    /// Primes strictly below `n`, as a slice of the table.
    pub fn below(&self, n: u64) -> Result<&[u64]> {
        if n > self.limit + 1 {
            return Err(Error::TableTooSmall {
                limit: self.limit,
                needed: n - 1,
            });
        }
        let end = self.primes.partition_point(|&p| p < n);
        Ok(&self.primes[..end])
    }

    /// The two largest primes below `n`: `(p_t, p_{t-1})`.
    pub fn top_two_below(&self, n: u64) -> Result<(u64, u64)> {
        let below = self.below(n)?;
        match below {
            [.., q, p] => Ok((*p, *q)),
            _ => Err(Error::DeltaUndefined(n)),
        }
    }

    /// `delta(n) = n - p_{t-1}` where `p_t` is the largest prime below `n`.
    pub fn delta(&self, n: u64) -> Result<u64> {
        let (_, q) = self.top_two_below(n)?;
        Ok(n - q)
    }

    /// Second-largest prime below `n`.
    pub fn rho(&self, n: u64) -> Result<u64> {
        Ok(self.top_two_below(n)?.1)
    }
}

/// Stand-alone `delta(n)`; sieves up to `n`.
pub fn delta(n: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::DeltaUndefined(n));
    }
    PrimeTable::sieve(n).delta(n)
}

/// `p`-adic valuation; `Infinite` stands for the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `nu_p(m)` for a machine integer; zero is an error.
pub fn p_valuation(p: u64, m: i128) -> Result<u64> {
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::ZeroValuation);
    }
    let p = p as u128;
    let mut m = m.unsigned_abs();
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    Ok(r)
}

/// `nu_p(m)` for a big integer, with zero mapped to [`Valuation::Infinite`].
pub fn valuation(p: u64, m: &BigInt) -> Valuation {
    if m.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut m = m.clone();
    let mut r = 0;
    loop {
        let (q, rem) = m.div_rem(&p);
        if !rem.is_zero() {
            return Valuation::Finite(r);
        }
        m = q;
        r += 1;
    }
}

/// True iff `|m|` has no prime factor exceeding `k`.
pub fn smooth_check(m: &BigInt, k: u64) -> Result<bool> {
    if m.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut rest = m.abs();
    for p in PrimeTable::sieve(k).primes() {
        let p = BigInt::from(*p);
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
    }
    Ok(rest.is_one())
}

/// Exact statistics of consecutive prime gaps `d_t = p_{t+1} - p_t` over all
/// primes `p_t <= N`. The gap out of the last prime `<= N` is included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapStats {
    #[serde(rename = "N")]
    pub n: u64,
    pub sum_d2: u128,
    pub max_gap: u64,
    /// `(gap, count)` pairs, ascending by gap.
    pub histogram: Vec<(u64, u64)>,
}

impl GapStats {
    pub fn gap_count(&self) -> u64 {
        self.histogram.iter().map(|(_, c)| c).sum()
    }
}

pub fn gap_stats(n: u64) -> Result<GapStats> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "gap_stats needs N >= 3, got {n}"
        )));
    }
    // Bertrand: a prime lies in (N, 2N]
    let table = PrimeTable::sieve(2 * n);
    let primes = table.primes();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut sum_d2 = 0u128;
    let mut max_gap = 0;
    for w in primes.windows(2) {
        if w[0] > n {
            break;
        }
        let d = w[1] - w[0];
        sum_d2 += (d as u128) * (d as u128);
        max_gap = max_gap.max(d);
        *hist.entry(d).or_default() += 1;
    }
    Ok(GapStats {
        n,
        sum_d2,
        max_gap,
        histogram: hist.into_iter().collect(),
    })
}

/// The part of `base` supported on primes `> k`, i.e. the largest divisor of
/// `base` coprime to `k!`, as a list of `(p, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeFactorization {
    pub base: u128,
    pub k: u64,
    pub parts: Vec<(u64, u64)>,
}

impl CoprimeFactorization {
    /// `prod p_i^{e_i}`.
    pub fn value(&self) -> u128 {
        self.parts
            .iter()
            .map(|&(p, e)| (p as u128).pow(e as u32))
            .product()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|&(_, e)| e)
    }
}

/// Trial-division factorization of the `k`-rough part of `base`.
/// Inputs above `bound` are rejected.
pub fn coprime_part_factor(base: u128, k: u64, bound: u128) -> Result<CoprimeFactorization> {
    if base == 0 {
        return Err(Error::ZeroValuation);
    }
    if base > bound {
        return Err(Error::FactorBound { base, bound });
    }
    let mut rest = base;
    let mut parts = Vec::new();
    let mut strip = |p: u128, rest: &mut u128| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 && p as u64 > k {
            parts.push((p as u64, e));
        }
    };
    strip(2, &mut rest);
    strip(3, &mut rest);
    // 6m +- 1 wheel
    let mut d: u128 = 5;
    while d * d <= rest {
        strip(d, &mut rest);
        strip(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        strip(rest, &mut rest);
    }
    Ok(CoprimeFactorization { base, k, parts })
}

/// Complete factorization of `m >= 1` by trial division, ascending primes.
pub fn factor(m: u64) -> Vec<(u64, u64)> {
    let mut rest = m;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        let mut e = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(m: u64) -> bool {
        m >= 2
            && (2..m)
                .take_while(|d| d * d <= m)
                .all(|d| !m.is_multiple_of(d))
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(PrimeTable::sieve(10).primes(), &[2, 3, 5, 7]);
        assert_eq!(PrimeTable::sieve(2).primes(), &[2]);
        let t = PrimeTable::sieve(100);
        assert_eq!(t.primes().len(), 25);
        assert_eq!(*t.primes().last().unwrap(), 97);
        let t = PrimeTable::sieve(3000);
        for m in 0..=3000 {
            assert_eq!(t.is_prime(m), naive_is_prime(m), "{m}");
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(2, 12).unwrap(), 2);
        assert_eq!(p_valuation(7, 70).unwrap(), 1);
        assert_eq!(p_valuation(5, 7).unwrap(), 0);
        assert_eq!(p_valuation(3, -81).unwrap(), 4);
        assert_eq!(p_valuation(3, 0), Err(Error::ZeroValuation));
        assert_eq!(valuation(3, &BigInt::zero()), Valuation::Infinite);
        assert_eq!(valuation(2, &BigInt::from(-48)), Valuation::Finite(4));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(100).unwrap(), 11);
        assert_eq!(delta(6).unwrap(), 3);
        assert_eq!(delta(5).unwrap(), 3);
        assert_eq!(delta(4).unwrap(), 2);
        assert_eq!(delta(3), Err(Error::DeltaUndefined(3)));
        let t = PrimeTable::sieve(50);
        assert!(matches!(t.delta(60), Err(Error::TableTooSmall { .. })));
        assert_eq!(t.rho(100).ok(), None);
    }

    #[test]
    fn delta_against_naive_search() {
        let t = PrimeTable::sieve(5000);
        for n in 4..=5000u64 {
            let rho = (2..n).rev().filter(|&m| naive_is_prime(m)).nth(1).unwrap();
            assert_eq!(t.delta(n).unwrap(), n - rho, "n = {n}");
            assert_eq!(t.rho(n).unwrap(), rho);
            assert!(t.delta(n).unwrap() >= 2);
        }
    }

    #[test]
    fn gap_stats_examples() {
        let g = gap_stats(10).unwrap();
        assert_eq!(g.sum_d2, 25);
        assert_eq!(g.max_gap, 4);
        assert_eq!(g.histogram, vec![(1, 1), (2, 2), (4, 1)]);
        assert_eq!(gap_stats(3).unwrap().sum_d2, 5);
        assert!(gap_stats(2).is_err());
        let mut prev = 0;
        for n in 3..500 {
            let g = gap_stats(n).unwrap();
            assert!(g.sum_d2 >= g.gap_count() as u128);
            assert!(g.sum_d2 >= prev);
            prev = g.sum_d2;
        }
    }

    #[test]
    fn gap_stats_json_shape() {
        let g = gap_stats(10).unwrap();
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        assert_eq!(v["N"], 10);
        assert_eq!(v["sum_d2"], 25);
        assert_eq!(v["histogram"][0], serde_json::json!([1, 1]));
    }

    #[test]
    fn smooth_examples() {
        assert!(smooth_check(&BigInt::from(12), 3).unwrap());
        assert!(!smooth_check(&BigInt::from(10), 3).unwrap());
        assert!(smooth_check(&BigInt::from(1), 1).unwrap());
        assert!(smooth_check(&BigInt::from(-1), 5).unwrap());
        assert!(smooth_check(&BigInt::from(-1024), 2).unwrap());
        assert!(smooth_check(&BigInt::zero(), 2).is_err());
    }

    #[test]
    fn full_factor() {
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(2700), vec![(2, 2), (3, 3), (5, 2)]);
        assert_eq!(factor(97), vec![(97, 1)]);
        for m in 1..2000u64 {
            let back: u64 = factor(m).iter().map(|&(p, e)| p.pow(e as u32)).product();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn coprime_factor_examples() {
        let b = DEFAULT_FACTOR_BOUND;
        assert!(coprime_part_factor(54, 3, b).unwrap().parts.is_empty());
        assert_eq!(coprime_part_factor(2700, 4, b).unwrap().parts, vec![(5, 2)]);
        assert!(coprime_part_factor(1, 7, b).unwrap().parts.is_empty());
        assert_eq!(
            coprime_part_factor(2 * 11 * 11 * 13, 3, b).unwrap().parts,
            vec![(11, 2), (13, 1)]
        );
        // large prime cofactor
        let big = 99_999_999_977u128 * 8;
        assert_eq!(
            coprime_part_factor(big, 5, b).unwrap().parts,
            vec![(99_999_999_977, 1)]
        );
        assert!(matches!(
            coprime_part_factor(b + 1, 3, b),
            Err(Error::FactorBound { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn coprime_part_reconstructs(base in 1u128..10_000_000, k in 1u64..30) {
                let f = coprime_part_factor(base, k, DEFAULT_FACTOR_BOUND).unwrap();
                let v = f.value();
                prop_assert_eq!(base % v, 0);
                prop_assert!(f.parts.iter().all(|&(p, _)| p > k));
                let rest = BigInt::from(base / v);
                prop_assert!(smooth_check(&rest, k).unwrap());
            }

            #[test]
            fn valuation_is_additive(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
                                     r in 0u32..10, m in 1i64..1_000_000) {
                prop_assume!(m % p as i64 != 0);
                let scaled = (p as i128).pow(r) * m as i128;
                prop_assert_eq!(p_valuation(p, scaled).unwrap(), r as u64 + p_valuation(p, m as i128).unwrap());
                prop_assert_eq!(valuation(p, &BigInt::from(scaled)), Valuation::Finite(r as u64));
            }
        }
    }
}
