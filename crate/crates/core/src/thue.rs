//! Bounded searches for the exceptional `n` left over when `k` is fixed.
//!
//! With `d = gcd(k, e_1, ..., e_r) >= 3` one has `n = a m1^d` and
//! `n - k = b m2^d` with `a, b` dividing `prod_{p <= k} p^(d-1)`, so `n` comes
//! from a solution of `a x^d - b y^d = k`. With `d = 2` and no filtering prime,
//! `n - 1 = a' x^(k-1)` and `n - k + 1 = b' y^(k-1)` with `a', b'` dividing
//! `prod_{p <= k} p^(k-2)`, i.e. `a' x^(k-1) - b' y^(k-1) = k - 2`.
//!
//! These equations have finitely many solutions, but nothing here proves
//! completeness: every scan reports the bound it actually covered.

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::CertificateKind;
use crate::certify::Certifier;
use crate::error::{Error, Result};
use crate::poly::Multipliers;
use crate::primes::{factor, PrimeTable};

/// Total `x` iterations the default bound aims for across one equation family.
const WORK_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThueCase {
    #[serde(rename = "ii")]
    Two,
    #[serde(rename = "iii")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThueSolution {
    pub x: u64,
    pub y: u64,
    /// The candidate `n` the solution produces.
    pub n: u128,
}

/// Solutions of `a x^d - b y^d = c` with `1 <= x, y <= bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThueScan {
    pub case: ThueCase,
    pub k: u64,
    pub d: u32,
    pub a: u128,
    pub b: u128,
    pub c: u128,
    /// Largest `x` actually examined (smaller than requested if `a x^d`
    /// would overflow 128 bits).
    pub bound: u64,
    pub solutions: Vec<ThueSolution>,
}

impl ThueScan {
    /// Re-substitutes every solution into its equation.
    pub fn verify(&self) -> bool {
        self.solutions.iter().all(|s| {
            let lhs = self.a * (s.x as u128).pow(self.d);
            let rhs = self.b * (s.y as u128).pow(self.d) + self.c;
            let n_ok = match self.case {
                ThueCase::Three => s.n == lhs,
                ThueCase::Two => s.n == lhs + 1,
            };
            lhs == rhs && n_ok
        })
    }
}

fn scaled_pow(coef: u128, base: u128, d: u32) -> Option<u128> {
    base.checked_pow(d)?.checked_mul(coef)
}

/// Two-pointer scan: as `x` grows, the `y` with `b y^d <= a x^d - c` only
/// grows, so each `y` is visited once. Returns the bound reached and the
/// solutions.
fn scan_equation(a: u128, b: u128, d: u32, c: u128, bound: u64) -> (u64, Vec<(u64, u64)>) {
    let mut sols = Vec::new();
    let mut y: u128 = 0;
    let mut reached = 0;
    for x in 1..=bound {
        let Some(ax) = scaled_pow(a, x as u128, d) else {
            break;
        };
        reached = x;
        if ax <= c {
            continue;
        }
        let t = ax - c;
        while scaled_pow(b, y + 1, d).is_some_and(|v| v <= t) {
            y += 1;
        }
        if y > bound as u128 {
            reached = bound;
            break;
        }
        if y >= 1 && scaled_pow(b, y, d) == Some(t) {
            sols.push((x, y as u64));
        }
    }
    (reached, sols)
}

/// Whether `m` divides `prod_{p <= k} p^e`.
fn divides_smooth_power(m: u128, k: u64, e: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut rest = m;
    for &p in PrimeTable::sieve(k).primes() {
        let mut count = 0;
        while rest.is_multiple_of(p as u128) {
            rest /= p as u128;
            count += 1;
        }
        if count > e {
            return false;
        }
    }
    rest == 1
}

/// All divisors of `prod_{p <= k} p^e` that fit in 128 bits, ascending.
pub fn smooth_divisors(k: u64, e: u64) -> Vec<u128> {
    let mut divs = vec![1u128];
    for &p in PrimeTable::sieve(k).primes() {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &dv in &divs {
            let mut v = Some(dv);
            for _ in 0..=e {
                let Some(x) = v else { break };
                next.push(x);
                v = x.checked_mul(p as u128);
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

/// Solutions of `a x^d - b y^d = k` with `x, y <= bound`, `n = a x^d`.
pub fn scan_case3(k: u64, d: u32, a: u128, b: u128, bound: u64) -> Result<ThueScan> {
    if d < 3 || !k.is_multiple_of(d as u64) {
        return Err(Error::ThueParams(format!(
            "need d >= 3 dividing k, got d = {d}, k = {k}"
        )));
    }
    for (name, v) in [("a", a), ("b", b)] {
        if !divides_smooth_power(v, k, d as u64 - 1) {
            return Err(Error::ThueParams(format!(
                "{name} = {v} does not divide prod_(p <= {k}) p^{}",
                d - 1
            )));
        }
    }
    let (reached, sols) = scan_equation(a, b, d, k as u128, bound);
    Ok(ThueScan {
        case: ThueCase::Three,
        k,
        d,
        a,
        b,
        c: k as u128,
        bound: reached,
        solutions: sols
            .into_iter()
            .map(|(x, y)| ThueSolution {
                x,
                y,
                n: a * (x as u128).pow(d),
            })
            .collect(),
    })
}

/// Solutions of `a' x^(k-1) - b' y^(k-1) = k - 2` with `x, y <= bound`,
/// `n = a' x^(k-1) + 1`.
pub fn scan_case2(k: u64, a: u128, b: u128, bound: u64) -> Result<ThueScan> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::ThueParams(format!("need even k >= 4, got {k}")));
    }
    for (name, v) in [("a'", a), ("b'", b)] {
        if !divides_smooth_power(v, k, k - 2) {
            return Err(Error::ThueParams(format!(
                "{name} = {v} does not divide prod_(p <= {k}) p^{}",
                k - 2
            )));
        }
    }
    let d = (k - 1) as u32;
    let (reached, sols) = scan_equation(a, b, d, (k - 2) as u128, bound);
    Ok(ThueScan {
        case: ThueCase::Two,
        k,
        d,
        a,
        b,
        c: (k - 2) as u128,
        bound: reached,
        solutions: sols
            .into_iter()
            .map(|(x, y)| ThueSolution {
                x,
                y,
                n: a * (x as u128).pow(d) + 1,
            })
            .collect(),
    })
}

/// Default search bound: `10^6` for cubes, `10^(18/d)` for higher degree,
/// shrunk so that `pairs * bound` stays near a fixed work budget.
pub fn default_bound(d: u32, pairs: usize) -> u64 {
    let per_degree = if d <= 3 {
        1_000_000
    } else {
        10f64.powf(18.0 / d as f64).floor() as u64
    };
    let budget = (WORK_BUDGET / pairs.max(1) as u64).max(100);
    per_degree.min(budget).max(1)
}

/// Every `(d, a, b)` with `d >= 3`, `d | k`, `a, b | prod_{p <= k} p^(d-1)`.
pub fn case3_parameters(k: u64) -> Vec<(u32, u128, u128)> {
    let mut out = Vec::new();
    for d in (3..=k).filter(|d| k.is_multiple_of(*d)) {
        let divs = smooth_divisors(k, d - 1);
        for &a in &divs {
            for &b in &divs {
                out.push((d as u32, a, b));
            }
        }
    }
    out
}

/// Every `(a', b')` dividing `prod_{p <= k} p^(k-2)`; empty unless `k` is even
/// and at least 4.
pub fn case2_parameters(k: u64) -> Vec<(u128, u128)> {
    if k < 4 || !k.is_multiple_of(2) {
        return Vec::new();
    }
    let divs = smooth_divisors(k, k - 2);
    divs.iter()
        .flat_map(|&a| divs.iter().map(move |&b| (a, b)))
        .collect()
}

/// Runs every case (iii) and case (ii) equation for `k`. A `bound` of `None`
/// uses [`default_bound`] per degree.
pub fn scan_all(k: u64, bound: Option<u64>) -> Result<Vec<ThueScan>> {
    if k < 3 {
        return Err(Error::ThueParams(format!("need k >= 3, got {k}")));
    }
    let p3 = case3_parameters(k);
    let mut per_d: std::collections::BTreeMap<u32, usize> = Default::default();
    for &(d, _, _) in &p3 {
        *per_d.entry(d).or_default() += 1;
    }
    let mut scans: Vec<ThueScan> = p3
        .par_iter()
        .map(|&(d, a, b)| {
            scan_case3(
                k,
                d,
                a,
                b,
                bound.unwrap_or_else(|| default_bound(d, per_d[&d])),
            )
        })
        .collect::<Result<_>>()?;
    let p2 = case2_parameters(k);
    let b2 = bound.unwrap_or_else(|| default_bound((k.max(2) - 1) as u32, p2.len()));
    let case2: Vec<ThueScan> = p2
        .par_iter()
        .map(|&(a, b)| scan_case2(k, a, b, b2))
        .collect::<Result<_>>()?;
    scans.extend(case2);
    Ok(scans)
}

/// `n = a m1^d`, `n - k = b m2^d` with `a, b | prod_{p <= k} p^(d-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerForm {
    pub a: u128,
    pub m1: u128,
    pub b: u128,
    pub m2: u128,
}

/// Splits `m` as `s * r^d` with `s | prod_{p <= k} p^(d-1)`. Fails when a
/// prime above `k` has exponent not divisible by `d`.
fn power_form_of(m: u64, k: u64, d: u64) -> Option<(u128, u128)> {
    let mut small = 1u128;
    let mut root = 1u128;
    for (p, e) in factor(m) {
        if p <= k {
            small *= (p as u128).pow((e % d) as u32);
            root *= (p as u128).pow((e / d) as u32);
        } else if e % d == 0 {
            root *= (p as u128).pow((e / d) as u32);
        } else {
            return None;
        }
    }
    Some((small, root))
}

/// The representation used by the `d >= 3` case, if it exists.
pub fn power_form(n: u64, k: u64, d: u64) -> Option<PowerForm> {
    let (a, m1) = power_form_of(n, k, d)?;
    let (b, m2) = power_form_of(n - k, k, d)?;
    Some(PowerForm { a, m1, b, m2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GcdCase {
    #[serde(rename = "i")]
    One,
    #[serde(rename = "ii")]
    Two,
    #[serde(rename = "iii")]
    Three,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N0Row {
    pub n: u64,
    pub d: u64,
    pub case: GcdCase,
    pub kind: CertificateKind,
    pub resolved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_form: Option<PowerForm>,
}

/// Classifies every `n` with `k + 2 <= n <= max_n` by `d` and records whether
/// the certifier (all-ones multipliers) settles it.
pub fn n0_scan(k: u64, max_n: u64, certifier: &Certifier) -> Result<Vec<N0Row>> {
    if k < 3 {
        return Err(Error::ThueParams(format!("need k >= 3, got {k}")));
    }
    (k + 2..=max_n)
        .into_par_iter()
        .map(|n| {
            let d = certifier.lemma2_gcd(n, k)?.d;
            let case = match d {
                1 => GcdCase::One,
                2 => GcdCase::Two,
                _ => GcdCase::Three,
            };
            let cert = certifier.certify(n, k, &Multipliers::Ones)?;
            Ok(N0Row {
                n,
                d,
                case,
                kind: cert.kind,
                resolved: cert.is_certified(),
                power_form: (d >= 3).then(|| power_form(n, k, d)).flatten(),
            })
        })
        .collect()
}
