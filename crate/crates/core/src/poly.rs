//! Dense integer polynomials and the truncated binomial families built on them.
//!
//! `P_{n,k}(x) = sum_{j<=k} C(n,j) x^j` is the first `k+1` terms of `(1+x)^n`.
//! Shifting by `x -> x-1` gives coefficients `c_j` with a closed form, and
//! `F_{n,k}(x) = sum a_j c_j x^j` generalizes it with `k`-smooth multipliers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::primes::smooth_check;

/// Exact binomial coefficient `C(n, j)`; zero when `j > n`.
pub fn binomial(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let j = j.min(n - j);
    let mut acc = BigInt::one();
    for i in 0..j {
        // acc * (n - i) is divisible by i + 1 at every step
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Polynomial with arbitrary-precision integer coefficients, ascending order.
///
/// The highest stored coefficient is nonzero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut poly = Self { coeffs };
        poly.normalize();
        poly
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^m`.
    pub fn monomial(c: BigInt, m: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[m] = c;
        Self::new(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigInt::from(j))
                .collect(),
        )
    }

    /// Returns `f(x + a)`, by Horner's scheme in the ring of polynomials.
    pub fn taylor_shift(&self, a: &BigInt) -> Self {
        let mut out: Vec<BigInt> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            // out <- out * (x + a) + c
            out.push(BigInt::zero());
            for i in (1..out.len()).rev() {
                let next = &out[i - 1] + &out[i] * a;
                out[i] = next;
            }
            out[0] = &out[0] * a + c;
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    fn exact_div_scalar(&self, d: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % d).is_zero());
                    c / d
                })
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `divisor`: the remainder of
    /// `lc(divisor)^(deg self - deg divisor + 1) * self` divided by `divisor`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dv = divisor.degree().expect("pseudo_rem by zero polynomial");
        let Some(du) = self.degree() else {
            return Self::zero();
        };
        if du < dv {
            return self.clone();
        }
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut steps = du - dv + 1;
        while rem.len() > dv && !rem.is_empty() {
            let top = rem.len() - 1;
            let t = rem[top].clone();
            let shift = top - dv;
            for c in rem.iter_mut() {
                *c *= lc;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &t * d;
            }
            debug_assert!(rem[top].is_zero());
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
            steps -= 1;
        }
        let mut out = Self::new(rem);
        if steps > 0 {
            out = out.scale(&num_traits::pow(lc.clone(), steps));
        }
        out
    }

    /// Greatest common divisor over the rationals, returned as a primitive
    /// integer polynomial with positive leading coefficient. Constant gcds
    /// come back as `1`.
    ///
    /// Uses the subresultant remainder sequence, which keeps intermediate
    /// coefficients from growing exponentially.
    pub fn primitive_gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = match (self.is_zero(), other.is_zero()) {
            (true, true) => return Self::zero(),
            (true, false) => return normalize_gcd(other.primitive_part()),
            (false, true) => return normalize_gcd(self.primitive_part()),
            _ => (self.primitive_part(), other.primitive_part()),
        };
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return normalize_gcd(b.primitive_part());
            }
            if r.degree() == Some(0) {
                return Self::one();
            }
            let divisor = &g * num_traits::pow(h.clone(), delta);
            a = b;
            b = r.exact_div_scalar(&divisor);
            g = a.leading().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
        }
    }

    /// Reciprocal polynomial `x^m f(1/x)` with `m` the degree.
    pub fn reciprocal(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }
}

fn normalize_gcd(g: IntPoly) -> IntPoly {
    if g.degree() == Some(0) {
        IntPoly::one()
    } else {
        g
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{self}]")
    }
}

/// Comma-separated ascending coefficients, `"3,-8,6"` for `3 - 8x + 6x^2`.
/// The zero polynomial prints as `"0"`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        s.split(',')
            .map(|tok| tok.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Self::new)
            .map_err(|_| Error::Parse(s.to_string()))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange {
            n,
            k,
            reason: "need 1 <= k <= n-1",
        });
    }
    Ok(())
}

/// `P_{n,k}(x) = sum_{j=0}^{k} C(n,j) x^j`.
pub fn build_pnk(n: u64, k: u64) -> Result<IntPoly> {
    check_nk(n, k)?;
    Ok(IntPoly::new((0..=k).map(|j| binomial(n, j)).collect()))
}

/// Coefficients `c_j = C(n,j) C(n-j-1,k-j) (-1)^(k-j)` of `P_{n,k}(x-1)`.
pub fn shifted_coeffs(n: u64, k: u64) -> Result<Vec<BigInt>> {
    check_nk(n, k)?;
    Ok((0..=k)
        .map(|j| {
            let c = binomial(n, j) * binomial(n - j - 1, k - j);
            if (k - j) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect())
}

/// Multiplier presets for `F_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multipliers {
    /// `a_j = 1`, i.e. `P_{n,k}(x-1)` itself.
    Ones,
    /// `a_j = (-1)^(k-j) j! (k-j)!`, whose reciprocal is proportional to
    /// `sum_i x^i / (n-k+i)`.
    Factorial,
    Explicit(Vec<BigInt>),
}

impl Multipliers {
    pub fn resolve(&self, k: u64) -> Vec<BigInt> {
        match self {
            Multipliers::Ones => vec![BigInt::one(); k as usize + 1],
            Multipliers::Factorial => {
                let fact: Vec<BigInt> = std::iter::once(BigInt::one())
                    .chain((1..=k).scan(BigInt::one(), |acc, i| {
                        *acc *= i;
                        Some(acc.clone())
                    }))
                    .collect();
                (0..=k as usize)
                    .map(|j| {
                        let v = &fact[j] * &fact[k as usize - j];
                        if (k as usize - j) % 2 == 1 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            }
            Multipliers::Explicit(a) => a.clone(),
        }
    }

    pub fn is_ones(&self) -> bool {
        matches!(self, Multipliers::Ones)
    }
}

/// Validated parameters of one `F_{n,k}`: `1 <= k <= n-1` and `k+1` nonzero
/// `k`-smooth multipliers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnkSpec {
    n: u64,
    k: u64,
    a: Vec<BigInt>,
}

impl FnkSpec {
    pub fn new(n: u64, k: u64, a: Vec<BigInt>) -> Result<Self> {
        check_nk(n, k)?;
        if a.len() != k as usize + 1 {
            return Err(Error::MultiplierCount {
                expected: k as usize + 1,
                got: a.len(),
            });
        }
        for (index, value) in a.iter().enumerate() {
            if value.is_zero() {
                return Err(Error::ZeroMultiplier { index });
            }
            if !smooth_check(value, k)? {
                return Err(Error::NotSmooth {
                    index,
                    value: value.clone(),
                    k,
                });
            }
        }
        Ok(Self { n, k, a })
    }

    pub fn with(n: u64, k: u64, multipliers: &Multipliers) -> Result<Self> {
        check_nk(n, k)?;
        Self::new(n, k, multipliers.resolve(k))
    }

    pub fn ones(n: u64, k: u64) -> Result<Self> {
        Self::with(n, k, &Multipliers::Ones)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn multipliers(&self) -> &[BigInt] {
        &self.a
    }
}

/// `F_{n,k}(x) = sum_j a_j c_j x^j`.
pub fn build_fnk(spec: &FnkSpec) -> IntPoly {
    let c = shifted_coeffs(spec.n, spec.k).expect("FnkSpec range already checked");
    IntPoly::new(c.iter().zip(&spec.a).map(|(c, a)| c * a).collect())
}

/// Checks `n P - (x+1) P' = n C(n-1,k) x^k` exactly.
pub fn verify_simple_roots_identity(n: u64, k: u64) -> Result<bool> {
    let p = build_pnk(n, k)?;
    let lhs = &p.scale(&BigInt::from(n)) - &(&IntPoly::from_i64s(&[1, 1]) * &p.derivative());
    let rhs = IntPoly::monomial(BigInt::from(n) * binomial(n - 1, k), k as usize);
    Ok(lhs == rhs)
}

/// Checks `sum_{j=0}^{a} C(b,j) (-1)^j = (-1)^a C(b-1,a)` for `0 <= a <= b`.
pub fn verify_alt_sum(a: u64, b: u64) -> Result<bool> {
    if a > b {
        return Err(Error::Precondition(format!(
            "need a <= b, got a = {a}, b = {b}"
        )));
    }
    let lhs: BigInt = (0..=a)
        .map(|j| {
            let c = binomial(b, j);
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .sum();
    // C(-1, 0) = 1 covers a = b = 0
    let tail = if b == 0 {
        BigInt::from(u8::from(a == 0))
    } else {
        binomial(b - 1, a)
    };
    let rhs = if a % 2 == 1 { -tail } else { tail };
    Ok(lhs == rhs)
}

/// The first identity that failed in [`run_identity_suites`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "identity")]
pub enum IdentityFailure {
    #[serde(rename = "alt_sum")]
    AltSum { a: u64, b: u64 },
    #[serde(rename = "shifted_coeffs")]
    ShiftedCoeffs { n: u64, k: u64 },
    #[serde(rename = "simple_roots")]
    SimpleRoots { n: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdentityReport {
    pub checked: u64,
    pub first_failure: Option<IdentityFailure>,
}

/// Runs the alternating-sum identity for `0 <= a <= b <= max_b`, and the
/// closed-form shift and simple-roots identities for `1 <= k < n <= max_n`.
/// Stops at the first failure.
pub fn run_identity_suites(max_b: u64, max_n: u64) -> Result<IdentityReport> {
    let mut checked = 0;
    let fail = |checked, f| {
        Ok(IdentityReport {
            checked,
            first_failure: Some(f),
        })
    };
    for b in 0..=max_b {
        for a in 0..=b {
            checked += 1;
            if !verify_alt_sum(a, b)? {
                return fail(checked, IdentityFailure::AltSum { a, b });
            }
        }
    }
    let minus_one = -BigInt::one();
    for n in 2..=max_n {
        for k in 1..n {
            checked += 1;
            let shifted = build_pnk(n, k)?.taylor_shift(&minus_one);
            if shifted != IntPoly::new(shifted_coeffs(n, k)?) {
                return fail(checked, IdentityFailure::ShiftedCoeffs { n, k });
            }
            checked += 1;
            if !verify_simple_roots_identity(n, k)? {
                return fail(checked, IdentityFailure::SimpleRoots { n, k });
            }
        }
    }
    Ok(IdentityReport {
        checked,
        first_failure: None,
    })
}
