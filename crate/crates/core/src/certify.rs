//! Irreducibility certification for `F_{n,k}`.
//!
//! Criteria run cheapest first:
//!
//! 1. degree 1 and 2 are handled directly;
//! 2. Eisenstein at a prime `p > k` exactly dividing `n` (on the reciprocal)
//!    or `n - k`;
//! 3. the two-prime window `2 delta(n) < k < n - delta(n)`, using the two
//!    largest primes below `n`;
//! 4. `d = gcd(k, e_1, ..., e_r)` over the `k`-rough part of `n(n-k)`: every
//!    factor degree is a multiple of `k/d`, so `d = 1` settles it;
//! 5. when `d = 2`, a prime `> k` in `(n-1)(n-k+1)` whose exponent is not a
//!    multiple of `k-1`;
//! 6. the intersection of Newton-polygon degree sets over every prime `> k`
//!    dividing `n(n-1)...(n-k)`;
//! 7. mod-`p` degree patterns of the concrete polynomial.
//!
//! Steps 2 to 6 only use primes `> k`, at which every admissible multiplier
//! `a_j` is a unit, so they certify the whole family at once.
//!
//! The `d = 2` filter needs the `k`-rough part of `(n-1)(n-k+1)`; that is
//! the quantity its argument actually uses (the polygon at a prime dividing
//! `n-1` or `n-k+1`).

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::certificate::{Certificate, CertificateKind, Witness};
use crate::degree_set::DegreeSet;
use crate::error::{Error, Result};
use crate::modp::{modp_intersection, DEFAULT_PRIME_BUDGET};
use crate::newton::{dumas_degree_set, np_for_cj};
use crate::poly::{build_fnk, FnkSpec, Multipliers};
use crate::primes::{coprime_part_factor, CoprimeFactorization, PrimeTable, DEFAULT_FACTOR_BOUND};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Usable primes tried by the mod-`p` fallback.
    pub prime_budget: usize,
    /// Largest integer handed to trial division.
    pub factor_bound: u128,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            prime_budget: DEFAULT_PRIME_BUDGET,
            factor_bound: DEFAULT_FACTOR_BOUND,
        }
    }
}

/// Output of the gcd criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdReport {
    /// `gcd(k, e_1, ..., e_r)`; equals `k` when the rough part is `1`.
    pub d: u64,
    /// The `k`-rough part of `n(n-k)`.
    pub rough_part: CoprimeFactorization,
}

impl GcdReport {
    /// Factor degrees must be multiples of `k/d`.
    pub fn degree_set(&self, k: u64) -> DegreeSet {
        DegreeSet::multiples(k as usize, (k / self.d) as usize)
    }
}

/// Holds the prime table needed for `delta(n)` and runs the pipeline.
#[derive(Debug, Clone)]
pub struct Certifier {
    table: PrimeTable,
    options: CertifyOptions,
}

impl Certifier {
    /// Certifier able to handle every `n <= max_n`.
    pub fn new(max_n: u64, options: CertifyOptions) -> Self {
        Self {
            table: PrimeTable::sieve(max_n.max(2)),
            options,
        }
    }

    pub fn options(&self) -> &CertifyOptions {
        &self.options
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    fn rough(&self, base: u128, k: u64) -> Result<CoprimeFactorization> {
        coprime_part_factor(base, k, self.options.factor_bound)
    }

    /// Eisenstein at a prime `p > k` exactly dividing `n` (applied to
    /// `x^k F(1/x)`) or exactly dividing `n - k` (applied to `F`).
    pub fn thm2_eisenstein(&self, n: u64, k: u64) -> Result<Option<Certificate>> {
        check_range(n, k)?;
        let at_n = self.rough(n as u128, k)?;
        if let Some(&(p, _)) = at_n.parts.iter().find(|&&(_, e)| e == 1) {
            return Ok(Some(Certificate::new(
                CertificateKind::EisensteinN,
                vec![Witness::valuation(p, 1)],
            )));
        }
        let at_n_minus_k = self.rough((n - k) as u128, k)?;
        if let Some(&(p, _)) = at_n_minus_k.parts.iter().find(|&&(_, e)| e == 1) {
            return Ok(Some(Certificate::new(
                CertificateKind::EisensteinNminusK,
                vec![Witness::valuation(p, 1)],
            )));
        }
        Ok(None)
    }

    /// Two-prime argument with `p = p_t`, `q = p_{t-1}` the largest primes
    /// below `n`. Every inequality the argument needs is rechecked here.
    pub fn prime_gap_cert(&self, n: u64, k: u64) -> Result<Option<Certificate>> {
        check_range(n, k)?;
        if n < 4 {
            return Ok(None);
        }
        let (p, q) = self.table.top_two_below(n)?;
        let delta = n - q;
        if !(2 * delta < k && k + delta < n) {
            return Ok(None);
        }
        let (u, v) = (n - p, n - q);
        if !(p > k && q > k && u < v && k - v > u) {
            return Ok(None);
        }
        let at_p = dumas_degree_set(&np_for_cj(n, k, p)?);
        let at_q = dumas_degree_set(&np_for_cj(n, k, q)?);
        if !at_p.intersect(&at_q).is_trivial() {
            return Ok(None);
        }
        Ok(Some(
            Certificate::new(
                CertificateKind::PrimeGapWindow,
                vec![
                    Witness::valuation(p, 1).with_degrees(at_p),
                    Witness::valuation(q, 1).with_degrees(at_q),
                ],
            )
            .with_detail(format!("delta={delta} u={u} v={v}")),
        ))
    }

    /// `d = gcd(k, e_1, ..., e_r)` over the `k`-rough part of `n(n-k)`.
    pub fn lemma2_gcd(&self, n: u64, k: u64) -> Result<GcdReport> {
        check_range(n, k)?;
        let base = n as u128 * (n - k) as u128;
        let rough_part = self.rough(base, k)?;
        let d = rough_part.exponents().fold(k, num_integer::gcd);
        Ok(GcdReport { d, rough_part })
    }

    /// With `d = 2`, a reducible `F` splits into two factors of degree `k/2`.
    /// A prime `p > k` dividing `n-1` (or `n-k+1`) with exponent `e` gives a
    /// polygon with a width-one edge and an edge of width `k-1`, which is
    /// only compatible with that split when `(k-1) | e`.
    pub fn lemma3_filter(&self, n: u64, k: u64) -> Result<Option<Certificate>> {
        let report = self.lemma2_gcd(n, k)?;
        if report.d != 2 {
            return Err(Error::Precondition(format!(
                "d = 2 filter needs d = 2, got d = {} for n = {n}, k = {k}",
                report.d
            )));
        }
        let base = (n - 1) as u128 * (n - k + 1) as u128;
        let rough = self.rough(base, k)?;
        Ok(rough
            .parts
            .iter()
            .find(|&&(_, e)| e % (k - 1) != 0)
            .map(|&(p, e)| {
                Certificate::new(
                    CertificateKind::Lemma3Filter,
                    vec![Witness::valuation(p, e)],
                )
            }))
    }

    /// Intersects `start` with the polygon degree set of every prime `> k`
    /// dividing one of `n-k, ..., n`. Returns the narrowed set and the
    /// primes that narrowed it.
    pub fn dumas_intersection(
        &self,
        n: u64,
        k: u64,
        start: DegreeSet,
    ) -> Result<(DegreeSet, Vec<Witness>)> {
        check_range(n, k)?;
        let mut primes: Vec<(u64, u64)> = Vec::new();
        for j in 0..=k {
            primes.extend(self.rough((n - j) as u128, k)?.parts);
        }
        primes.sort_unstable();
        let mut set = start;
        let mut witnesses = Vec::new();
        for (p, e) in primes {
            if set.is_trivial() {
                break;
            }
            let at_p = dumas_degree_set(&np_for_cj(n, k, p)?);
            let narrowed = set.intersect(&at_p);
            if narrowed != set {
                witnesses.push(Witness::valuation(p, e).with_degrees(at_p));
                set = narrowed;
            }
        }
        Ok((set, witnesses))
    }

    /// Full pipeline for `F_{n,k}` with the given multipliers.
    /// `1 <= k <= n-1`; for `k = n-1` and composite `n` the all-ones
    /// polynomial is reducible and the result is `None`.
    pub fn certify(&self, n: u64, k: u64, multipliers: &Multipliers) -> Result<Certificate> {
        let spec = FnkSpec::with(n, k, multipliers)?;
        self.certify_spec(&spec)
    }

    pub fn certify_spec(&self, spec: &FnkSpec) -> Result<Certificate> {
        let (n, k) = (spec.n(), spec.k());
        if k == 1 {
            return Ok(Certificate::new(CertificateKind::Linear, Vec::new()));
        }
        if k == 2 {
            return Ok(quadratic(&build_fnk(spec)));
        }
        if let Some(c) = self.thm2_eisenstein(n, k)? {
            return Ok(c);
        }
        if let Some(c) = self.prime_gap_cert(n, k)? {
            return Ok(c);
        }
        let gcd = self.lemma2_gcd(n, k)?;
        let gcd_witnesses: Vec<Witness> = gcd
            .rough_part
            .parts
            .iter()
            .map(|&(p, e)| Witness::valuation(p, e))
            .collect();
        if gcd.d == 1 {
            return Ok(Certificate::new(
                CertificateKind::GcdCriterion,
                gcd_witnesses,
            ));
        }
        if gcd.d == 2 {
            if let Some(c) = self.lemma3_filter(n, k)? {
                return Ok(c);
            }
        }
        let (set, mut witnesses) = self.dumas_intersection(n, k, gcd.degree_set(k))?;
        if set.is_trivial() {
            if gcd.d < k {
                witnesses.splice(0..0, gcd_witnesses);
            }
            return Ok(
                Certificate::new(CertificateKind::DumasIntersection, witnesses)
                    .with_detail(format!("d={}", gcd.d)),
            );
        }
        let outcome = modp_intersection(&build_fnk(spec), self.options.prime_budget, set.clone());
        if outcome.certified() {
            return Ok(
                Certificate::new(CertificateKind::ModPIntersection, outcome.witnesses)
                    .with_detail(format!("family degree set {:?}", set.degrees())),
            );
        }
        Ok(Certificate::unresolved()
            .with_detail(format!("remaining degrees {:?}", outcome.degrees.degrees())))
    }
}

fn check_range(n: u64, k: u64) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange {
            n,
            k,
            reason: "need 1 <= k <= n-1",
        });
    }
    Ok(())
}

/// A quadratic is irreducible over the rationals iff its discriminant is not
/// a perfect square.
fn quadratic(f: &crate::poly::IntPoly) -> Certificate {
    let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
    let disc: BigInt = &b * &b - BigInt::from(4) * a * c;
    let square = !disc.is_negative() && {
        let r = disc.sqrt();
        &r * &r == disc
    };
    if square {
        Certificate::unresolved().with_detail(format!("discriminant {disc} is a square"))
    } else {
        Certificate::new(CertificateKind::Quadratic, Vec::new())
            .with_detail(format!("discriminant {disc}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::certify_modp;

    fn certifier(max_n: u64) -> Certifier {
        Certifier::new(max_n, CertifyOptions::default())
    }

    #[test]
    fn eisenstein_examples() {
        let c = certifier(50);
        let cert = c.thm2_eisenstein(5, 2).unwrap().unwrap();
        assert_eq!(cert.witnesses[0].prime, 5);
        assert!(c.thm2_eisenstein(9, 3).unwrap().is_none());
        for n in [7u64, 11, 13, 29, 31] {
            for k in 1..n {
                let cert = c.thm2_eisenstein(n, k).unwrap().unwrap();
                assert_eq!(cert.kind, CertificateKind::EisensteinN);
                assert_eq!(cert.witnesses[0].prime, n);
            }
        }
        // 10 - 3 = 7 exactly divides n - k, nothing > 3 exactly divides 10 except 5
        let cert = c.thm2_eisenstein(10, 3).unwrap().unwrap();
        assert_eq!(cert.kind, CertificateKind::EisensteinN);
        let cert = c.thm2_eisenstein(16, 5).unwrap().unwrap();
        assert_eq!(cert.kind, CertificateKind::EisensteinNminusK);
        assert_eq!(cert.witnesses[0].prime, 11);
    }

    #[test]
    fn eisenstein_is_a_single_edge_polygon() {
        let c = certifier(200);
        for n in 3..200u64 {
            for k in 1..n - 1 {
                if let Some(cert) = c.thm2_eisenstein(n, k).unwrap() {
                    let p = cert.witnesses[0].prime;
                    let np = np_for_cj(n, k, p).unwrap();
                    assert!(dumas_degree_set(&np).is_trivial(), "n={n} k={k} p={p}");
                    assert_eq!(np.edges().len(), 1);
                }
            }
        }
    }

    #[test]
    fn window_examples() {
        let c = certifier(100);
        let cert = c.prime_gap_cert(100, 50).unwrap().unwrap();
        assert_eq!(cert.kind, CertificateKind::PrimeGapWindow);
        assert_eq!(cert.witnesses[0].prime, 97);
        assert_eq!(cert.witnesses[1].prime, 89);
        assert_eq!(
            cert.witnesses[0].degrees.as_ref().unwrap().degrees(),
            vec![0, 3, 47, 50]
        );
        assert_eq!(
            cert.witnesses[1].degrees.as_ref().unwrap().degrees(),
            vec![0, 11, 39, 50]
        );
        assert!(c.prime_gap_cert(100, 12).unwrap().is_none());
        assert!(c.prime_gap_cert(100, 22).unwrap().is_none());
        assert!(c.prime_gap_cert(100, 23).unwrap().is_some());
        assert!(c.prime_gap_cert(100, 88).unwrap().is_some());
        assert!(c.prime_gap_cert(100, 89).unwrap().is_none());
        assert!(c.prime_gap_cert(3, 1).unwrap().is_none());
    }

    #[test]
    fn gcd_examples() {
        let c = certifier(100);
        let r = c.lemma2_gcd(11, 3).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.rough_part.parts, vec![(11, 1)]);
        let r = c.lemma2_gcd(54, 4).unwrap();
        assert_eq!(r.d, 2);
        assert_eq!(r.rough_part.parts, vec![(5, 2)]);
        let r = c.lemma2_gcd(9, 3).unwrap();
        assert_eq!(r.d, 3);
        assert!(r.rough_part.parts.is_empty());
    }

    #[test]
    fn even_split_filter_examples() {
        let c = certifier(100);
        let cert = c.lemma3_filter(54, 4).unwrap().unwrap();
        assert_eq!(cert.kind, CertificateKind::Lemma3Filter);
        // (n-1)(n-k+1) = 53 * 3 * 17; the smallest witness is reported
        assert_eq!(cert.witnesses[0].prime, 17);
        assert!(matches!(
            c.lemma3_filter(11, 3),
            Err(Error::Precondition(_))
        ));
        // n = 50, k = 4: 50*46 = 2*5^2 * 2*23 -> d = 1, not applicable
        assert!(c.lemma3_filter(50, 4).is_err());
    }

    #[test]
    fn even_split_filter_without_witness() {
        // search for a d = 2 pair whose (n-1)(n-k+1) has no prime > k with
        // exponent off a multiple of k-1
        let c = certifier(5000);
        for n in 6..5000u64 {
            for k in (4..n - 1).step_by(2).take(4) {
                if c.lemma2_gcd(n, k).unwrap().d != 2 {
                    continue;
                }
                let rough =
                    coprime_part_factor((n - 1) as u128 * (n - k + 1) as u128, k, u128::MAX)
                        .unwrap();
                let res = c.lemma3_filter(n, k).unwrap();
                let expect = rough.parts.iter().any(|&(_, e)| e % (k - 1) != 0);
                assert_eq!(res.is_some(), expect);
            }
        }
    }

    #[test]
    fn certify_examples() {
        let c = certifier(200);
        let ones = Multipliers::Ones;
        assert_eq!(
            c.certify(7, 3, &ones).unwrap().kind,
            CertificateKind::EisensteinN
        );
        let cert = c.certify(4, 2, &ones).unwrap();
        assert_eq!(cert.kind, CertificateKind::Quadratic);
        assert!(cert.detail.unwrap().contains("-8"));
        let cert = c.certify(100, 50, &ones).unwrap();
        assert_eq!(cert.kind, CertificateKind::PrimeGapWindow);
        assert_eq!(
            c.certify(9, 1, &ones).unwrap().kind,
            CertificateKind::Linear
        );
        assert!(c.certify(9, 9, &ones).is_err());
        // P_{n,n-1} for composite n is (x+1)^n - x^n, which is reducible
        assert_eq!(
            c.certify(9, 8, &ones).unwrap().kind,
            CertificateKind::Unresolved
        );
        assert_eq!(
            c.certify(11, 10, &ones).unwrap().kind,
            CertificateKind::EisensteinN
        );
    }

    #[test]
    fn certify_nine_three_falls_back() {
        let c = certifier(20);
        let cert = c.certify(9, 3, &Multipliers::Ones).unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.kind, CertificateKind::ModPIntersection);
    }

    fn multiplier_grid() -> Vec<(i64, i64, i64)> {
        let vals = [-16i64, -8, -4, -2, -1, 1, 2, 4, 8, 16];
        let mut out = Vec::new();
        for &a0 in &vals {
            for &a1 in &[1i64, 2, 4, 8] {
                for &a2 in &vals {
                    out.push((a0, a1, a2));
                }
            }
        }
        out
    }

    #[test]
    fn quadratic_with_square_discriminant_is_left_unresolved() {
        // F_{n,2} = a0 c0 + a1 c1 x + a2 c2 x^2 with c = (C(n-1,2), -n(n-2), C(n,2))
        // search over small 2-smooth multipliers for a reducible member
        let c = certifier(60);
        let mut seen_reducible = false;
        for n in 4..60u64 {
            for (a0, a1, a2) in multiplier_grid() {
                {
                    let m = Multipliers::Explicit(vec![a0.into(), a1.into(), a2.into()]);
                    let cert = c.certify(n, 2, &m).unwrap();
                    let f = build_fnk(&FnkSpec::with(n, 2, &m).unwrap());
                    if cert.kind == CertificateKind::Unresolved {
                        seen_reducible = true;
                        // a square discriminant means a rational root
                        assert!(certify_modp(&f, 25).is_none());
                    }
                }
            }
        }
        assert!(seen_reducible);
    }

    #[test]
    fn dumas_intersection_collects_primes() {
        let c = certifier(100);
        // n = 9, k = 3: only 7 | n - 2 above k; set {0,1,2,3}
        let (set, w) = c.dumas_intersection(9, 3, DegreeSet::full(3)).unwrap();
        assert_eq!(set.degrees(), vec![0, 1, 2, 3]);
        assert!(w.is_empty());
        let (set, w) = c.dumas_intersection(100, 50, DegreeSet::full(50)).unwrap();
        assert!(set.is_trivial());
        assert!(!w.is_empty());
    }
}
