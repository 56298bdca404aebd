use std::fmt;

use serde::Serialize;

use crate::degree_set::DegreeSet;

/// Which criterion proved irreducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CertificateKind {
    /// Degree one.
    Linear,
    /// Degree two with a discriminant that is not a perfect square.
    Quadratic,
    /// Eisenstein on the reciprocal at a prime `p > k` with `p || n`.
    EisensteinN,
    /// Eisenstein at a prime `p > k` with `p || n - k`.
    EisensteinNminusK,
    /// Two-prime Newton polygon argument for `2 delta(n) < k < n - delta(n)`.
    PrimeGapWindow,
    /// `gcd(k, e_1, ..., e_r) = 1` over the `k`-rough part of `n(n-k)`.
    GcdCriterion,
    /// The `d = 2` case ruled out by a prime `> k` in `(n-1)(n-k+1)` whose
    /// exponent is not a multiple of `k-1`.
    Lemma3Filter,
    /// Intersection of the degree sets of every prime `> k` dividing
    /// `n(n-1)...(n-k)`.
    DumasIntersection,
    /// Intersection of factor-degree patterns modulo small primes.
    ModPIntersection,
    #[serde(rename = "None")]
    Unresolved,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 10] = [
        CertificateKind::Linear,
        CertificateKind::Quadratic,
        CertificateKind::EisensteinN,
        CertificateKind::EisensteinNminusK,
        CertificateKind::PrimeGapWindow,
        CertificateKind::GcdCriterion,
        CertificateKind::Lemma3Filter,
        CertificateKind::DumasIntersection,
        CertificateKind::ModPIntersection,
        CertificateKind::Unresolved,
    ];

    /// Family-wide kinds only look at primes `> k`, where every admissible
    /// multiplier is a unit, so they hold for every `a`-vector at once.
    pub fn scope(self) -> Scope {
        match self {
            CertificateKind::Quadratic
            | CertificateKind::ModPIntersection
            | CertificateKind::Unresolved => Scope::PolynomialSpecific,
            _ => Scope::FamilyWide,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Linear => "Linear",
            CertificateKind::Quadratic => "Quadratic",
            CertificateKind::EisensteinN => "EisensteinN",
            CertificateKind::EisensteinNminusK => "EisensteinNminusK",
            CertificateKind::PrimeGapWindow => "PrimeGapWindow",
            CertificateKind::GcdCriterion => "GcdCriterion",
            CertificateKind::Lemma3Filter => "Lemma3Filter",
            CertificateKind::DumasIntersection => "DumasIntersection",
            CertificateKind::ModPIntersection => "ModPIntersection",
            CertificateKind::Unresolved => "None",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scope {
    FamilyWide,
    PolynomialSpecific,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::FamilyWide => "FamilyWide",
            Scope::PolynomialSpecific => "PolynomialSpecific",
        })
    }
}

/// A prime used by a criterion, with the relevant valuation when there is
/// one and the degree set it produced when it came from a polygon or a
/// mod-`p` pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Witness {
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreeSet>,
}

impl Witness {
    pub fn valuation(prime: u64, exponent: u64) -> Self {
        Self {
            prime,
            exponent: Some(exponent),
            degrees: None,
        }
    }

    pub fn with_degrees(mut self, degrees: DegreeSet) -> Self {
        self.degrees = Some(degrees);
        self
    }

    /// `p^e`, or just `p` for mod-`p` witnesses.
    pub fn token(&self) -> String {
        match self.exponent {
            Some(e) => format!("{}^{}", self.prime, e),
            None => self.prime.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub scope: Scope,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn new(kind: CertificateKind, witnesses: Vec<Witness>) -> Self {
        Self {
            kind,
            scope: kind.scope(),
            witnesses,
            detail: None,
        }
    }

    pub fn unresolved() -> Self {
        Self::new(CertificateKind::Unresolved, Vec::new())
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is_certified(&self) -> bool {
        self.kind != CertificateKind::Unresolved
    }

    /// Semicolon-joined witness tokens, as in the survey CSV.
    pub fn witness_tokens(&self) -> String {
        self.witnesses
            .iter()
            .map(Witness::token)
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scopes() {
        assert_eq!(
            CertificateKind::ModPIntersection.scope(),
            Scope::PolynomialSpecific
        );
        assert_eq!(CertificateKind::EisensteinN.scope(), Scope::FamilyWide);
        assert_eq!(CertificateKind::Unresolved.to_string(), "None");
        let json = serde_json::to_string(&CertificateKind::Unresolved).unwrap();
        assert_eq!(json, "\"None\"");
    }

    #[test]
    fn tokens() {
        let c = Certificate::new(
            CertificateKind::PrimeGapWindow,
            vec![Witness::valuation(97, 1), Witness::valuation(89, 1)],
        );
        assert_eq!(c.witness_tokens(), "97^1;89^1");
        let m = Certificate::new(
            CertificateKind::ModPIntersection,
            vec![Witness {
                prime: 3,
                exponent: None,
                degrees: None,
            }],
        );
        assert_eq!(m.witness_tokens(), "3");
    }
}
