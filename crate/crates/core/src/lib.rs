//! Exact construction of truncated binomial expansions
//! `P_{n,k}(x) = sum_{j<=k} C(n,j) x^j`, their multiplier generalizations
//! `F_{n,k}`, and irreducibility certificates for them built from Newton
//! polygons, Eisenstein's criterion and mod-`p` degree patterns.

pub mod certificate;
pub mod certify;
pub mod cli;
pub mod degree_set;
pub mod error;
pub mod modp;
pub mod newton;
pub mod poly;
pub mod primes;
pub mod roots;
pub mod survey;
pub mod thue;

pub use certificate::{Certificate, CertificateKind, Scope, Witness};
pub use certify::{Certifier, CertifyOptions, GcdReport};
pub use degree_set::DegreeSet;
pub use error::{Error, Result};
pub use modp::{DegreePattern, ModPoly};
pub use newton::NewtonPolygon;
pub use poly::{FnkSpec, IntPoly, Multipliers};
pub use primes::{PrimeTable, Valuation};
pub use survey::{run_survey, SurveyOptions, SurveyRecord};
