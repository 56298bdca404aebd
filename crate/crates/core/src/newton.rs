//! Newton polygons with respect to a prime and the factor-degree
//! constraints they impose.
//!
//! The Newton polygon of `f = sum d_j x^j` at `p` is the lower convex hull of
//! the points `(j, nu_p(d_j))`. If `f = g h`, the polygon of `f` is made of
//! the edges of the polygons of `g` and `h` translated end to end, and every
//! translated edge starts and ends at lattice points. So the degree of any
//! factor is a sum of some of the minimal lattice-segment widths of `f`'s
//! polygon.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::degree_set::DegreeSet;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::primes::{valuation, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationPoint {
    pub j: usize,
    pub v: Valuation,
}

pub type LatticePoint = (usize, u64);

/// One hull edge between consecutive vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub start: LatticePoint,
    pub end: LatticePoint,
}

impl Edge {
    pub fn width(&self) -> usize {
        self.end.0 - self.start.0
    }

    pub fn rise(&self) -> i64 {
        self.end.1 as i64 - self.start.1 as i64
    }

    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(self.rise(), self.width() as i64)
    }

    /// Lattice points on the edge, endpoints included, in x order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let w = self.width() as i64;
        let r = self.rise();
        let g = w.gcd(&r);
        let (sx, sy) = (w / g, r / g);
        (0..=g)
            .map(|i| {
                (
                    (self.start.0 as i64 + i * sx) as usize,
                    (self.start.1 as i64 + i * sy) as u64,
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    prime: u64,
    vertices: Vec<LatticePoint>,
}

impl NewtonPolygon {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Degree of the underlying polynomial.
    pub fn degree(&self) -> usize {
        self.vertices.last().unwrap().0
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .windows(2)
            .map(|w| Edge {
                start: w[0],
                end: w[1],
            })
            .collect()
    }

    /// Whether `(j, v)` lies on or above the polygon; compared exactly.
    pub fn on_or_above(&self, j: usize, v: Valuation) -> bool {
        let Valuation::Finite(v) = v else {
            return true;
        };
        let edge = self
            .edges()
            .into_iter()
            .find(|e| e.start.0 <= j && j <= e.end.0)
            .expect("x outside polygon");
        // v >= y0 + (j - x0) * rise / width
        let lhs = (v as i128 - edge.start.1 as i128) * edge.width() as i128;
        let rhs = (j - edge.start.0) as i128 * edge.rise() as i128;
        lhs >= rhs
    }

    pub fn report(&self) -> PolygonReport {
        let degree_set = dumas_degree_set(self);
        PolygonReport {
            prime: self.prime,
            vertices: self.vertices.clone(),
            slopes: self
                .edges()
                .iter()
                .map(|e| {
                    let s = e.slope();
                    format!("{}/{}", s.numer(), s.denom())
                })
                .collect(),
            lattice_points: edge_lattice_points(self),
            degree_set: degree_set.degrees(),
            irreducible: degree_set.is_trivial(),
        }
    }
}

/// JSON view of a polygon, as printed by the `polygon` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct PolygonReport {
    pub prime: u64,
    pub vertices: Vec<LatticePoint>,
    pub slopes: Vec<String>,
    pub lattice_points: Vec<LatticePoint>,
    pub degree_set: Vec<usize>,
    pub irreducible: bool,
}

pub fn valuation_points(f: &IntPoly, p: u64) -> Vec<ValuationPoint> {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| ValuationPoint {
            j,
            v: valuation(p, c),
        })
        .collect()
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Lower convex hull of the finite valuation points. Collinear points are
/// dropped, so edge slopes strictly increase.
pub fn lower_hull(points: &[ValuationPoint], p: u64) -> Result<NewtonPolygon> {
    let mut pts: Vec<ValuationPoint> = points.to_vec();
    pts.sort_by_key(|pt| (pt.j, pt.v));
    pts.dedup_by_key(|pt| pt.j);
    let (Some(first), Some(last)) = (pts.first(), pts.last()) else {
        return Err(Error::TooFewPoints);
    };
    if first.j != 0 || first.v == Valuation::Infinite {
        return Err(Error::ZeroEndpoint(0));
    }
    if last.v == Valuation::Infinite {
        return Err(Error::ZeroEndpoint(last.j));
    }
    let finite: Vec<LatticePoint> = pts
        .iter()
        .filter_map(|pt| pt.v.finite().map(|v| (pt.j, v)))
        .collect();
    if finite.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(finite.len());
    for pt in finite {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon {
        prime: p,
        vertices: hull,
    })
}

/// Newton polygon of a concrete polynomial.
pub fn polygon_of(f: &IntPoly, p: u64) -> Result<NewtonPolygon> {
    lower_hull(&valuation_points(f, p), p)
}

/// Every lattice point on the polygon's edges, in x order.
pub fn edge_lattice_points(np: &NewtonPolygon) -> Vec<LatticePoint> {
    let mut out = vec![np.vertices[0]];
    for e in np.edges() {
        out.extend(e.lattice_points().into_iter().skip(1));
    }
    out
}

/// Degrees a factor may have: subset sums of the widths between consecutive
/// lattice points along the polygon.
pub fn dumas_degree_set(np: &NewtonPolygon) -> DegreeSet {
    let pts = edge_lattice_points(np);
    DegreeSet::from_subset_sums(np.degree(), pts.windows(2).map(|w| w[1].0 - w[0].0))
}

/// Polygon of `sum c_j x^j` (equivalently of any `F_{n,k}`) at a prime
/// `p > k`, read off from which of `n-k, ..., n` the prime divides.
///
/// The numerator of `c_j` is `(n-k)(n-k+1)...n` with `n-j` left out and its
/// denominator `j!(k-j)!` is prime to `p`, so if `p` divides `n - j0` with
/// exponent `e` then `nu_p(c_j)` is `e` for `j != j0` and `0` at `j0`.
/// Multipliers `a_j` built from primes `<= k` do not change this.
pub fn np_for_cj(n: u64, k: u64, p: u64) -> Result<NewtonPolygon> {
    if p <= k {
        return Err(Error::Precondition(format!(
            "prime {p} must exceed k = {k}"
        )));
    }
    if !is_small_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k >= n {
        return Err(Error::OutOfRange {
            n,
            k,
            reason: "need 1 <= k <= n-1",
        });
    }
    let k = k as usize;
    // p > k, so at most one of the k+1 consecutive integers is a multiple
    let hit = (0..=k).find(|&j| (n - j as u64).is_multiple_of(p));
    let vertices = match hit {
        None => vec![(0, 0), (k, 0)],
        Some(j0) => {
            let mut m = n - j0 as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if j0 == 0 {
                vec![(0, 0), (k, e)]
            } else if j0 == k {
                vec![(0, e), (k, 0)]
            } else {
                vec![(0, e), (j0, 0), (k, e)]
            }
        }
    };
    Ok(NewtonPolygon { prime: p, vertices })
}

fn is_small_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{build_fnk, FnkSpec};
    use crate::primes::PrimeTable;
    use num_bigint::BigInt;

    fn pts(v: &[(usize, u64)]) -> Vec<ValuationPoint> {
        v.iter()
            .map(|&(j, v)| ValuationPoint {
                j,
                v: Valuation::Finite(v),
            })
            .collect()
    }

    #[test]
    fn double_root_quadratic_example() {
        let f = IntPoly::from_i64s(&[4, 4, 1]);
        let np = polygon_of(&f, 2).unwrap();
        assert_eq!(np.vertices(), &[(0, 2), (2, 0)]);
        assert_eq!(edge_lattice_points(&np), vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(dumas_degree_set(&np).degrees(), vec![0, 1, 2]);
        // (1,1) is a lattice point but not a valuation point
        assert!(valuation_points(&f, 2)
            .iter()
            .all(|p| p.v != Valuation::Finite(1) || p.j != 1));
    }

    #[test]
    fn two_segment_shape() {
        // p = n - u with u = 2, k = 5
        let np = lower_hull(&pts(&[(0, 1), (1, 1), (2, 0), (3, 1), (4, 1), (5, 1)]), 7).unwrap();
        assert_eq!(np.vertices(), &[(0, 1), (2, 0), (5, 1)]);
        assert_eq!(edge_lattice_points(&np), vec![(0, 1), (2, 0), (5, 1)]);
        assert_eq!(dumas_degree_set(&np).degrees(), vec![0, 2, 3, 5]);
        let slopes: Vec<_> = np.edges().iter().map(Edge::slope).collect();
        assert_eq!(slopes, vec![Ratio::new(-1, 2), Ratio::new(1, 3)]);
    }

    #[test]
    fn linear_and_degenerate() {
        let np = lower_hull(&pts(&[(0, 3), (1, 0)]), 3).unwrap();
        assert_eq!(np.edges().len(), 1);
        assert_eq!(np.vertices().len(), 2);
        assert!(dumas_degree_set(&np).is_trivial());
        let zero_end = [
            ValuationPoint {
                j: 0,
                v: Valuation::Finite(1),
            },
            ValuationPoint {
                j: 1,
                v: Valuation::Infinite,
            },
        ];
        assert_eq!(lower_hull(&zero_end, 2), Err(Error::ZeroEndpoint(1)));
        let zero_start = [
            ValuationPoint {
                j: 0,
                v: Valuation::Infinite,
            },
            ValuationPoint {
                j: 1,
                v: Valuation::Finite(0),
            },
        ];
        assert_eq!(lower_hull(&zero_start, 2), Err(Error::ZeroEndpoint(0)));
        assert_eq!(lower_hull(&pts(&[(0, 1)]), 2), Err(Error::TooFewPoints));
    }

    #[test]
    fn interior_zero_coefficients_are_skipped() {
        // 8 + 0x + x^2 at p = 2: single edge (0,3) -> (2,0), no interior lattice point
        let np = polygon_of(&IntPoly::from_i64s(&[8, 0, 1]), 2).unwrap();
        assert_eq!(np.vertices(), &[(0, 3), (2, 0)]);
        assert!(dumas_degree_set(&np).is_trivial());
    }

    #[test]
    fn one_edge_lattice_spacing() {
        for k in 1..30usize {
            for e in 1..30u64 {
                let np = lower_hull(&pts(&[(0, 0), (k, e)]), 2).unwrap();
                let lp = edge_lattice_points(&np);
                // brute-force enumeration of integral points on the segment
                let brute: Vec<_> = (0..=k)
                    .filter(|&x| (x as u64 * e).is_multiple_of(k as u64))
                    .map(|x| (x, x as u64 * e / k as u64))
                    .collect();
                assert_eq!(lp, brute);
                let g = num_integer::gcd(k, e as usize);
                assert_eq!(dumas_degree_set(&np), DegreeSet::multiples(k, k / g));
            }
        }
    }

    #[test]
    fn np_for_cj_examples() {
        let np = np_for_cj(10, 3, 7).unwrap();
        assert_eq!(np.vertices(), &[(0, 1), (3, 0)]);
        assert_eq!(dumas_degree_set(&np).degrees(), vec![0, 3]);
        let direct = polygon_of(&build_fnk(&FnkSpec::ones(10, 3).unwrap()), 7).unwrap();
        assert_eq!(direct, np);

        // p | n
        let np = np_for_cj(25 * 3, 4, 5).unwrap();
        assert_eq!(np.vertices(), &[(0, 0), (4, 2)]);
        // p = n - u
        let np = np_for_cj(100, 50, 97).unwrap();
        assert_eq!(np.vertices(), &[(0, 1), (3, 0), (50, 1)]);
        assert_eq!(dumas_degree_set(&np).degrees(), vec![0, 3, 47, 50]);
        // p divides none of n-k..n
        let np = np_for_cj(30, 3, 11).unwrap();
        assert_eq!(np.vertices(), &[(0, 0), (3, 0)]);
        assert_eq!(dumas_degree_set(&np), DegreeSet::full(3));

        assert!(np_for_cj(30, 5, 5).is_err());
        assert!(np_for_cj(30, 5, 9).is_err());
    }

    #[test]
    fn np_for_cj_matches_hull_of_exact_coefficients() {
        let table = PrimeTable::sieve(60);
        for n in 3..=60u64 {
            for k in 1..n {
                let f = build_fnk(&FnkSpec::ones(n, k).unwrap());
                for &p in table.primes().iter().filter(|&&p| p > k && p <= n) {
                    let direct = polygon_of(&f, p).unwrap();
                    assert_eq!(np_for_cj(n, k, p).unwrap(), direct, "n={n} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn hull_property_on_random_like_polynomials() {
        let f = IntPoly::new(
            [96, 40, 18, 0, 250, 7, 1024, 3, 81]
                .iter()
                .map(|&c| BigInt::from(c))
                .collect(),
        );
        for p in [2, 3, 5, 7] {
            let np = polygon_of(&f, p).unwrap();
            for pt in valuation_points(&f, p) {
                assert!(np.on_or_above(pt.j, pt.v));
            }
            let slopes: Vec<_> = np.edges().iter().map(Edge::slope).collect();
            assert!(slopes.windows(2).all(|w| w[0] < w[1]));
            assert!(dumas_degree_set(&np).is_symmetric());
        }
    }

    #[test]
    fn report_formats_slopes() {
        let r = polygon_of(&IntPoly::from_i64s(&[4, 4, 1]), 2)
            .unwrap()
            .report();
        assert_eq!(r.slopes, vec!["-1/1".to_string()]);
        assert_eq!(r.degree_set, vec![0, 1, 2]);
        assert!(!r.irreducible);
    }
}
