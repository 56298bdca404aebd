//! Root simplicity of each `P_{n,k}` and root disjointness across `k` for a
//! fixed `n`, decided by exact polynomial gcds.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::poly::build_pnk;

/// True iff `P_{n,k}` and its derivative are coprime.
pub fn simple_roots_check(n: u64, k: u64) -> Result<bool> {
    let p = build_pnk(n, k)?;
    Ok(p.primitive_gcd(&p.derivative()).degree() == Some(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistinctRootsReport {
    pub n: u64,
    pub all_distinct: bool,
    /// `(k, k', deg gcd)` for every pair sharing a root.
    pub offending_pairs: Vec<(u64, u64, usize)>,
    /// Pairs whose `P_{n,k}` has a repeated root.
    pub non_simple: Vec<u64>,
    /// Number of distinct roots over `k = 1..n-1`; only filled in when every
    /// polynomial has simple roots and no pair shares a root.
    pub distinct_roots: Option<u64>,
}

/// Checks `gcd(P_{n,k}, P_{n,k'}) = 1` for all `1 <= k < k' <= n-1`.
pub fn pairwise_distinct_check(n: u64) -> Result<DistinctRootsReport> {
    if n < 2 {
        return Err(crate::Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let polys = (1..n)
        .map(|k| build_pnk(n, k))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..polys.len())
        .flat_map(|i| (i + 1..polys.len()).map(move |j| (i, j)))
        .collect();
    let offending_pairs: Vec<(u64, u64, usize)> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let g = polys[i].primitive_gcd(&polys[j]);
            let d = g.degree().unwrap_or(0);
            (d > 0).then_some((i as u64 + 1, j as u64 + 1, d))
        })
        .collect();
    let non_simple: Vec<u64> = polys
        .par_iter()
        .enumerate()
        .filter(|(_, p)| p.primitive_gcd(&p.derivative()).degree() != Some(0))
        .map(|(i, _)| i as u64 + 1)
        .collect();
    let all_distinct = offending_pairs.is_empty();
    let distinct_roots = (all_distinct && non_simple.is_empty())
        .then(|| polys.iter().map(|p| p.degree().unwrap() as u64).sum());
    Ok(DistinctRootsReport {
        n,
        all_distinct,
        offending_pairs,
        non_simple,
        distinct_roots,
    })
}
