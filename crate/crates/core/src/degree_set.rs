use std::fmt;

use serde::{Serialize, Serializer};

/// Degrees in `{0, ..., k}` that a factor of a degree-`k` polynomial may
/// still have. Always symmetric under `m -> k - m` and contains `0` and `k`;
/// equal to `{0, k}` exactly when irreducibility is forced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DegreeSet {
    k: usize,
    member: Vec<bool>,
}

impl DegreeSet {
    /// No constraint: every degree is possible.
    pub fn full(k: usize) -> Self {
        Self {
            k,
            member: vec![true; k + 1],
        }
    }

    /// `{0, k}`.
    pub fn trivial(k: usize) -> Self {
        let mut member = vec![false; k + 1];
        member[0] = true;
        member[k] = true;
        Self { k, member }
    }

    /// All subset sums of a multiset of positive lengths adding up to `k`.
    pub fn from_subset_sums<I: IntoIterator<Item = usize>>(k: usize, lengths: I) -> Self {
        let mut member = vec![false; k + 1];
        member[0] = true;
        let mut total = 0;
        for len in lengths {
            assert!(len > 0, "zero-length segment");
            total += len;
            assert!(total <= k, "segment lengths exceed {k}");
            for s in (len..=total).rev() {
                if member[s - len] {
                    member[s] = true;
                }
            }
        }
        assert_eq!(total, k, "segment lengths must sum to {k}");
        Self { k, member }
    }

    /// Multiples of `step`, which must divide `k`.
    pub fn multiples(k: usize, step: usize) -> Self {
        assert!(
            step > 0 && k.is_multiple_of(step),
            "{step} does not divide {k}"
        );
        let member = (0..=k).map(|m| m % step == 0).collect();
        Self { k, member }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contains(&self, m: usize) -> bool {
        self.member.get(m).copied().unwrap_or(false)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "degree sets for different degrees");
        Self {
            k: self.k,
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..=self.k).filter(|&m| self.member[m]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Only `0` and `k` remain: no proper factor is possible.
    pub fn is_trivial(&self) -> bool {
        self.member[1..self.k].iter().all(|b| !b)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..=self.k).all(|m| self.member[m] == self.member[self.k - m])
    }
}

impl fmt::Debug for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.degrees()).finish()
    }
}

impl Serialize for DegreeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.degrees().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_sums() {
        assert_eq!(
            DegreeSet::from_subset_sums(5, [2, 3]).degrees(),
            vec![0, 2, 3, 5]
        );
        assert_eq!(
            DegreeSet::from_subset_sums(2, [1, 1]).degrees(),
            vec![0, 1, 2]
        );
        assert!(DegreeSet::from_subset_sums(7, [7]).is_trivial());
        let s = DegreeSet::from_subset_sums(12, [4, 4, 4]);
        assert_eq!(s, DegreeSet::multiples(12, 4));
    }

    #[test]
    fn intersection() {
        let a = DegreeSet::from_subset_sums(50, [3, 47]);
        let b = DegreeSet::from_subset_sums(50, [11, 39]);
        let c = a.intersect(&b);
        assert!(c.is_trivial());
        assert_eq!(c, DegreeSet::trivial(50));
        assert!(DegreeSet::full(6).is_symmetric());
        assert!(!DegreeSet::full(6).is_trivial());
        assert!(DegreeSet::trivial(1).is_trivial());
    }

    #[test]
    #[should_panic]
    fn lengths_must_sum_to_k() {
        DegreeSet::from_subset_sums(5, [1, 2]);
    }
}
