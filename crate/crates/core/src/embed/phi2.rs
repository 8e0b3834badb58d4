//! Interval embedding that records `π^-1` on every circular interval but
//! forgets where the interval started.
//!
//! An interval is a pair `(start a, length len)` with `1 <= len <= n`; the
//! `n` rotations of the full circle count as distinct intervals. Its interior
//! at margin `m` is the set of points at distance `>= m` along the interval
//! from both endpoints. Intervals whose interior contains `0` are dropped and
//! every remaining interval adds `1/n` at the key `(len, list of π^-1 over J)`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{cycle_diam, Permutation};
use crate::scalar::Scalar;

/// Margin of the interior used to decide whether `0` drops an interval.
///
/// The default margin 1 makes the interior empty exactly for intervals of
/// length at most 2. Margin 2 (empty for length at most 4) is kept available
/// for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InteriorMargin(pub usize);

impl Default for InteriorMargin {
    fn default() -> Self {
        InteriorMargin(1)
    }
}

impl InteriorMargin {
    /// Whether `x` lies in the interior of the interval `[a, a + len - 1]`.
    #[inline]
    pub fn contains(self, n: usize, a: usize, len: usize, x: usize) -> bool {
        let i = (x + n - a) % n;
        let m = self.0;
        i < len && i >= m && i + m < len
    }

    #[inline]
    pub fn drops(self, n: usize, a: usize, len: usize) -> bool {
        self.contains(n, a, len, 0)
    }
}

#[inline]
pub fn interval_contains(n: usize, a: usize, len: usize, x: usize) -> bool {
    (x + n - a) % n < len
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntervalKey {
    pub values: Vec<u32>,
}

impl IntervalKey {
    /// `list(p^-1, J)` for `J = [a, a + len - 1]`, given `p^-1`.
    pub fn of_inverse(p_inv: &Permutation, a: usize, len: usize) -> Self {
        let n = p_inv.n();
        IntervalKey {
            values: (0..len).map(|i| p_inv.apply((a + i) % n) as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for IntervalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.len(), self.values)
    }
}

/// Finitely supported vector over [`IntervalKey`] coordinates, sorted by key,
/// with no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseL1Vector<S> {
    coords: Vec<(IntervalKey, S)>,
}

impl<S: Scalar> SparseL1Vector<S> {
    pub fn from_map(map: BTreeMap<IntervalKey, S>) -> Self {
        SparseL1Vector {
            coords: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn coords(&self) -> &[(IntervalKey, S)] {
        &self.coords
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }

    pub fn get(&self, key: &IntervalKey) -> S {
        self.coords
            .binary_search_by(|(k, _)| k.cmp(key))
            .map(|i| self.coords[i].1)
            .unwrap_or_else(|_| S::zero())
    }

    pub fn norm(&self) -> S {
        self.coords.iter().map(|(_, c)| c.abs()).sum()
    }
}

/// l1 norm of the difference, by a merge over the sorted coordinates.
pub fn phi2_distance<S: Scalar>(x: &SparseL1Vector<S>, y: &SparseL1Vector<S>) -> S {
    let (a, b) = (&x.coords, &y.coords);
    let (mut i, mut j) = (0, 0);
    let mut total = S::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                total = total + a[i].1.abs();
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                total = total + b[j].1.abs();
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                total = total + (a[i].1 - b[j].1).abs();
                i += 1;
                j += 1;
            }
        }
    }
    total = total + a[i..].iter().map(|(_, c)| c.abs()).sum::<S>();
    total + b[j..].iter().map(|(_, c)| c.abs()).sum::<S>()
}

pub fn phi2<S: Scalar>(p: &Permutation) -> SparseL1Vector<S> {
    phi2_with_margin(p, InteriorMargin::default())
}

pub fn phi2_with_margin<S: Scalar>(p: &Permutation, margin: InteriorMargin) -> SparseL1Vector<S> {
    let n = p.n();
    let p_inv = p.inverse();
    let weight = S::one() / S::from_count(n);
    let mut map = BTreeMap::new();
    for a in 0..n {
        for len in 1..=n {
            if margin.drops(n, a, len) {
                continue;
            }
            let key = IntervalKey::of_inverse(&p_inv, a, len);
            let slot = map.entry(key).or_insert_with(S::zero);
            *slot = *slot + weight;
        }
    }
    SparseL1Vector::from_map(map)
}

/// Number of intervals kept by the embedding; the mass of every image is this
/// count divided by `n`.
pub fn kept_interval_count(n: usize, margin: InteriorMargin) -> usize {
    (0..n)
        .flat_map(|a| (1..=n).map(move |len| (a, len)))
        .filter(|&(a, len)| !margin.drops(n, a, len))
        .count()
}

/// Counts intervals `J` with `J ∩ S` nonempty, `J ⊄ S`, and `0` outside the
/// interior of `J`.
pub fn count_separating_intervals(n: usize, set: &[usize], margin: InteriorMargin) -> Result<usize> {
    let mut member = vec![false; n];
    for &x in set {
        if x >= n {
            return Err(Error::InvalidInput(format!("point {x} out of range for degree {n}")));
        }
        member[x] = true;
    }
    let size = member.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::InvalidInput(
            "the set must be a nonempty proper subset of Z/n".into(),
        ));
    }
    let mut count = 0;
    for a in 0..n {
        let (mut inside, mut outside) = (false, false);
        for len in 1..=n {
            if member[(a + len - 1) % n] {
                inside = true;
            } else {
                outside = true;
            }
            if inside && outside && !margin.drops(n, a, len) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `(n / 4) diam({0} ∪ S)`, the guaranteed lower count for `|S| <= n / 3`.
pub fn separating_lower_bound(n: usize, set: &[usize]) -> f64 {
    let mut pts = set.to_vec();
    pts.push(0);
    (n as f64 / 4.0) * cycle_diam(n, &pts) as f64
}

/// Positions where `p^-1` and `q^-1` disagree after aligning by `shift`:
/// `{r : p^-1(r) ≠ q^-1(r - shift)}`.
pub fn difference_set(p: &Permutation, q: &Permutation, shift: usize) -> Vec<usize> {
    let n = p.n();
    let (p_inv, q_inv) = (p.inverse(), q.inverse());
    (0..n)
        .filter(|&r| p_inv.apply(r) != q_inv.apply((r + n - shift) % n))
        .collect()
}

/// An interval of `p` that meets but is not contained in the difference set,
/// whose key nevertheless appears among the keys of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub start: usize,
    pub len: usize,
    pub key: IntervalKey,
}

/// Checks that every interval `J` with `∅ ≠ J ∩ D ≠ J` produces a key of `p`
/// that no interval of `q` produces, where `D` is the difference set at
/// `shift`. Returns the first violation.
pub fn find_collapsed_coordinate(p: &Permutation, q: &Permutation, shift: usize) -> Option<Collision> {
    let n = p.n();
    let diff = difference_set(p, q, shift);
    let mut in_diff = vec![false; n];
    for &r in &diff {
        in_diff[r] = true;
    }
    let (p_inv, q_inv) = (p.inverse(), q.inverse());
    let q_keys: HashSet<IntervalKey> = (0..n)
        .flat_map(|a| (1..=n).map(move |len| (a, len)))
        .map(|(a, len)| IntervalKey::of_inverse(&q_inv, a, len))
        .collect();
    for a in 0..n {
        let (mut hit, mut miss) = (false, false);
        for len in 1..=n {
            if in_diff[(a + len - 1) % n] {
                hit = true;
            } else {
                miss = true;
            }
            if hit && miss {
                let key = IntervalKey::of_inverse(&p_inv, a, len);
                if q_keys.contains(&key) {
                    return Some(Collision { start: a, len, key });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct SparseRecord<S> {
    pub length: usize,
    pub values: Vec<u32>,
    pub coeff: S,
}

impl<S: Scalar> SparseL1Vector<S> {
    pub fn records(&self) -> Vec<SparseRecord<S>> {
        self.coords
            .iter()
            .map(|(k, c)| SparseRecord {
                length: k.len(),
                values: k.values.clone(),
                coeff: *c,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::factorial;

    fn all_perms(n: usize) -> Vec<Permutation> {
        (0..factorial(n).unwrap())
            .map(|r| Permutation::from_lehmer_rank(n, r).unwrap())
            .collect()
    }

    #[test]
    fn interior_membership() {
        let m1 = InteriorMargin(1);
        let m2 = InteriorMargin(2);
        // J = [3, 7] in Z/10, positions 0..4
        assert!(!m1.contains(10, 3, 5, 3));
        assert!(m1.contains(10, 3, 5, 4));
        assert!(m1.contains(10, 3, 5, 6));
        assert!(!m1.contains(10, 3, 5, 7));
        assert!(!m2.contains(10, 3, 5, 4));
        assert!(m2.contains(10, 3, 5, 5));
        assert!(!m1.contains(10, 3, 5, 8));
        // short intervals have empty interiors
        for a in 0..6 {
            for len in 1..=2 {
                assert!((0..6).all(|x| !m1.contains(6, a, len, x)));
            }
            for len in 1..=4 {
                assert!((0..6).all(|x| !m2.contains(6, a, len, x)));
            }
        }
    }

    #[test]
    fn mass_depends_only_on_degree() {
        for n in 1..=6 {
            for margin in [InteriorMargin(1), InteriorMargin(2)] {
                let expect = kept_interval_count(n, margin) as f64 / n as f64;
                for p in all_perms(n) {
                    let v = phi2_with_margin::<f64>(&p, margin);
                    assert!((v.norm() - expect).abs() < 1e-12);
                }
            }
        }
        // with margin 2 nothing is dropped on four points
        assert_eq!(kept_interval_count(4, InteriorMargin(2)), 16);
        let v = phi2_with_margin::<f64>(&Permutation::identity(4), InteriorMargin(2));
        assert!((v.norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn kept_count_closed_form() {
        // margin 1 drops, for each length len >= 3, the len - 2 starts putting 0 inside
        for n in 1..=12 {
            let dropped: usize = (3..=n).map(|len| len - 2).sum();
            assert_eq!(kept_interval_count(n, InteriorMargin(1)), n * n - dropped);
        }
    }

    #[test]
    fn distance_basics() {
        let p: Permutation = "3,1,4,0,2,5".parse().unwrap();
        let v = phi2::<f64>(&p);
        assert_eq!(phi2_distance(&v, &v), 0.0);
        let w = phi2::<f64>(&Permutation::identity(6));
        assert!((phi2_distance(&v, &w) - phi2_distance(&w, &v)).abs() < 1e-15);
        assert!(phi2_distance(&v, &w) > 0.0);
    }

    #[test]
    fn cycle_edge_is_at_most_two() {
        for n in 2..=6 {
            for p in all_perms(n) {
                let d = phi2_distance(&phi2::<f64>(&p), &phi2::<f64>(&p.rotate(1)));
                assert!(d <= 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn separating_interval_examples() {
        let m = InteriorMargin::default();
        let count = count_separating_intervals(8, &[3], m).unwrap();
        assert!(count as f64 >= separating_lower_bound(8, &[3]));
        assert_eq!(separating_lower_bound(8, &[3]), 6.0);
        for n in 3..=12 {
            for x in [1, n - 1] {
                let count = count_separating_intervals(n, &[x], m).unwrap();
                assert!(count as f64 >= n as f64 / 4.0);
            }
        }
        assert!(count_separating_intervals(4, &[], m).is_err());
        assert!(count_separating_intervals(3, &[0, 1, 2], m).is_err());
        assert!(count_separating_intervals(3, &[5], m).is_err());
    }

    #[test]
    fn separating_count_matches_brute_force() {
        let m = InteriorMargin::default();
        let n = 7;
        for mask in 1u32..(1 << n) - 1 {
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let mut brute = 0;
            for a in 0..n {
                for len in 1..=n {
                    let pts: Vec<usize> = (0..len).map(|i| (a + i) % n).collect();
                    let hit = pts.iter().any(|x| set.contains(x));
                    let all = pts.iter().all(|x| set.contains(x));
                    if hit && !all && !m.drops(n, a, len) {
                        brute += 1;
                    }
                }
            }
            assert_eq!(count_separating_intervals(n, &set, m).unwrap(), brute);
        }
    }

    #[test]
    fn important_coordinates_survive() {
        for n in 2..=5 {
            let perms = all_perms(n);
            for p in &perms {
                for q in &perms {
                    for shift in 0..n {
                        assert_eq!(find_collapsed_coordinate(p, q, shift), None);
                    }
                }
            }
        }
    }

    #[test]
    fn records_list_every_coordinate() {
        let v = phi2::<f64>(&Permutation::c(4));
        let recs = v.records();
        assert_eq!(recs.len(), v.nnz());
        assert!(recs.iter().all(|r| r.length == r.values.len() && r.coeff > 0.0));
    }
}
