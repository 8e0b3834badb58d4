//! Exponential-sum embedding: `π` goes to the grid of unit vectors at angles
//! `2π (π(k) - π(r)) / n`. Its distance is comparable to the median distance
//! `T1` of the cloud `{π(k) - τ(k)}` (`4 T1 <= dist <= 4π T1`).

use serde::Serialize;

use crate::error::{check_degrees, Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGrid<S> {
    n: usize,
    /// `(π(k) - π(r)) mod n`, row-major over `(k, r)`.
    steps: Vec<usize>,
    points: Vec<[S; 2]>,
}

impl<S: Scalar> PlanarGrid<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, k: usize, r: usize) -> [S; 2] {
        self.points[k * self.n + r]
    }

    pub fn entries(&self) -> &[[S; 2]] {
        &self.points
    }

    /// Angle of every entry in radians, row-major.
    pub fn angles(&self) -> Vec<S> {
        let unit = S::TAU() / S::from_count(self.n);
        self.steps
            .iter()
            .map(|&s| unit * S::from_count(s))
            .collect()
    }
}

pub fn phi1<S: Scalar>(p: &Permutation) -> PlanarGrid<S> {
    let n = p.n();
    let unit = S::TAU() / S::from_count(n);
    // one unit vector per residue, shared by all entries
    let circle: Vec<[S; 2]> = (0..n)
        .map(|s| {
            let theta = unit * S::from_count(s);
            [theta.cos(), theta.sin()]
        })
        .collect();
    let mut steps = Vec::with_capacity(n * n);
    for k in 0..n {
        for r in 0..n {
            steps.push((p.apply(k) + n - p.apply(r)) % n);
        }
    }
    let points = steps.iter().map(|&s| circle[s]).collect();
    PlanarGrid { n, steps, points }
}

/// `Σ_{k,r} |a(k,r) - b(k,r)|` with the planar Euclidean norm.
pub fn phi1_distance<S: Scalar>(a: &PlanarGrid<S>, b: &PlanarGrid<S>) -> Result<S> {
    check_degrees(a.n, b.n)?;
    Ok(a.points
        .iter()
        .zip(&b.points)
        .map(|(x, y)| (x[0] - y[0]).hypot(x[1] - y[1]))
        .sum())
}

/// Flattens a grid into `K` real coordinates per entry, `(π / 2K) <z, u_j>`
/// for `K` equally spaced directions on the half circle. The l1 distance of
/// two realizations approximates [`phi1_distance`] to within `O(K^-2)`.
pub fn phi1_realize<S: Scalar>(a: &PlanarGrid<S>, directions: usize) -> Result<Vec<S>> {
    if directions < 2 {
        return Err(Error::InvalidInput(format!(
            "at least 2 directions are needed, got {directions}"
        )));
    }
    let dirs = half_circle_directions::<S>(directions);
    let weight = S::PI() / (S::from_count(2 * directions));
    Ok(a.points
        .iter()
        .flat_map(|z| dirs.iter().map(move |u| weight * (z[0] * u[0] + z[1] * u[1])))
        .collect())
}

pub(crate) fn half_circle_directions<S: Scalar>(k: usize) -> Vec<[S; 2]> {
    (0..k)
        .map(|j| {
            let theta = S::PI() * S::from_count(j) / S::from_count(k);
            [theta.cos(), theta.sin()]
        })
        .collect()
}

pub fn l1_distance<S: Scalar>(x: &[S], y: &[S]) -> Result<S> {
    check_degrees(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(a, b)| (*a - *b).abs()).sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanarGridRecord<S> {
    pub n: usize,
    pub angles: Vec<S>,
}

impl<S: Scalar> From<&PlanarGrid<S>> for PlanarGridRecord<S> {
    fn from(g: &PlanarGrid<S>) -> Self {
        PlanarGridRecord {
            n: g.n,
            angles: g.angles(),
        }
    }
}
