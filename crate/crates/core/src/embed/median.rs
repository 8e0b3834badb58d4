//! Medians and average distances of point clouds on the cycle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::cycle_dist;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MedianMin {
    pub value: usize,
    pub argmin: usize,
}

fn check_cloud(n: usize, cloud: &[usize]) -> Result<()> {
    if cloud.is_empty() {
        return Err(Error::InvalidInput("empty cloud".into()));
    }
    if let Some(&x) = cloud.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidInput(format!("point {x} out of range for degree {n}")));
    }
    Ok(())
}

fn total_distance(n: usize, cloud: &[usize], l: usize) -> usize {
    cloud.iter().map(|&x| cycle_dist(n, x, l)).sum()
}

/// `min_l Σ_x d(x, l)` over all `l ∈ Z/n`, with the smallest minimizer.
pub fn median_min(n: usize, cloud: &[usize]) -> Result<MedianMin> {
    check_cloud(n, cloud)?;
    let (argmin, value) = (0..n)
        .map(|l| (l, total_distance(n, cloud, l)))
        .min_by_key(|&(l, v)| (v, l))
        .expect("n >= 1");
    Ok(MedianMin { value, argmin })
}

/// The same minimum restricted to candidates taken from the cloud.
pub fn median_min_in_cloud(n: usize, cloud: &[usize]) -> Result<MedianMin> {
    check_cloud(n, cloud)?;
    let (argmin, value) = cloud
        .iter()
        .map(|&l| (l, total_distance(n, cloud, l)))
        .min_by_key(|&(l, v)| (v, l))
        .expect("nonempty");
    Ok(MedianMin { value, argmin })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvgVsMin<S> {
    pub avg_pair: S,
    pub min_avg: S,
    pub holds: bool,
}

/// Compares the average pairwise distance of a cloud with the smallest
/// average distance from one of its points: `avg / 2 <= min_avg <= avg`.
/// The verdict is decided in integers.
pub fn avg_vs_min_check<S: Scalar>(n: usize, cloud: &[usize]) -> Result<AvgVsMin<S>> {
    check_cloud(n, cloud)?;
    let m = cloud.len();
    let row_sums: Vec<usize> = cloud.iter().map(|&x| total_distance(n, cloud, x)).collect();
    let pair_sum: usize = row_sums.iter().sum();
    let min_row = *row_sums.iter().min().expect("nonempty");
    // avg_pair = pair_sum / m^2, min_avg = min_row / m
    let holds = pair_sum <= 2 * m * min_row && m * min_row <= pair_sum;
    Ok(AvgVsMin {
        avg_pair: S::from_count(pair_sum) / S::from_count(m * m),
        min_avg: S::from_count(min_row) / S::from_count(m),
        holds,
    })
}
