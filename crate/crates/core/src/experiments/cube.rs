//! The Hamming cube `{0,1}^n` inside `Sym_{4n²}`: bit `i` selects the
//! transposition `(i, i+n)`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{DistanceTable, FormulaEvaluator, DEFAULT_BFS_LIMIT};
use crate::perm::Permutation;
use crate::scalar::Scalar;

use super::VERSION;

/// Bit vectors are stored as `Vec<bool>` and printed as `0`/`1` strings.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bit vectors use 0 and 1, found {other:?}"))),
        })
        .collect()
}

pub fn cube_degree(n: usize) -> usize {
    4 * n * n
}

pub fn hamming_embed(n: usize, eps: &[bool]) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidInput("cube dimension must be positive".into()));
    }
    if eps.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} bits, got {}",
            eps.len()
        )));
    }
    let mut images: Vec<usize> = (0..cube_degree(n)).collect();
    for (i, _) in eps.iter().enumerate().filter(|(_, &b)| b) {
        images.swap(i, i + n);
    }
    Permutation::from_images(images)
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn bits_of(code: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| code >> i & 1 == 1).collect()
}

#[derive(Debug, Clone)]
pub struct CubeConfig {
    pub n: usize,
    /// Number of sampled ordered pairs; `0`, or any value covering the whole
    /// cube, checks every pair.
    pub sample_size: usize,
    pub seed: u64,
    pub bfs_limit: usize,
    pub collect_pairs: bool,
}

impl CubeConfig {
    pub fn new(n: usize) -> Self {
        CubeConfig {
            n,
            sample_size: 0,
            seed: 0,
            bfs_limit: DEFAULT_BFS_LIMIT,
            collect_pairs: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CubePair<S> {
    pub eps: String,
    pub delta: String,
    pub h: usize,
    pub d_lo: S,
    pub d_hi: S,
    pub exact: Option<usize>,
    pub sum_minimized_only_at_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeExact<S> {
    /// Range of `d / (n h)` over the checked pairs.
    pub min_ratio: S,
    pub max_ratio: S,
    /// `d_lo <= d <= d_hi` on every pair.
    pub sandwich_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeAuditReport<S> {
    pub version: String,
    pub n: usize,
    pub degree: usize,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub ratio_lo: S,
    pub ratio_hi: S,
    pub certificate: S,
    pub minimizer_at_zero: bool,
    pub minimizer_failures: usize,
    pub envelope_consistent: bool,
    pub exact: Option<CubeExact<S>>,
    pub seed: u64,
    pub sample_size: usize,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone)]
pub struct CubeOutcome<S> {
    pub report: CubeAuditReport<S>,
    pub pairs: Vec<CubePair<S>>,
}

struct PairResult<S> {
    pair: CubePair<S>,
    scaled_lo: S,
    scaled_hi: S,
    exact_ratio: Option<S>,
    sandwich: bool,
}

fn check_pair<S: Scalar>(
    n: usize,
    eps: &[bool],
    delta: &[bool],
    eval: &mut FormulaEvaluator,
    table: Option<&DistanceTable>,
) -> PairResult<S> {
    let p = hamming_embed(n, eps).expect("valid bits");
    let q = hamming_embed(n, delta).expect("valid bits");
    let h = hamming(eps, delta);
    let b = eval.distance(&p, &q).expect("same degree");
    let d_lo = S::from_count(b.value) / S::from_count(3);
    let d_hi = S::from_count(b.upper_value());
    let zero_sum = b.per_shift[0].sum;
    let unique = b.per_shift[1..].iter().all(|s| s.sum > zero_sum);
    let exact = table.map(|t| t.distance(&p, &q).expect("same degree"));
    let nh = S::from_count(n * h);
    let sandwich = exact.is_none_or(|d| {
        let d = S::from_count(d);
        d_lo <= d && d <= d_hi
    });
    PairResult {
        pair: CubePair {
            eps: bits_to_string(eps),
            delta: bits_to_string(delta),
            h,
            d_lo,
            d_hi,
            exact,
            sum_minimized_only_at_zero: unique,
        },
        scaled_lo: d_lo / nh,
        scaled_hi: d_hi / nh,
        exact_ratio: exact.map(|d| S::from_count(d) / nh),
        sandwich,
    }
}

pub fn cube_audit<S: Scalar>(config: &CubeConfig) -> Result<CubeOutcome<S>> {
    let started = Instant::now();
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidInput("cube dimension must be positive".into()));
    }
    if n >= usize::BITS as usize / 2 {
        return Err(Error::InvalidInput(format!("cube dimension {n} is too large")));
    }
    let degree = cube_degree(n);
    let table = if degree <= config.bfs_limit {
        Some(DistanceTable::build_with_limit(degree, config.bfs_limit)?)
    } else {
        None
    };
    let vertices = 1usize << n;
    let ordered = vertices * (vertices - 1);
    let exhaustive = config.sample_size == 0 || config.sample_size >= ordered;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..vertices)
            .flat_map(|a| (0..vertices).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        (0..config.sample_size)
            .map(|_| {
                let a = rng.gen_range(0..vertices);
                let mut b = rng.gen_range(0..vertices - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect()
    };
    let results: Vec<PairResult<S>> = pairs
        .par_iter()
        .map_init(
            || FormulaEvaluator::new(degree),
            |eval, &(a, b)| check_pair(n, &bits_of(a, n), &bits_of(b, n), eval, table.as_ref()),
        )
        .collect();

    let mut ratio_lo = S::infinity();
    let mut ratio_hi = S::zero();
    let mut exact_lo = S::infinity();
    let mut exact_hi = S::zero();
    let mut failures = 0;
    let mut consistent = true;
    let mut sandwich = true;
    for r in &results {
        ratio_lo = ratio_lo.min(r.scaled_lo);
        ratio_hi = ratio_hi.max(r.scaled_hi);
        if let Some(e) = r.exact_ratio {
            exact_lo = exact_lo.min(e);
            exact_hi = exact_hi.max(e);
        }
        failures += usize::from(!r.pair.sum_minimized_only_at_zero);
        consistent &= r.pair.d_lo <= r.pair.d_hi;
        sandwich &= r.sandwich;
    }
    let certificate = if results.is_empty() { S::one() } else { ratio_hi / ratio_lo };
    let exact = (table.is_some() && !results.is_empty()).then_some(CubeExact {
        min_ratio: exact_lo,
        max_ratio: exact_hi,
        sandwich_holds: sandwich,
    });
    let report = CubeAuditReport {
        version: VERSION.to_string(),
        n,
        degree,
        pairs_checked: results.len(),
        exhaustive,
        ratio_lo,
        ratio_hi,
        certificate,
        minimizer_at_zero: failures == 0,
        minimizer_failures: failures,
        envelope_consistent: consistent,
        exact,
        seed: config.seed,
        sample_size: config.sample_size,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    let pairs = if config.collect_pairs {
        results.into_iter().map(|r| r.pair).collect()
    } else {
        Vec::new()
    };
    Ok(CubeOutcome { report, pairs })
}
