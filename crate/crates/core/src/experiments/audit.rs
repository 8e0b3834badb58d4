//! Distortion certification of the combined embedding.
//!
//! Exact mode compares embedded distances against the breadth-first word
//! metric. Envelope mode, for degrees where that is out of reach, brackets the
//! word metric by `[F / 3, min_l (6 sum + 2 diam)]` and reports the resulting
//! upper bound on the distortion over the checked pairs.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{combined_distance, default_scale1, phi_combined_with_margin, CombinedPoint, InteriorMargin};
use crate::error::{Error, Result};
use crate::metric::{DistanceTable, FormulaEvaluator, DEFAULT_BFS_LIMIT};
use crate::perm::{factorial, Permutation};
use crate::scalar::Scalar;

use super::VERSION;

/// Width of the word-metric envelope, `3 * 6`.
pub const ENVELOPE_WIDTH: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Exact,
    Envelope,
}

#[derive(Debug, Clone)]
pub struct AuditConfig<S> {
    pub n: usize,
    pub mode: AuditMode,
    /// Number of sampled pairs; `0` means every unordered pair.
    pub sample_size: usize,
    pub seed: u64,
    pub scale1: S,
    pub margin: InteriorMargin,
    pub bfs_limit: usize,
    /// Keep one record per checked pair.
    pub collect_pairs: bool,
}

impl<S: Scalar> AuditConfig<S> {
    pub fn new(n: usize, mode: AuditMode) -> Self {
        AuditConfig {
            n,
            mode,
            sample_size: 0,
            seed: 0,
            scale1: default_scale1(),
            margin: InteriorMargin::default(),
            bfs_limit: DEFAULT_BFS_LIMIT,
            collect_pairs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness<S> {
    pub value: S,
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport<S> {
    pub version: String,
    pub n: usize,
    pub mode: AuditMode,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    /// Largest `embedded / word` ratio (envelope: `embedded / (F/3)`).
    pub max_expansion: Option<Witness<S>>,
    /// Largest `word / embedded` ratio (envelope: `(6 sum + 2 diam) / embedded`).
    pub max_contraction: Option<Witness<S>>,
    pub distortion: S,
    pub scale1: S,
    pub interior_margin: usize,
    /// Envelope mode only: `F/3 <= min_l (6 sum + 2 diam)` on every pair.
    pub envelope_consistent: bool,
    pub warning: Option<String>,
    pub seed: u64,
    pub sample_size: usize,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRecord<S> {
    pub p: String,
    pub q: String,
    /// Exact word distance, or the envelope bounds.
    pub word_lo: S,
    pub word_hi: S,
    pub embedded: S,
}

#[derive(Debug, Clone)]
pub struct AuditOutcome<S> {
    pub report: DistortionReport<S>,
    pub pairs: Vec<PairRecord<S>>,
}

/// Running extremes; ties keep the lexicographically smaller index pair so the
/// result does not depend on how the work was split.
#[derive(Debug, Clone)]
struct Extremes<S> {
    expansion: Option<(S, usize, usize)>,
    contraction: Option<(S, usize, usize)>,
    consistent: bool,
    count: usize,
}

impl<S: Scalar> Extremes<S> {
    fn empty() -> Self {
        Extremes {
            expansion: None,
            contraction: None,
            consistent: true,
            count: 0,
        }
    }

    fn better(a: Option<(S, usize, usize)>, b: Option<(S, usize, usize)>) -> Option<(S, usize, usize)> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => {
                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
        }
    }

    fn observe(&mut self, i: usize, j: usize, lo: S, hi: S, embedded: S) {
        self.count += 1;
        self.consistent &= lo <= hi;
        let expansion = if lo > S::zero() { embedded / lo } else { S::infinity() };
        let contraction = if embedded > S::zero() { hi / embedded } else { S::infinity() };
        self.expansion = Self::better(self.expansion, Some((expansion, i, j)));
        self.contraction = Self::better(self.contraction, Some((contraction, i, j)));
    }

    fn merge(self, other: Self) -> Self {
        Extremes {
            expansion: Self::better(self.expansion, other.expansion),
            contraction: Self::better(self.contraction, other.contraction),
            consistent: self.consistent && other.consistent,
            count: self.count + other.count,
        }
    }
}

/// Evaluates word-metric bounds and embedded distance for a pair of indices.
trait PairSource<S>: Sync {
    fn perm(&self, i: usize) -> &Permutation;
    fn point(&self, i: usize) -> &CombinedPoint<S>;
    fn word_bounds(&self, eval: &mut FormulaEvaluator, i: usize, j: usize) -> (S, S);
}

struct ExactSource<S> {
    perms: Vec<Permutation>,
    points: Vec<CombinedPoint<S>>,
    table: DistanceTable,
}

impl<S: Scalar> PairSource<S> for ExactSource<S> {
    fn perm(&self, i: usize) -> &Permutation {
        &self.perms[i]
    }
    fn point(&self, i: usize) -> &CombinedPoint<S> {
        &self.points[i]
    }
    fn word_bounds(&self, _: &mut FormulaEvaluator, i: usize, j: usize) -> (S, S) {
        let d = self
            .table
            .distance(&self.perms[i], &self.perms[j])
            .expect("same degree");
        let d = S::from_count(d);
        (d, d)
    }
}

struct EnvelopeSource<S> {
    perms: Vec<Permutation>,
    points: Vec<CombinedPoint<S>>,
}

impl<S: Scalar> PairSource<S> for EnvelopeSource<S> {
    fn perm(&self, i: usize) -> &Permutation {
        &self.perms[i]
    }
    fn point(&self, i: usize) -> &CombinedPoint<S> {
        &self.points[i]
    }
    fn word_bounds(&self, eval: &mut FormulaEvaluator, i: usize, j: usize) -> (S, S) {
        let b = eval
            .distance(&self.perms[i], &self.perms[j])
            .expect("same degree");
        (
            S::from_count(b.value) / S::from_count(3),
            S::from_count(b.upper_value()),
        )
    }
}

fn run_pairs<S: Scalar, P: PairSource<S>>(
    source: &P,
    n: usize,
    pairs: &PairPlan,
    collect: bool,
) -> (Extremes<S>, Vec<PairRecord<S>>) {
    let eval_pair = |eval: &mut FormulaEvaluator, i: usize, j: usize| {
        let (lo, hi) = source.word_bounds(eval, i, j);
        let embedded = combined_distance(source.point(i), source.point(j)).expect("same degree and scale");
        (lo, hi, embedded)
    };
    let record = |i: usize, j: usize, lo: S, hi: S, embedded: S| PairRecord {
        p: source.perm(i).to_string(),
        q: source.perm(j).to_string(),
        word_lo: lo,
        word_hi: hi,
        embedded,
    };
    match pairs {
        PairPlan::AllUnordered(count) => {
            let results: Vec<(Extremes<S>, Vec<PairRecord<S>>)> = (0..*count)
                .into_par_iter()
                .map_init(
                    || FormulaEvaluator::new(n),
                    |eval, i| {
                        let mut ext = Extremes::empty();
                        let mut recs = Vec::new();
                        for j in i + 1..*count {
                            let (lo, hi, e) = eval_pair(eval, i, j);
                            ext.observe(i, j, lo, hi, e);
                            if collect {
                                recs.push(record(i, j, lo, hi, e));
                            }
                        }
                        (ext, recs)
                    },
                )
                .collect();
            let mut ext = Extremes::empty();
            let mut recs = Vec::new();
            for (e, r) in results {
                ext = ext.merge(e);
                recs.extend(r);
            }
            (ext, recs)
        }
        PairPlan::Listed(list) => {
            let results: Vec<(S, S, S)> = list
                .par_iter()
                .map_init(|| FormulaEvaluator::new(n), |eval, &(i, j)| eval_pair(eval, i, j))
                .collect();
            let mut ext = Extremes::empty();
            let mut recs = Vec::new();
            for (&(i, j), &(lo, hi, e)) in list.iter().zip(&results) {
                ext.observe(i, j, lo, hi, e);
                if collect {
                    recs.push(record(i, j, lo, hi, e));
                }
            }
            (ext, recs)
        }
    }
}

enum PairPlan {
    AllUnordered(usize),
    Listed(Vec<(usize, usize)>),
}

fn sample_index_pairs(rng: &mut ChaCha8Rng, size: usize, count: usize) -> Vec<(usize, usize)> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..size);
            let mut j = rng.gen_range(0..size - 1);
            if j >= i {
                j += 1;
            }
            (i, j)
        })
        .collect()
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffle is a bijection")
}

fn embed_all<S: Scalar>(perms: &[Permutation], scale1: S, margin: InteriorMargin) -> Result<Vec<CombinedPoint<S>>> {
    perms
        .par_iter()
        .map(|p| phi_combined_with_margin(p, scale1, margin))
        .collect()
}

fn witness<S: Scalar>(source: &impl PairSource<S>, best: Option<(S, usize, usize)>) -> Option<Witness<S>> {
    best.map(|(value, i, j)| Witness {
        value,
        p: source.perm(i).to_string(),
        q: source.perm(j).to_string(),
    })
}

pub fn distortion_audit<S: Scalar>(config: &AuditConfig<S>) -> Result<AuditOutcome<S>> {
    let started = Instant::now();
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (extremes, records, exhaustive, witnesses) = match config.mode {
        AuditMode::Exact => {
            let table = DistanceTable::build_with_limit(n, config.bfs_limit)?;
            let size = factorial(n).expect("guarded by the table");
            let perms: Vec<Permutation> = (0..size)
                .map(|r| Permutation::from_lehmer_rank(n, r).expect("rank in range"))
                .collect();
            let points = embed_all(&perms, config.scale1, config.margin)?;
            let source = ExactSource { perms, points, table };
            let unordered = size * (size - 1) / 2;
            let exhaustive = config.sample_size == 0 || config.sample_size >= unordered;
            let plan = if exhaustive || size < 2 {
                PairPlan::AllUnordered(size)
            } else {
                PairPlan::Listed(sample_index_pairs(&mut rng, size, config.sample_size))
            };
            let (ext, recs) = run_pairs(&source, n, &plan, config.collect_pairs);
            let w = (witness(&source, ext.expansion), witness(&source, ext.contraction));
            (ext, recs, exhaustive, w)
        }
        AuditMode::Envelope => {
            let (perms, plan, exhaustive) = if config.sample_size == 0 {
                let size = factorial(n)
                    .filter(|&s| n <= config.bfs_limit && s > 0)
                    .ok_or(Error::Infeasible { n, limit: config.bfs_limit })?;
                let perms: Vec<Permutation> = (0..size)
                    .map(|r| Permutation::from_lehmer_rank(n, r).expect("rank in range"))
                    .collect();
                (perms, PairPlan::AllUnordered(size), true)
            } else {
                let mut perms = Vec::with_capacity(2 * config.sample_size);
                for _ in 0..config.sample_size {
                    let p = random_permutation(&mut rng, n);
                    let mut q = random_permutation(&mut rng, n);
                    while n > 1 && q == p {
                        q = random_permutation(&mut rng, n);
                    }
                    perms.push(p);
                    perms.push(q);
                }
                let list = if n > 1 {
                    (0..config.sample_size).map(|k| (2 * k, 2 * k + 1)).collect()
                } else {
                    Vec::new()
                };
                (perms, PairPlan::Listed(list), false)
            };
            let points = embed_all(&perms, config.scale1, config.margin)?;
            let source = EnvelopeSource { perms, points };
            let (ext, recs) = run_pairs(&source, n, &plan, config.collect_pairs);
            let w = (witness(&source, ext.expansion), witness(&source, ext.contraction));
            (ext, recs, exhaustive, w)
        }
    };
    let distortion = match (extremes.expansion, extremes.contraction) {
        // a collapsed pair is not bi-Lipschitz at any scale
        (Some(_), Some(c)) if c.0.is_infinite() => S::infinity(),
        (Some(e), Some(c)) => e.0 * c.0,
        _ => S::one(),
    };
    let warning = (config.mode == AuditMode::Envelope).then(|| {
        format!(
            "envelope certificate: bounds the true distortion from above and may exceed it by up to a factor {ENVELOPE_WIDTH}"
        )
    });
    let report = DistortionReport {
        version: VERSION.to_string(),
        n,
        mode: config.mode,
        pairs_checked: extremes.count,
        exhaustive,
        max_expansion: witnesses.0,
        max_contraction: witnesses.1,
        distortion,
        scale1: config.scale1,
        interior_margin: config.margin.0,
        envelope_consistent: extremes.consistent,
        warning,
        seed: config.seed,
        sample_size: config.sample_size,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    Ok(AuditOutcome { report, pairs: records })
}
