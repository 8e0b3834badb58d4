//! Simple random walk on `Sym_n` and the growth of its distance from the
//! identity.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DistanceTable, FormulaEvaluator, DEFAULT_BFS_LIMIT};
use crate::perm::{Letter, Permutation};
use crate::scalar::Scalar;

use super::VERSION;

/// Horizons above this are refused by the local ball search.
pub const MAX_LOCAL_HORIZON: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Proxy {
    /// `formula_length / 3`, a lower bound within a factor 18 of the true
    /// distance, so the series never exceeds `t`.
    Formula,
    /// Exact word length.
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepSet {
    /// Uniform over `{t, c, c^-1}`.
    Uniform3,
    /// Uniform over the multiset `{t, t, c, c^-1}`.
    TDoubled,
}

impl StepSet {
    fn letters(self) -> &'static [Letter] {
        match self {
            StepSet::Uniform3 => &[Letter::T, Letter::C, Letter::CInv],
            StepSet::TDoubled => &[Letter::T, Letter::T, Letter::C, Letter::CInv],
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriftConfig {
    pub n: usize,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub proxy: Proxy,
    pub steps: StepSet,
    pub bfs_limit: usize,
}

impl DriftConfig {
    pub fn new(n: usize, horizon: usize, trials: usize) -> Self {
        DriftConfig {
            n,
            horizon,
            trials,
            seed: 0,
            proxy: Proxy::Formula,
            steps: StepSet::Uniform3,
            bfs_limit: DEFAULT_BFS_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftPoint<S> {
    pub t: usize,
    pub mean: S,
    pub stderr: S,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftSeries<S> {
    pub version: String,
    pub n: usize,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub proxy: Proxy,
    pub steps: StepSet,
    pub series: Vec<DriftPoint<S>>,
    /// Least-squares slope of `ln mean` against `ln t` over `t = 1..=T`.
    pub slope: Option<S>,
    pub wall_time_ms: u64,
}

/// Exact distances from the identity for walks of bounded length, by meeting
/// a precomputed ball around the identity with a small ball around the query.
pub struct LocalDistance {
    n: usize,
    radius: usize,
    ball: HashMap<Permutation, u8>,
}

impl LocalDistance {
    pub fn new(n: usize, radius: usize) -> Self {
        let mut ball = HashMap::new();
        let start = Permutation::identity(n);
        ball.insert(start.clone(), 0u8);
        let mut frontier = vec![start];
        for r in 1..=radius {
            let mut next = Vec::new();
            for p in &frontier {
                for &letter in &Letter::ALL {
                    let q = p.left_mul(letter);
                    if !ball.contains_key(&q) {
                        ball.insert(q.clone(), r as u8);
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        LocalDistance { n, radius, ball }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Word length of `p`, given that it is at most `bound`. Requires
    /// `bound <= 2 * radius`.
    pub fn length(&self, p: &Permutation, bound: usize) -> usize {
        debug_assert_eq!(p.n(), self.n);
        if let Some(&d) = self.ball.get(p) {
            return d as usize;
        }
        let reach = bound.saturating_sub(self.radius);
        let mut best = usize::MAX;
        let mut seen = HashMap::new();
        seen.insert(p.clone(), ());
        let mut frontier = vec![p.clone()];
        for j in 1..=reach {
            let mut next = Vec::new();
            for x in &frontier {
                for &letter in &Letter::ALL {
                    let y = x.left_mul(letter);
                    if seen.insert(y.clone(), ()).is_some() {
                        continue;
                    }
                    if let Some(&d) = self.ball.get(&y) {
                        best = best.min(j + d as usize);
                    }
                    next.push(y);
                }
            }
            frontier = next;
        }
        assert!(best != usize::MAX, "length exceeds the stated bound");
        best
    }
}

enum Oracle {
    Formula,
    Table(DistanceTable),
    Local(LocalDistance),
}

fn run_trial(config: &DriftConfig, oracle: &Oracle, trial: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let letters = config.steps.letters();
    let mut eval = FormulaEvaluator::new(config.n);
    let mut walk = Permutation::identity(config.n);
    let mut out = Vec::with_capacity(config.horizon + 1);
    out.push(0);
    for t in 1..=config.horizon {
        let letter = letters[rng.gen_range(0..letters.len())];
        walk = walk.left_mul(letter);
        let d = match oracle {
            Oracle::Formula => eval.length(&walk).value,
            Oracle::Table(table) => table.length(&walk),
            Oracle::Local(local) => local.length(&walk, t),
        };
        out.push(d);
    }
    out
}

pub fn drift_walk<S: Scalar>(config: &DriftConfig) -> Result<DriftSeries<S>> {
    let started = Instant::now();
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let oracle = match config.proxy {
        Proxy::Formula => Oracle::Formula,
        Proxy::Bfs if n <= config.bfs_limit => {
            Oracle::Table(DistanceTable::build_with_limit(n, config.bfs_limit)?)
        }
        Proxy::Bfs if config.horizon <= MAX_LOCAL_HORIZON => {
            Oracle::Local(LocalDistance::new(n, config.horizon.div_ceil(2)))
        }
        Proxy::Bfs => {
            return Err(Error::Infeasible {
                n,
                limit: config.bfs_limit,
            })
        }
    };
    let runs: Vec<Vec<usize>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, &oracle, trial))
        .collect();

    let divisor = match config.proxy {
        Proxy::Formula => 3.0,
        Proxy::Bfs => 1.0,
    };
    let trials = S::from_count(config.trials);
    let series: Vec<DriftPoint<S>> = (0..=config.horizon)
        .map(|t| {
            let (sum, sq) = runs.iter().fold((0u64, 0u64), |(s, q), run| {
                let d = run[t] as u64;
                (s + d, q + d * d)
            });
            let mean = S::from_f64_lossy(sum as f64 / divisor) / trials;
            let stderr = if config.trials > 1 {
                let m = sum as f64 / config.trials as f64;
                let var = (sq as f64 - config.trials as f64 * m * m) / (config.trials as f64 - 1.0);
                S::from_f64_lossy((var.max(0.0) / config.trials as f64).sqrt() / divisor)
            } else {
                S::zero()
            };
            DriftPoint { t, mean, stderr }
        })
        .collect();
    let slope = log_log_slope(&series);
    Ok(DriftSeries {
        version: VERSION.to_string(),
        n,
        horizon: config.horizon,
        trials: config.trials,
        seed: config.seed,
        proxy: config.proxy,
        steps: config.steps,
        series,
        slope,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

pub fn log_log_slope<S: Scalar>(series: &[DriftPoint<S>]) -> Option<S> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|p| p.t >= 1 && p.mean > S::zero())
        .map(|p| ((p.t as f64).ln(), p.mean.to_f64_lossy().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(S::from_f64_lossy(sxy / sxx))
}
