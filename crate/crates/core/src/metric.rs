//! The word metric of `{t, c}`: an exact breadth-first oracle, the
//! shift-minimized length formula and its split into the `T1`/`T2` terms.
//!
//! For a shift `l` the formula has a sum term `Σ_k d(k, π(k) + l)` and a
//! diameter term `diam({0, l} ∪ {p : π(p) ≠ p - l})`. The formula value is the
//! minimum over `l` of their sum, and the word length satisfies
//! `F / 3 <= |π| <= min_l (6 sum + 2 diam)`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{check_degrees, Error, Result};
use crate::perm::{cycle_dist, factorial, CircleScratch, Letter, Permutation};

/// Largest degree the breadth-first oracle builds without an explicit override.
pub const DEFAULT_BFS_LIMIT: usize = 10;

/// Exact word lengths of all of `Sym_n`, indexed by Lehmer rank.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u16>,
}

impl DistanceTable {
    pub fn build(n: usize) -> Result<Self> {
        Self::build_with_limit(n, DEFAULT_BFS_LIMIT)
    }

    /// Breadth-first search over the undirected left Cayley graph with edges
    /// `π — gπ` for `g ∈ {t, c, c^-1}`.
    pub fn build_with_limit(n: usize, limit: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        if n > limit {
            return Err(Error::Infeasible { n, limit });
        }
        let size = factorial(n).ok_or(Error::Infeasible { n, limit })?;
        let mut dist = vec![u16::MAX; size];
        let mut queue = VecDeque::new();
        dist[0] = 0;
        queue.push_back(Permutation::identity(n));
        while let Some(p) = queue.pop_front() {
            let d = dist[p.lehmer_rank()];
            for g in Letter::ALL {
                let q = p.left_mul(g);
                let slot = &mut dist[q.lehmer_rank()];
                if *slot == u16::MAX {
                    *slot = d + 1;
                    queue.push_back(q);
                }
            }
        }
        Ok(DistanceTable { n, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Word length `|π|`.
    pub fn length(&self, p: &Permutation) -> usize {
        assert_eq!(p.n(), self.n, "permutation degree differs from table");
        self.dist[p.lehmer_rank()] as usize
    }

    pub fn length_by_rank(&self, rank: usize) -> usize {
        self.dist[rank] as usize
    }

    /// `d(p, q) = |q p^-1|`.
    pub fn distance(&self, p: &Permutation, q: &Permutation) -> Result<usize> {
        check_degrees(p.n(), q.n())?;
        check_degrees(p.n(), self.n)?;
        Ok(self.length(&q.compose_unchecked(&p.inverse())))
    }

    pub fn diameter(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }

    /// `(permutation, length)` in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (Permutation, usize)> + '_ {
        self.dist.iter().enumerate().map(move |(r, &d)| {
            (
                Permutation::from_lehmer_rank(self.n, r).expect("rank in range"),
                d as usize,
            )
        })
    }
}

pub fn bfs_distances(n: usize) -> Result<DistanceTable> {
    DistanceTable::build(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTerms {
    pub l: usize,
    pub sum: usize,
    pub diam: usize,
}

impl ShiftTerms {
    pub fn combined(&self) -> usize {
        self.sum + self.diam
    }

    /// `6 sum + 2 diam`, the constructive upper estimate at this shift.
    pub fn upper(&self) -> usize {
        6 * self.sum + 2 * self.diam
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaBreakdown {
    pub n: usize,
    pub value: usize,
    pub l_star: usize,
    pub per_shift: Vec<ShiftTerms>,
}

impl FormulaBreakdown {
    fn from_terms(n: usize, per_shift: Vec<ShiftTerms>) -> Self {
        // min_by_key keeps the first minimum, i.e. the smallest l
        let best = per_shift
            .iter()
            .min_by_key(|s| s.combined())
            .expect("at least one shift");
        FormulaBreakdown {
            n,
            value: best.combined(),
            l_star: best.l,
            per_shift,
        }
    }

    /// Minimum of the sum term alone.
    pub fn t1(&self) -> usize {
        self.per_shift.iter().map(|s| s.sum).min().unwrap_or(0)
    }

    /// Minimum of the diameter term alone.
    pub fn t2(&self) -> usize {
        self.per_shift.iter().map(|s| s.diam).min().unwrap_or(0)
    }

    /// `min_l (6 sum + 2 diam)`.
    pub fn upper_value(&self) -> usize {
        self.per_shift.iter().map(ShiftTerms::upper).min().unwrap_or(0)
    }

    pub fn terms(&self, l: usize) -> ShiftTerms {
        self.per_shift[l]
    }
}

/// Per-shift evaluation with reusable scratch buffers; the audit loops keep one
/// per worker.
#[derive(Debug, Clone)]
pub struct FormulaEvaluator {
    n: usize,
    mask: Vec<bool>,
    circle: CircleScratch,
}

impl FormulaEvaluator {
    pub fn new(n: usize) -> Self {
        FormulaEvaluator {
            n,
            mask: vec![false; n],
            circle: CircleScratch::new(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&mut self, p: &Permutation) -> FormulaBreakdown {
        assert_eq!(p.n(), self.n);
        let n = self.n;
        let per_shift = (0..n)
            .map(|l| {
                let sum = (0..n).map(|k| cycle_dist(n, k, (p.apply(k) + l) % n)).sum();
                for (q, slot) in self.mask.iter_mut().enumerate() {
                    *slot = p.apply(q) != (q + n - l) % n;
                }
                self.mask[0] = true;
                self.mask[l] = true;
                let diam = self.circle.diam(&self.mask);
                ShiftTerms { l, sum, diam }
            })
            .collect();
        FormulaBreakdown::from_terms(n, per_shift)
    }

    /// Terms `Σ_k d(p(k) - l, q(k))` and
    /// `diam({0, l} ∪ {r : p^-1(r) ≠ q^-1(r - l)})`.
    pub fn distance(&mut self, p: &Permutation, q: &Permutation) -> Result<FormulaBreakdown> {
        check_degrees(p.n(), q.n())?;
        check_degrees(p.n(), self.n)?;
        let n = self.n;
        let p_inv = p.inverse();
        let q_inv = q.inverse();
        let per_shift = (0..n)
            .map(|l| {
                let sum = (0..n)
                    .map(|k| cycle_dist(n, (p.apply(k) + n - l) % n, q.apply(k)))
                    .sum();
                for (r, slot) in self.mask.iter_mut().enumerate() {
                    *slot = p_inv.apply(r) != q_inv.apply((r + n - l) % n);
                }
                self.mask[0] = true;
                self.mask[l] = true;
                let diam = self.circle.diam(&self.mask);
                ShiftTerms { l, sum, diam }
            })
            .collect();
        Ok(FormulaBreakdown::from_terms(n, per_shift))
    }

    /// Only the sum terms, `Σ_k d(p(k) - l, q(k))` for each `l`.
    pub fn sum_profile(&self, p: &Permutation, q: &Permutation) -> Result<Vec<usize>> {
        check_degrees(p.n(), q.n())?;
        let n = p.n();
        Ok((0..n)
            .map(|l| {
                (0..n)
                    .map(|k| cycle_dist(n, (p.apply(k) + n - l) % n, q.apply(k)))
                    .sum()
            })
            .collect())
    }
}

pub fn formula_length(p: &Permutation) -> FormulaBreakdown {
    FormulaEvaluator::new(p.n()).length(p)
}

pub fn formula_distance(p: &Permutation, q: &Permutation) -> Result<FormulaBreakdown> {
    FormulaEvaluator::new(p.n()).distance(p, q)
}

pub fn t1(p: &Permutation, q: &Permutation) -> Result<usize> {
    check_degrees(p.n(), q.n())?;
    let profile = FormulaEvaluator::new(p.n()).sum_profile(p, q)?;
    Ok(profile.into_iter().min().unwrap_or(0))
}

pub fn t2(p: &Permutation, q: &Permutation) -> Result<usize> {
    Ok(formula_distance(p, q)?.t2())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCheck {
    pub joint_min: usize,
    pub split_bound: usize,
    pub holds: bool,
}

impl SplitCheck {
    pub fn from_breakdown(b: &FormulaBreakdown) -> Self {
        let joint_min = b.value;
        let split_bound = 2 * b.t1() + b.t2();
        SplitCheck {
            joint_min,
            split_bound,
            holds: joint_min <= split_bound,
        }
    }
}

/// Compares the joint minimum against `2 T1 + T2`.
pub fn split_check(p: &Permutation, q: &Permutation) -> Result<SplitCheck> {
    Ok(SplitCheck::from_breakdown(&formula_distance(p, q)?))
}

/// Whether one shift attains both `T1` and `T2`.
pub fn shared_minimizer(b: &FormulaBreakdown) -> bool {
    let (t1, t2) = (b.t1(), b.t2());
    b.per_shift.iter().any(|s| s.sum == t1 && s.diam == t2)
}
