//! Constructive words for transpositions, cycles and arbitrary permutations.
//!
//! Every word here is assembled through [`WordBuilder`], which merges adjacent
//! powers of `c` and always writes them in the shorter rotation direction.
//! The `t` letters are never touched.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FormulaEvaluator;
use crate::perm::{cycle_dist, GeneratorWord, Letter, Permutation};

/// Shortest signed exponent representing `c^j`; ties at `n/2` go positive.
fn short_exponent(n: usize, j: isize) -> isize {
    let r = j.rem_euclid(n as isize);
    if 2 * r <= n as isize {
        r
    } else {
        r - n as isize
    }
}

#[derive(Debug, Clone)]
pub struct WordBuilder {
    n: usize,
    letters: Vec<Letter>,
    /// Net exponent of the trailing run of `c` / `c^-1` letters.
    tail: isize,
}

impl WordBuilder {
    pub fn new(n: usize) -> Self {
        WordBuilder {
            n,
            letters: Vec::new(),
            tail: 0,
        }
    }

    pub fn push_t(&mut self) -> &mut Self {
        self.flush_tail();
        self.letters.push(Letter::T);
        self
    }

    pub fn push_c_power(&mut self, j: isize) -> &mut Self {
        self.tail += j;
        self
    }

    pub fn append(&mut self, word: &GeneratorWord) -> &mut Self {
        for &g in word.letters() {
            match g {
                Letter::T => self.push_t(),
                Letter::C => self.push_c_power(1),
                Letter::CInv => self.push_c_power(-1),
            };
        }
        self
    }

    fn flush_tail(&mut self) {
        let e = short_exponent(self.n, self.tail);
        let letter = if e >= 0 { Letter::C } else { Letter::CInv };
        self.letters
            .extend(std::iter::repeat_n(letter, e.unsigned_abs()));
        self.tail = 0;
    }

    pub fn finish(mut self) -> GeneratorWord {
        self.flush_tail();
        GeneratorWord::from_letters(self.n, self.letters)
    }
}

fn check_point(n: usize, x: usize) -> Result<()> {
    if x < n {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "point {x} out of range for degree {n}"
        )))
    }
}

/// A word for `(0 l)`.
///
/// With `s = min(l, n - l)` the word is `(tc)^(l-1) t (c^-1 t)^(l-1)` when
/// `l <= n - l` and the mirrored `(c^-1 t)^(s-1) c^-1 t c (tc)^(s-1)` otherwise,
/// so its length is at most `4 d(0, l) - 1`.
pub fn word_transposition_from_zero(n: usize, l: usize) -> Result<GeneratorWord> {
    check_point(n, l)?;
    if l == 0 {
        return Err(Error::InvalidInput("(0 0) is not a transposition".into()));
    }
    let mut w = WordBuilder::new(n);
    if l == 1 {
        w.push_t();
    } else if l <= n - l {
        for _ in 1..l {
            w.push_t().push_c_power(1);
        }
        w.push_t();
        for _ in 1..l {
            w.push_c_power(-1).push_t();
        }
    } else {
        let s = n - l;
        for _ in 1..s {
            w.push_c_power(-1).push_t();
        }
        w.push_c_power(-1).push_t().push_c_power(1);
        for _ in 1..s {
            w.push_t().push_c_power(1);
        }
    }
    Ok(w.finish())
}

/// A word for `(k m)`: the word for `(0, m - k)` conjugated by `c^k`.
pub fn word_transposition(n: usize, k: usize, m: usize) -> Result<GeneratorWord> {
    check_point(n, k)?;
    check_point(n, m)?;
    if k == m {
        return Err(Error::InvalidInput(format!("({k} {m}) is not a transposition")));
    }
    let inner = word_transposition_from_zero(n, (m + n - k) % n)?;
    let mut w = WordBuilder::new(n);
    w.push_c_power(k as isize)
        .append(&inner)
        .push_c_power(-(k as isize));
    Ok(w.finish())
}

fn push_cycle(w: &mut WordBuilder, n: usize, points: &[usize]) -> Result<()> {
    // (k1 ... km) = c^k1 [ prod_i (0 Δi) c^Δi ] c^-km, Δi = k(i+1) - ki
    w.push_c_power(points[0] as isize);
    for pair in points.windows(2) {
        let delta = (pair[1] + n - pair[0]) % n;
        w.append(&word_transposition_from_zero(n, delta)?);
        w.push_c_power(delta as isize);
    }
    w.push_c_power(-(*points.last().expect("nonempty") as isize));
    Ok(())
}

/// A word for the cycle `(k1 k2 ... km)`, which sends `k1 -> k2 -> ... -> k1`.
pub fn word_cycle(n: usize, points: &[usize]) -> Result<GeneratorWord> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("a cycle needs at least two points".into()));
    }
    let mut seen = vec![false; n];
    for &x in points {
        check_point(n, x)?;
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidInput(format!("point {x} repeated in cycle")));
        }
    }
    let mut w = WordBuilder::new(n);
    push_cycle(&mut w, n, points)?;
    Ok(w.finish())
}

/// Length bound used for [`word_cycle`]: `2 d(0,k1) + 6 Σ d(ki, ki+1) + m`.
pub fn cycle_word_bound(n: usize, points: &[usize]) -> usize {
    let path: usize = points
        .windows(2)
        .map(|p| cycle_dist(n, p[0], p[1]))
        .sum();
    2 * cycle_dist(n, 0, points[0]) + 6 * path + points.len()
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifiedWord {
    #[serde(serialize_with = "serialize_word")]
    pub word: GeneratorWord,
    #[serde(skip)]
    pub target: Permutation,
    pub certified_bound: usize,
    #[serde(rename = "l_star")]
    pub shift_used: usize,
}

fn serialize_word<S: serde::Serializer>(w: &GeneratorWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(w)
}

impl CertifiedWord {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Order in which a sweep from 0 first meets the points of `points`.
///
/// The sweep covers the shortest arc containing `0` and every point, walking
/// first to the nearer end of that arc and then across to the other end.
fn sweep_order(n: usize, points: &[usize]) -> Vec<usize> {
    let mut marks: Vec<usize> = points.to_vec();
    marks.push(0);
    marks.sort_unstable();
    marks.dedup();
    // the arc starts right after the largest circular gap
    let m = marks.len();
    let (mut gap, mut start_idx) = (0, 0);
    for i in 0..m {
        let next = marks[(i + 1) % m];
        let g = (next + n - marks[i]) % n;
        let g = if g == 0 { n } else { g };
        if g > gap {
            gap = g;
            start_idx = (i + 1) % m;
        }
    }
    let start = marks[start_idx];
    let offset = |x: usize| (x + n - start) % n;
    let arc_len = offset(marks[(start_idx + m - 1) % m]);
    let zero = offset(0);
    let mut by_offset: Vec<(usize, usize)> = points.iter().map(|&x| (offset(x), x)).collect();
    by_offset.sort_unstable();
    let (left, right): (Vec<_>, Vec<_>) = by_offset.into_iter().partition(|&(o, _)| o <= zero);
    let left_first = zero <= arc_len - zero;
    let mut order = Vec::with_capacity(points.len());
    if left_first {
        order.extend(left.iter().rev().map(|&(_, x)| x));
        order.extend(right.iter().map(|&(_, x)| x));
    } else {
        order.extend(right.iter().map(|&(_, x)| x));
        order.extend(left.iter().rev().map(|&(_, x)| x));
    }
    order
}

/// Cycles of `sigma`, each rotated to start at its first point met by the
/// sweep from 0 and listed in that order.
fn swept_cycles(sigma: &Permutation) -> Vec<Vec<usize>> {
    let n = sigma.n();
    let support = sigma.support();
    let mut taken = vec![false; n];
    let mut cycles = Vec::new();
    for base in sweep_order(n, &support) {
        if taken[base] {
            continue;
        }
        let mut cycle = vec![base];
        taken[base] = true;
        let mut x = sigma.apply(base);
        while x != base {
            taken[x] = true;
            cycle.push(x);
            x = sigma.apply(x);
        }
        cycles.push(cycle);
    }
    cycles
}

fn assemble(n: usize, shift: usize, cycles: &[&Vec<usize>]) -> Result<GeneratorWord> {
    let mut w = WordBuilder::new(n);
    w.push_c_power(-(shift as isize));
    for cycle in cycles {
        push_cycle(&mut w, n, cycle)?;
    }
    Ok(w.finish())
}

/// Builds a word for `p` through the shift minimizing the formula.
///
/// With `l*` the minimizing shift, `σ = c^l* p` is written as a product of its
/// disjoint cycles, visited along a sweep from 0, and `c^-l*` is prepended.
/// The cycles commute, so the sweep is tried in both directions and the
/// shorter word kept.
pub fn synthesize(p: &Permutation) -> CertifiedWord {
    let n = p.n();
    let breakdown = FormulaEvaluator::new(n).length(p);
    let shift = breakdown.l_star;
    let sigma = p.rotate(shift as isize);
    let cycles = swept_cycles(&sigma);
    let forward: Vec<&Vec<usize>> = cycles.iter().collect();
    let backward: Vec<&Vec<usize>> = cycles.iter().rev().collect();
    let a = assemble(n, shift, &forward).expect("cycles of a permutation are valid");
    let b = assemble(n, shift, &backward).expect("cycles of a permutation are valid");
    let word = if b.len() < a.len() { b } else { a };
    let certified_bound = cycle_dist(n, 0, shift) + breakdown.upper_value() + n;
    CertifiedWord {
        word,
        target: p.clone(),
        certified_bound,
        shift_used: shift,
    }
}
