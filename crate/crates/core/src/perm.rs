//! Permutations of `Z/n`, the generators `t = (0 1)` and `c = (0 1 ... n-1)`,
//! generator words and the circle metric primitives.
//!
//! Products are read right to left: `p.compose(&q)` is `x -> p(q(x))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_degrees, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::NotAPermutation("empty image list".into()));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {v} out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition `(a b)`; `a == b` gives the identity.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::InvalidInput(format!(
                "points {a}, {b} out of range for degree {n}"
            )));
        }
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        Ok(p)
    }

    /// `t = (0 1)`. On `Z/1` this is the identity.
    pub fn t(n: usize) -> Self {
        let mut p = Self::identity(n);
        if n >= 2 {
            p.images.swap(0, 1);
        }
        p
    }

    /// `c = (0 1 ... n-1)`, i.e. `k -> k + 1`.
    pub fn c(n: usize) -> Self {
        Self::rotation(n, 1)
    }

    /// `c^j` for any signed `j`.
    pub fn rotation(n: usize, j: isize) -> Self {
        let shift = j.rem_euclid(n as isize) as usize;
        Permutation {
            images: (0..n).map(|k| (k + shift) % n).collect(),
        }
    }

    pub fn generator(n: usize, letter: Letter) -> Self {
        match letter {
            Letter::T => Self::t(n),
            Letter::C => Self::rotation(n, 1),
            Letter::CInv => Self::rotation(n, -1),
        }
    }

    /// Builds a permutation from disjoint cycles; fixed points may be omitted.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x >= n {
                    return Err(Error::InvalidInput(format!("point {x} out of range")));
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::InvalidInput(format!("point {x} in two cycles")));
                }
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_degrees(self.n(), other.n())?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v] = k;
        }
        Permutation { images }
    }

    /// Left multiplication by a generator, `g ∘ self`.
    pub fn left_mul(&self, letter: Letter) -> Permutation {
        let n = self.n();
        let images = match letter {
            Letter::T => self
                .images
                .iter()
                .map(|&v| match v {
                    0 if n >= 2 => 1,
                    1 => 0,
                    v => v,
                })
                .collect(),
            Letter::C => self.images.iter().map(|&v| (v + 1) % n).collect(),
            Letter::CInv => self.images.iter().map(|&v| (v + n - 1) % n).collect(),
        };
        Permutation { images }
    }

    /// `c^j ∘ self`: every image shifted by `j`.
    pub fn rotate(&self, j: isize) -> Permutation {
        let n = self.n();
        let shift = j.rem_euclid(n as isize) as usize;
        Permutation {
            images: self.images.iter().map(|&v| (v + shift) % n).collect(),
        }
    }

    /// Points moved by the permutation, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.images[k] != k).collect()
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycle_decompose(self)
    }

    /// Lehmer (factorial base) rank; the identity has rank 0.
    pub fn lehmer_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn from_lehmer_rank(n: usize, mut rank: usize) -> Result<Permutation> {
        let total = factorial(n).ok_or(Error::Infeasible { n, limit: 20 })?;
        if rank >= total {
            return Err(Error::InvalidInput(format!(
                "rank {rank} out of range for degree {n}"
            )));
        }
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Permutation { images })
    }
}

pub fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// Free-function form of [`Permutation::compose`].
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    p.compose(q)
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line notation, e.g. `"2,1,0,3"`. Cycle notation is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('(') {
            return Err(Error::Parse(
                "cycle notation is not accepted; use comma-separated images such as 2,1,0,3".into(),
            ));
        }
        let images = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// `t = (0 1)`
    T,
    /// `c = (0 1 ... n-1)`
    C,
    /// `c^-1`
    CInv,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::T, Letter::C, Letter::CInv];

    pub fn to_char(self) -> char {
        match self {
            Letter::T => 't',
            Letter::C => 'c',
            Letter::CInv => 'C',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            't' => Some(Letter::T),
            'c' => Some(Letter::C),
            'C' => Some(Letter::CInv),
            _ => None,
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::T => Letter::T,
            Letter::C => Letter::CInv,
            Letter::CInv => Letter::C,
        }
    }
}

/// A word over `{t, c, c^-1}`. Letters are kept as written; nothing is reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    n: usize,
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(n: usize) -> Self {
        GeneratorWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(n: usize, letters: Vec<Letter>) -> Self {
        GeneratorWord { n, letters }
    }

    /// Parses a word over `t`, `c` and `C` (= `c^-1`).
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|ch| {
                Letter::from_char(ch)
                    .ok_or_else(|| Error::Parse(format!("unknown letter {ch:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.letters.pop()
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord> {
        check_degrees(self.n, other.n)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GeneratorWord { n: self.n, letters })
    }

    /// Product of the letters, leftmost letter applied last.
    pub fn eval(&self) -> Permutation {
        self.letters
            .iter()
            .rev()
            .fold(Permutation::identity(self.n), |acc, &g| acc.left_mul(g))
    }
}

pub fn eval_word(w: &GeneratorWord) -> Permutation {
    w.eval()
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.letters {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

/// Distance on the `n`-cycle.
#[inline]
pub fn cycle_dist(n: usize, a: usize, b: usize) -> usize {
    let d = (a + n - b % n) % n;
    d.min(n - d)
}

/// Maximum pairwise cycle distance of a point set; 0 for empty sets and singletons.
pub fn cycle_diam(n: usize, points: &[usize]) -> usize {
    let mut mask = vec![false; n];
    for &x in points {
        mask[x % n] = true;
    }
    CircleScratch::new(n).diam(&mask)
}

/// Reusable buffers for computing diameters of subsets of `Z/n` in `O(n)`.
#[derive(Debug, Clone)]
pub struct CircleScratch {
    n: usize,
    nearest: Vec<usize>,
}

impl CircleScratch {
    pub fn new(n: usize) -> Self {
        CircleScratch {
            n,
            nearest: vec![0; n],
        }
    }

    /// Diameter of `{x : mask[x]}`.
    ///
    /// For a member `x`, the farthest member is the one nearest to the
    /// antipodal pair `{x + floor(n/2), x + ceil(n/2)}`, and
    /// `d(x, y) = floor(n/2) - d(y, antipodes)`.
    pub fn diam(&mut self, mask: &[bool]) -> usize {
        let n = self.n;
        debug_assert_eq!(mask.len(), n);
        let Some(first) = mask.iter().position(|&b| b) else {
            return 0;
        };
        // distance from every point to the nearest member, two circular sweeps
        let far = n;
        let mut last = first;
        for step in 0..n {
            let z = (first + step) % n;
            if mask[z] {
                last = z;
            }
            self.nearest[z] = (z + n - last) % n;
        }
        let mut next = far;
        for step in 0..2 * n {
            let z = (first + 2 * n - step) % n;
            if mask[z] {
                next = 0;
            } else if next < far {
                next += 1;
            }
            if next < self.nearest[z] {
                self.nearest[z] = next;
            }
        }
        let half_lo = n / 2;
        let half_hi = n - n / 2;
        (0..n)
            .filter(|&x| mask[x])
            .map(|x| {
                let a = self.nearest[(x + half_lo) % n];
                let b = self.nearest[(x + half_hi) % n];
                half_lo - a.min(b).min(half_lo)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Disjoint cycles of length at least 2. Each cycle starts at its smallest
/// point and cycles are listed by that point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomposition {
    pub n: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn reconstruct(&self) -> Permutation {
        Permutation::from_cycles(self.n, &self.cycles)
            .expect("cycles of a decomposition are disjoint")
    }
}

pub fn cycle_decompose(p: &Permutation) -> CycleDecomposition {
    let n = p.n();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] || p.apply(start) == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = p.apply(x);
        }
        cycles.push(cycle);
    }
    CycleDecomposition { n, cycles }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        (0..factorial(n).unwrap())
            .map(|r| Permutation::from_lehmer_rank(n, r).unwrap())
            .collect()
    }

    #[test]
    fn compose_reads_right_to_left() {
        let a = Permutation::transposition(4, 1, 2).unwrap();
        let b = Permutation::transposition(4, 2, 3).unwrap();
        assert_eq!(a.compose(&b).unwrap().images(), &[0, 2, 3, 1]);
        let c = Permutation::c(5);
        let cinv = Permutation::rotation(5, -1);
        assert!(c.compose(&cinv).unwrap().is_identity());
        let p = perm(&[2, 0, 1, 4, 3]);
        assert_eq!(Permutation::identity(5).compose(&p).unwrap(), p);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = Permutation::identity(3)
            .compose(&Permutation::identity(4))
            .unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(4).inverse().is_identity());
        assert_eq!(Permutation::c(4).inverse().images(), &[3, 0, 1, 2]);
        assert_eq!(Permutation::t(5).inverse(), Permutation::t(5));
    }

    #[test]
    fn inverse_cancels_exhaustively() {
        for n in 1..=6 {
            for p in all_perms(n) {
                assert!(p.compose(&p.inverse()).unwrap().is_identity());
                assert!(p.inverse().compose(&p).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn lehmer_rank_is_a_bijection() {
        for n in 1..=6 {
            for (r, p) in all_perms(n).iter().enumerate() {
                assert_eq!(p.lehmer_rank(), r);
            }
        }
        assert_eq!(Permutation::identity(7).lehmer_rank(), 0);
        assert!(Permutation::from_lehmer_rank(3, 6).is_err());
    }

    #[test]
    fn eval_word_examples() {
        assert!(GeneratorWord::new(4).eval().is_identity());
        let w = GeneratorWord::parse(4, "tctCt").unwrap();
        assert_eq!(w.eval().images(), &[2, 1, 0, 3]);
        let w = GeneratorWord::parse(3, "ct").unwrap();
        assert_eq!(w.eval(), Permutation::transposition(3, 0, 2).unwrap());
        assert_eq!(w.eval(), Permutation::c(3).compose(&Permutation::t(3)).unwrap());
    }

    #[test]
    fn word_text_round_trip_and_errors() {
        let w = GeneratorWord::parse(6, "tcCCt").unwrap();
        assert_eq!(w.to_string(), "tcCCt");
        assert_eq!(w.len(), 5);
        assert!(GeneratorWord::parse(6, "tx").is_err());
    }

    #[test]
    fn parse_permutation_text() {
        let p: Permutation = "2,1,0,3".parse().unwrap();
        assert_eq!(p.images(), &[2, 1, 0, 3]);
        assert_eq!(p.to_string(), "2,1,0,3");
        assert!("(0 2)".parse::<Permutation>().is_err());
        assert!("0,0,1".parse::<Permutation>().is_err());
        assert!("0,3,1".parse::<Permutation>().is_err());
        assert!("0,a".parse::<Permutation>().is_err());
    }

    #[test]
    fn cycle_dist_examples() {
        assert_eq!(cycle_dist(6, 1, 5), 2);
        assert_eq!(cycle_dist(7, 3, 3), 0);
        assert_eq!(cycle_dist(4, 0, 2), 2);
        assert_eq!(cycle_dist(1, 0, 0), 0);
    }

    #[test]
    fn cycle_dist_triangle_inequality() {
        for n in 1..=12 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert!(cycle_dist(n, a, c) <= cycle_dist(n, a, b) + cycle_dist(n, b, c));
                    }
                }
            }
        }
    }

    fn naive_diam(n: usize, pts: &[usize]) -> usize {
        let mut best = 0;
        for &x in pts {
            for &y in pts {
                best = best.max(cycle_dist(n, x, y));
            }
        }
        best
    }

    #[test]
    fn cycle_diam_examples() {
        assert_eq!(cycle_diam(6, &[0, 3]), 3);
        assert_eq!(cycle_diam(9, &[4]), 0);
        assert_eq!(cycle_diam(9, &[]), 0);
        assert_eq!(cycle_diam(5, &[0, 1, 2, 3, 4]), 2);
    }

    #[test]
    fn cycle_diam_matches_pairwise_max_on_all_subsets() {
        for n in 1..=12usize {
            for mask in 0u32..(1 << n) {
                let pts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let d = cycle_diam(n, &pts);
                assert_eq!(d, naive_diam(n, &pts), "n={n} pts={pts:?}");
                assert!(d <= n / 2);
            }
        }
    }

    #[test]
    fn cycle_decompose_examples() {
        assert!(Permutation::identity(5).cycles().cycles.is_empty());
        let t = Permutation::transposition(4, 0, 2).unwrap();
        assert_eq!(t.cycles().cycles, vec![vec![0, 2]]);
        assert_eq!(
            perm(&[1, 0, 3, 4, 2]).cycles().cycles,
            vec![vec![0, 1], vec![2, 3, 4]]
        );
    }

    #[test]
    fn cycle_decompose_reconstructs_exhaustively() {
        for n in 1..=6 {
            for p in all_perms(n) {
                let dec = p.cycles();
                assert!(dec.cycles.iter().all(|c| c.len() >= 2));
                assert_eq!(dec.reconstruct(), p);
            }
        }
    }

    #[test]
    fn left_mul_agrees_with_compose() {
        for n in 1..=5 {
            for p in all_perms(n) {
                for g in Letter::ALL {
                    let expect = Permutation::generator(n, g).compose(&p).unwrap();
                    assert_eq!(p.left_mul(g), expect);
                }
                assert_eq!(p.rotate(3), Permutation::rotation(n, 3).compose(&p).unwrap());
            }
        }
    }
}
