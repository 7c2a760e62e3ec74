//! Permutation genotype and its mutation/crossover operators.
//!
//! The slice-level functions take explicit cut points so they can be traced by
//! hand; [`PermutationGenotype`] draws those parameters from an RNG.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::sbox::{check_width, SBox, SBoxError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationGenotype {
    n: u32,
    genes: Vec<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermMutation {
    Insert,
    Inversion,
    Swap,
}

impl PermMutation {
    pub const ALL: [PermMutation; 3] = [Self::Insert, Self::Inversion, Self::Swap];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermCrossover {
    Pmx,
    Pbx,
    Ox,
    Ulx,
    Cyclic,
}

impl PermCrossover {
    pub const ALL: [PermCrossover; 5] = [Self::Pmx, Self::Pbx, Self::Ox, Self::Ulx, Self::Cyclic];
}

impl PermutationGenotype {
    pub fn new(n: u32, genes: Vec<u16>) -> Result<Self, SBoxError> {
        let sbox = SBox::new(n, genes)?;
        if !sbox.is_permutation() {
            return Err(SBoxError::NotPermutation);
        }
        Ok(Self {
            n,
            genes: sbox.into_table(),
        })
    }

    /// Uniform random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self, SBoxError> {
        check_width(n)?;
        let mut genes: Vec<u16> = (0..1u16 << n).collect();
        genes.shuffle(rng);
        Ok(Self { n, genes })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn genes(&self) -> &[u16] {
        &self.genes
    }

    pub fn decode(&self) -> SBox {
        SBox::from_table_unchecked(self.n, self.genes.clone())
    }

    pub fn mutate<R: Rng + ?Sized>(&self, op: PermMutation, rng: &mut R) -> Self {
        let mut genes = self.genes.clone();
        let picks = sample(rng, genes.len(), 2);
        let (i, j) = (picks.index(0), picks.index(1));
        match op {
            PermMutation::Swap => swap(&mut genes, i, j),
            PermMutation::Inversion => inversion(&mut genes, i.min(j), i.max(j)),
            PermMutation::Insert => insert(&mut genes, i, j),
        }
        Self { n: self.n, genes }
    }

    pub fn crossover<R: Rng + ?Sized>(&self, other: &Self, op: PermCrossover, rng: &mut R) -> Self {
        assert_eq!(self.n, other.n, "parents differ in width");
        let (p1, p2) = (&self.genes[..], &other.genes[..]);
        let len = p1.len();
        let segment = |rng: &mut R| {
            let picks = sample(rng, len, 2);
            let (a, b) = (picks.index(0), picks.index(1));
            (a.min(b), a.max(b))
        };
        let genes = match op {
            PermCrossover::Pmx => {
                let (lo, hi) = segment(rng);
                pmx(p1, p2, lo, hi)
            }
            PermCrossover::Ox => {
                let (lo, hi) = segment(rng);
                ox(p1, p2, lo, hi)
            }
            PermCrossover::Pbx => {
                let mask: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
                pbx(p1, p2, &mask)
            }
            PermCrossover::Ulx => ulx(p1, p2, rng),
            PermCrossover::Cyclic => cyclic(p1, p2),
        };
        debug_assert!(is_permutation(&genes));
        Self { n: self.n, genes }
    }
}

pub fn is_permutation(genes: &[u16]) -> bool {
    let mut seen = vec![false; genes.len()];
    genes.iter().all(|&v| {
        let v = v as usize;
        v < seen.len() && !std::mem::replace(&mut seen[v], true)
    })
}

pub fn swap(genes: &mut [u16], i: usize, j: usize) {
    genes.swap(i, j);
}

/// Reverses `genes[lo..=hi]`.
pub fn inversion(genes: &mut [u16], lo: usize, hi: usize) {
    genes[lo..=hi].reverse();
}

/// Removes the element at `from` and reinserts it at index `to`.
pub fn insert(genes: &mut [u16], from: usize, to: usize) {
    if from < to {
        genes[from..=to].rotate_left(1);
    } else {
        genes[to..=from].rotate_right(1);
    }
}

/// Partially mapped crossover: `p1[lo..=hi]` is kept, the rest comes from
/// `p2` with conflicts resolved through the segment mapping.
pub fn pmx(p1: &[u16], p2: &[u16], lo: usize, hi: usize) -> Vec<u16> {
    let mut pos1 = vec![0usize; p1.len()];
    for (i, &v) in p1.iter().enumerate() {
        pos1[v as usize] = i;
    }
    let in_segment = |i: usize| (lo..=hi).contains(&i);
    (0..p1.len())
        .map(|i| {
            if in_segment(i) {
                return p1[i];
            }
            let mut v = p2[i];
            while in_segment(pos1[v as usize]) {
                v = p2[pos1[v as usize]];
            }
            v
        })
        .collect()
}

/// Position-based crossover: masked positions come from `p1`, the remaining
/// positions take the unused values in the order they appear in `p2`.
pub fn pbx(p1: &[u16], p2: &[u16], mask: &[bool]) -> Vec<u16> {
    let mut used = vec![false; p1.len()];
    for (i, &keep) in mask.iter().enumerate() {
        if keep {
            used[p1[i] as usize] = true;
        }
    }
    let mut fill = p2.iter().copied().filter(|&v| !used[v as usize]);
    (0..p1.len())
        .map(|i| {
            if mask[i] {
                p1[i]
            } else {
                fill.next().expect("fill values match free positions")
            }
        })
        .collect()
}

/// Order crossover: `p1[lo..=hi]` is kept; starting after `hi` and wrapping,
/// free positions receive the unused values of `p2` in `p2`'s cyclic order
/// from the same point.
pub fn ox(p1: &[u16], p2: &[u16], lo: usize, hi: usize) -> Vec<u16> {
    let len = p1.len();
    let mut child = vec![0u16; len];
    let mut used = vec![false; len];
    for i in lo..=hi {
        child[i] = p1[i];
        used[p1[i] as usize] = true;
    }
    let mut src = (hi + 1) % len;
    for k in 0..len - (hi - lo + 1) {
        let dst = (hi + 1 + k) % len;
        while used[p2[src] as usize] {
            src = (src + 1) % len;
        }
        child[dst] = p2[src];
        used[p2[src] as usize] = true;
    }
    child
}

/// Uniform-like crossover. Agreeing positions are copied; the others pick one
/// parent's gene at random, fall back to the other parent's gene if taken,
/// and otherwise are filled at the end with a shuffle of the leftover values.
pub fn ulx<R: Rng + ?Sized>(p1: &[u16], p2: &[u16], rng: &mut R) -> Vec<u16> {
    let len = p1.len();
    let mut child = vec![0u16; len];
    let mut used = vec![false; len];
    for i in 0..len {
        if p1[i] == p2[i] {
            child[i] = p1[i];
            used[p1[i] as usize] = true;
        }
    }
    let mut deferred = Vec::new();
    for i in (0..len).filter(|&i| p1[i] != p2[i]) {
        let (first, second) = if rng.gen_bool(0.5) {
            (p1[i], p2[i])
        } else {
            (p2[i], p1[i])
        };
        if !used[first as usize] {
            child[i] = first;
            used[first as usize] = true;
        } else if !used[second as usize] {
            child[i] = second;
            used[second as usize] = true;
        } else {
            deferred.push(i);
        }
    }
    let mut rest: Vec<u16> = (0..len as u16).filter(|&v| !used[v as usize]).collect();
    rest.shuffle(rng);
    for (i, v) in deferred.into_iter().zip(rest) {
        child[i] = v;
    }
    child
}

/// Cycle crossover: cycles are taken alternately from `p1` and `p2`,
/// starting with `p1`.
pub fn cyclic(p1: &[u16], p2: &[u16]) -> Vec<u16> {
    let len = p1.len();
    let mut pos1 = vec![0usize; len];
    for (i, &v) in p1.iter().enumerate() {
        pos1[v as usize] = i;
    }
    let mut child = vec![0u16; len];
    let mut assigned = vec![false; len];
    let mut from_first = true;
    for start in 0..len {
        if assigned[start] {
            continue;
        }
        let mut i = start;
        while !assigned[i] {
            assigned[i] = true;
            child[i] = if from_first { p1[i] } else { p2[i] };
            i = pos1[p2[i] as usize];
        }
        from_first = !from_first;
    }
    child
}
