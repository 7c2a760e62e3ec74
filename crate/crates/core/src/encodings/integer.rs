//! Integer-vector genotype: gene `x` is the S-box output for input `x`.

use rand::seq::index::sample;
use rand::Rng;

use crate::sbox::{check_width, SBox, SBoxError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerGenotype {
    n: u32,
    genes: Vec<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntCrossover {
    OnePoint,
    TwoPoint,
    Average,
}

impl IntCrossover {
    pub const ALL: [IntCrossover; 3] = [Self::OnePoint, Self::TwoPoint, Self::Average];
}

impl IntegerGenotype {
    pub fn new(n: u32, genes: Vec<u16>) -> Result<Self, SBoxError> {
        // same constraints as an S-box table
        let sbox = SBox::new(n, genes)?;
        Ok(Self {
            n,
            genes: sbox.into_table(),
        })
    }

    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self, SBoxError> {
        check_width(n)?;
        let size = 1u16 << n;
        let genes = (0..size).map(|_| rng.gen_range(0..size)).collect();
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

    /// Copy with gene `pos` set to `value`.
    pub fn mutate_at(&self, pos: usize, value: u16) -> Self {
        assert!(u32::from(value) < 1 << self.n, "gene value out of range");
        let mut genes = self.genes.clone();
        genes[pos] = value;
        Self { n: self.n, genes }
    }

    /// Resamples one uniformly chosen gene uniformly from `[0, 2^n)`.
    pub fn mutate<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let pos = rng.gen_range(0..self.genes.len());
        let value = rng.gen_range(0..1u16 << self.n);
        self.mutate_at(pos, value)
    }

    pub fn crossover<R: Rng + ?Sized>(&self, other: &Self, op: IntCrossover, rng: &mut R) -> Self {
        assert_eq!(self.n, other.n, "parents differ in width");
        let len = self.genes.len();
        let genes = match op {
            IntCrossover::OnePoint => one_point(&self.genes, &other.genes, rng.gen_range(1..len)),
            IntCrossover::TwoPoint => {
                let cuts = sample(rng, len - 1, 2);
                let (a, b) = (cuts.index(0) + 1, cuts.index(1) + 1);
                two_point(&self.genes, &other.genes, a.min(b), a.max(b))
            }
            IntCrossover::Average => average(&self.genes, &other.genes),
        };
        Self { n: self.n, genes }
    }
}

/// `p1[..cut]` followed by `p2[cut..]`.
pub fn one_point(p1: &[u16], p2: &[u16], cut: usize) -> Vec<u16> {
    p1[..cut].iter().chain(&p2[cut..]).copied().collect()
}

/// `p1` outside `[lo, hi)`, `p2` inside.
pub fn two_point(p1: &[u16], p2: &[u16], lo: usize, hi: usize) -> Vec<u16> {
    p1.iter()
        .zip(p2)
        .enumerate()
        .map(|(i, (&a, &b))| if (lo..hi).contains(&i) { b } else { a })
        .collect()
}

/// Gene-wise mean, halves rounded up.
pub fn average(p1: &[u16], p2: &[u16]) -> Vec<u16> {
    p1.iter()
        .zip(p2)
        .map(|(&a, &b)| (u32::from(a) + u32::from(b)).div_ceil(2) as u16)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decode_is_verbatim() {
        let g = IntegerGenotype::new(4, (0..16).collect()).unwrap();
        assert_eq!(g.decode(), SBox::identity(4).unwrap());
        let zero = IntegerGenotype::new(4, vec![0; 16]).unwrap();
        assert_eq!(zero.decode().missing_outputs(), 15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = IntegerGenotype::random(5, &mut rng).unwrap();
        assert_eq!(r.decode().table(), r.genes());
    }

    #[test]
    fn mutation_changes_at_most_one_gene() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = IntegerGenotype::random(4, &mut rng).unwrap();
        for _ in 0..200 {
            let m = g.mutate(&mut rng);
            let diff = g.genes().iter().zip(m.genes()).filter(|(a, b)| a != b).count();
            assert!(diff <= 1);
            assert!(m.genes().iter().all(|&v| v < 16));
        }
        let a = g.mutate(&mut ChaCha8Rng::seed_from_u64(9));
        let b = g.mutate(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn mutate_at_sets_single_gene() {
        let g = IntegerGenotype::new(4, vec![0; 16]).unwrap();
        let m = g.mutate_at(3, 7);
        let mut expected = [0; 16];
        expected[3] = 7;
        assert_eq!(m.genes(), &expected[..]);
    }

    #[test]
    fn crossover_idempotent_on_equal_parents() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = IntegerGenotype::random(4, &mut rng).unwrap();
        for op in IntCrossover::ALL {
            assert_eq!(g.crossover(&g, op, &mut rng), g);
        }
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(average(&[0; 16], &[15; 16]), vec![8; 16]);
        assert_eq!(average(&[3, 4], &[4, 4]), vec![4, 4]);
        let child = one_point(&[0; 16], &[1; 16], 4);
        assert_eq!(&child[..4], &[0; 4]);
        assert_eq!(&child[4..], &[1; 12]);
        assert_eq!(two_point(&[0; 6], &[1; 6], 2, 4), vec![0, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn crossover_children_mix_parent_genes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p1 = IntegerGenotype::new(4, vec![0; 16]).unwrap();
        let p2 = IntegerGenotype::new(4, vec![15; 16]).unwrap();
        for _ in 0..100 {
            for op in [IntCrossover::OnePoint, IntCrossover::TwoPoint] {
                let c = p1.crossover(&p2, op, &mut rng);
                // cuts stay inside [1, 2^n - 1], so both parents contribute
                assert_eq!(c.genes()[0], 0);
                assert!(c.genes().contains(&15));
            }
        }
    }
}
