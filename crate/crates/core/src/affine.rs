//! Affine permutations of GF(2)^n and affine-equivalent S-boxes.

use rand::Rng;

use crate::sbox::{check_width, SBox, SBoxError};

/// `x ↦ M·x + c` over GF(2). Row `i` of `M` is stored as a bitmask; bit `i`
/// of the output is the parity of `rows[i] & x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    n: u32,
    rows: Vec<u16>,
    constant: u16,
}

/// Rank of a binary matrix given as row bitmasks.
pub fn gf2_rank(rows: &[u16]) -> u32 {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..16 {
        let mask = 1u16 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & mask != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank as u32
}

impl AffineMap {
    pub fn new(n: u32, rows: Vec<u16>, constant: u16) -> Result<Self, SBoxError> {
        check_width(n)?;
        let limit = 1u32 << n;
        if rows.len() != n as usize {
            return Err(SBoxError::WrongLength {
                expected: n as usize,
                got: rows.len(),
            });
        }
        if let Some((index, &r)) = rows.iter().enumerate().find(|(_, &r)| u32::from(r) >= limit) {
            return Err(SBoxError::OutOfRange {
                index,
                value: r.into(),
                n,
            });
        }
        if u32::from(constant) >= limit {
            return Err(SBoxError::OutOfRange {
                index: n as usize,
                value: constant.into(),
                n,
            });
        }
        if gf2_rank(&rows) != n {
            return Err(SBoxError::SingularMatrix);
        }
        Ok(Self { n, rows, constant })
    }

    pub fn identity(n: u32) -> Result<Self, SBoxError> {
        Self::new(n, (0..n).map(|i| 1u16 << i).collect(), 0)
    }

    /// Uniform invertible matrix by rejection sampling, uniform constant.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self, SBoxError> {
        check_width(n)?;
        let limit = 1u16 << n;
        let rows = loop {
            let rows: Vec<u16> = (0..n).map(|_| rng.gen_range(0..limit)).collect();
            if gf2_rank(&rows) == n {
                break rows;
            }
        };
        let constant = rng.gen_range(0..limit);
        Ok(Self { n, rows, constant })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[u16] {
        &self.rows
    }

    pub fn constant(&self) -> u16 {
        self.constant
    }

    pub fn rank(&self) -> u32 {
        gf2_rank(&self.rows)
    }

    #[inline]
    pub fn apply(&self, x: u16) -> u16 {
        let linear = self
            .rows
            .iter()
            .enumerate()
            .fold(0u16, |acc, (i, &row)| acc | (((row & x).count_ones() & 1) as u16) << i);
        linear ^ self.constant
    }

    pub fn to_sbox(&self) -> SBox {
        SBox::from_table_unchecked(self.n, (0..1u16 << self.n).map(|x| self.apply(x)).collect())
    }
}

/// `x ↦ outer(f(inner(x)))`.
pub fn apply_affine(outer: &AffineMap, f: &SBox, inner: &AffineMap) -> Result<SBox, SBoxError> {
    if outer.n != f.n() {
        return Err(SBoxError::DimensionMismatch(outer.n, f.n()));
    }
    if inner.n != f.n() {
        return Err(SBoxError::DimensionMismatch(inner.n, f.n()));
    }
    let table = (0..1u16 << f.n())
        .map(|x| outer.apply(f.table()[inner.apply(x) as usize]))
        .collect();
    Ok(SBox::from_table_unchecked(f.n(), table))
}
