//! Differential and boomerang tables, their uniformities, and algebraic degree.
//!
//! The boomerang connectivity table follows
//! `T(a, b) = #{x : F⁻¹(F(x) ^ a) ^ F⁻¹(F(x ^ b) ^ a) = b}`.
//! [`bct_naive`] evaluates that definition directly in `O(2^3n)`. [`bct_fast`]
//! uses `H_a(x) = F⁻¹(F(x) ^ a) ^ x`, for which the condition reduces to
//! `H_a(x) = H_a(x ^ b)`: every ordered pair `(x, x')` in the same `H_a`
//! bucket contributes one solution at `b = x ^ x'`.

use serde::{Deserialize, Serialize};

use crate::sbox::{SBox, SBoxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Ddt,
    Bct,
}

/// A `2^n x 2^n` table of solution counts, row-major by `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n: u32,
    kind: TableKind,
    entries: Vec<u32>,
}

impl CountTable {
    fn zeroed(n: u32, kind: TableKind) -> Self {
        let size = 1usize << n;
        Self {
            n,
            kind,
            entries: vec![0; size * size],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.entries[a * self.size() + b]
    }

    pub fn row(&self, a: usize) -> &[u32] {
        let size = self.size();
        &self.entries[a * size..(a + 1) * size]
    }

    fn row_mut(&mut self, a: usize) -> &mut [u32] {
        let size = self.size();
        &mut self.entries[a * size..(a + 1) * size]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Maximum over `a != 0` and, for a BCT, `b != 0`.
    pub fn uniformity(&self) -> u32 {
        let skip_b = usize::from(self.kind == TableKind::Bct);
        (1..self.size())
            .flat_map(|a| self.row(a)[skip_b..].iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// One comma-separated line per row `a`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 3);
        for a in 0..self.size() {
            let line: Vec<String> = self.row(a).iter().map(u32::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Difference distribution table: `entries[a][b] = #{x : F(x) ^ F(x ^ a) = b}`.
pub fn ddt(f: &SBox) -> CountTable {
    let mut table = CountTable::zeroed(f.n(), TableKind::Ddt);
    let t = f.table();
    for a in 0..f.size() {
        let row = table.row_mut(a);
        for x in 0..t.len() {
            row[(t[x] ^ t[x ^ a]) as usize] += 1;
        }
    }
    table
}

/// Differential uniformity, computed row by row without materializing the DDT.
pub fn delta_uniformity(f: &SBox) -> u32 {
    let t = f.table();
    let mut row = vec![0u32; t.len()];
    let mut best = 0;
    for a in 1..t.len() {
        row.fill(0);
        for x in 0..t.len() {
            row[(t[x] ^ t[x ^ a]) as usize] += 1;
        }
        best = best.max(row.iter().copied().max().unwrap_or(0));
    }
    best
}

/// Literal triple loop over `(a, b, x)`. Kept as a reference for [`bct_fast`].
pub fn bct_naive(f: &SBox) -> Result<CountTable, SBoxError> {
    let inv = f.invert()?;
    let (t, ti) = (f.table(), inv.table());
    let size = f.size();
    let mut table = CountTable::zeroed(f.n(), TableKind::Bct);
    for a in 0..size {
        let row = table.row_mut(a);
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = (0..size)
                .filter(|&x| {
                    let lhs = ti[t[x] as usize ^ a] ^ ti[t[x ^ b] as usize ^ a];
                    lhs as usize == b
                })
                .count() as u32;
        }
    }
    Ok(table)
}

/// Scratch buffers for bucketing one BCT row.
struct BctRows<'a> {
    table: &'a [u16],
    inverse: &'a [u16],
    keys: Vec<u16>,
    sorted: Vec<u16>,
    starts: Vec<u32>,
}

impl<'a> BctRows<'a> {
    fn new(table: &'a [u16], inverse: &'a [u16]) -> Self {
        let size = table.len();
        Self {
            table,
            inverse,
            keys: vec![0; size],
            sorted: vec![0; size],
            starts: vec![0; size + 1],
        }
    }

    /// Overwrites `row` with `T(a, ·)`.
    fn fill(&mut self, a: usize, row: &mut [u32]) {
        let size = self.table.len();
        self.starts.fill(0);
        for x in 0..size {
            let h = self.inverse[self.table[x] as usize ^ a] ^ x as u16;
            self.keys[x] = h;
            self.starts[h as usize + 1] += 1;
        }
        for v in 0..size {
            self.starts[v + 1] += self.starts[v];
        }
        // counting sort by key; `starts[v]` ends up as the end of bucket v
        for x in 0..size {
            let slot = &mut self.starts[self.keys[x] as usize];
            self.sorted[*slot as usize] = x as u16;
            *slot += 1;
        }
        row.fill(0);
        row[0] = size as u32;
        let mut begin = 0usize;
        for v in 0..size {
            let end = self.starts[v] as usize;
            let bucket = &self.sorted[begin..end];
            for (i, &x) in bucket.iter().enumerate() {
                for &y in &bucket[i + 1..] {
                    row[(x ^ y) as usize] += 2;
                }
            }
            begin = end;
        }
    }
}

/// Boomerang connectivity table by bucketing on `H_a`.
pub fn bct_fast(f: &SBox) -> Result<CountTable, SBoxError> {
    let inv = f.invert()?;
    let mut table = CountTable::zeroed(f.n(), TableKind::Bct);
    let mut rows = BctRows::new(f.table(), inv.table());
    for a in 0..f.size() {
        rows.fill(a, table.row_mut(a));
    }
    Ok(table)
}

/// Boomerang uniformity: the largest BCT entry with `a, b != 0`.
pub fn boomerang_uniformity(f: &SBox) -> Result<u32, SBoxError> {
    let inv = f.invert()?;
    let mut rows = BctRows::new(f.table(), inv.table());
    let mut row = vec![0u32; f.size()];
    let mut best = 0;
    for a in 1..f.size() {
        rows.fill(a, &mut row);
        best = best.max(row[1..].iter().copied().max().unwrap_or(0));
    }
    Ok(best)
}

/// In-place binary Möbius transform: truth table to ANF coefficients.
pub fn moebius_transform(bits: &mut [u8]) {
    let len = bits.len();
    let mut step = 1;
    while step < len {
        for x in 0..len {
            if x & step != 0 {
                bits[x] ^= bits[x ^ step];
            }
        }
        step <<= 1;
    }
}

/// Maximum monomial degree in the ANF of any coordinate function.
pub fn algebraic_degree(f: &SBox) -> u32 {
    let mut coeffs = vec![0u8; f.size()];
    let mut degree = 0;
    for bit in 0..f.n() {
        for (c, &y) in coeffs.iter_mut().zip(f.table()) {
            *c = (y >> bit & 1) as u8;
        }
        moebius_transform(&mut coeffs);
        let d = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(m, _)| m.count_ones())
            .max()
            .unwrap_or(0);
        degree = degree.max(d);
    }
    degree
}

/// Summary of the cryptographic properties of one S-box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub n: u32,
    pub delta: u32,
    /// Absent for non-permutations.
    pub beta: Option<u32>,
    pub bal: usize,
    pub degree: u32,
}

impl PropertyReport {
    pub fn of(f: &SBox) -> Self {
        Self {
            n: f.n(),
            delta: delta_uniformity(f),
            beta: boomerang_uniformity(f).ok(),
            bal: f.missing_outputs(),
            degree: algebraic_degree(f),
        }
    }
}
