//! Lookup-table S-boxes and their text format.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Smallest supported bit width.
pub const MIN_WIDTH: u32 = 3;
/// Largest supported bit width.
pub const MAX_WIDTH: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SBoxError {
    #[error("bit width {0} outside supported range [{MIN_WIDTH}, {MAX_WIDTH}]")]
    InvalidWidth(u32),
    #[error("table has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("entry {value} at index {index} is out of range for a {n}-bit S-box")]
    OutOfRange { index: usize, value: u32, n: u32 },
    #[error("S-box is not a permutation")]
    NotPermutation,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("invalid field polynomial {poly:#x} for n = {n}")]
    InvalidField { n: u32, poly: u32 },
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn check_width(n: u32) -> Result<(), SBoxError> {
    if (MIN_WIDTH..=MAX_WIDTH).contains(&n) {
        Ok(())
    } else {
        Err(SBoxError::InvalidWidth(n))
    }
}

/// An `n x n` S-box stored as its full lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SBox {
    n: u32,
    table: Vec<u16>,
}

impl SBox {
    /// Validates and wraps a lookup table of `2^n` entries.
    pub fn new(n: u32, table: Vec<u16>) -> Result<Self, SBoxError> {
        check_width(n)?;
        let size = 1usize << n;
        if table.len() != size {
            return Err(SBoxError::WrongLength {
                expected: size,
                got: table.len(),
            });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v as usize >= size) {
            return Err(SBoxError::OutOfRange {
                index,
                value: value.into(),
                n,
            });
        }
        Ok(Self { n, table })
    }

    /// Same as [`SBox::new`] for callers holding wider integers.
    pub fn from_values(n: u32, values: &[u32]) -> Result<Self, SBoxError> {
        check_width(n)?;
        let size = 1u32 << n;
        let mut table = Vec::with_capacity(values.len());
        for (index, &value) in values.iter().enumerate() {
            if value >= size {
                return Err(SBoxError::OutOfRange { index, value, n });
            }
            table.push(value as u16);
        }
        Self::new(n, table)
    }

    pub(crate) fn from_table_unchecked(n: u32, table: Vec<u16>) -> Self {
        debug_assert_eq!(table.len(), 1usize << n);
        Self { n, table }
    }

    pub fn identity(n: u32) -> Result<Self, SBoxError> {
        check_width(n)?;
        Ok(Self::from_table_unchecked(n, (0..1u16 << n).collect()))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u16> {
        self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    /// Number of values in `[0, 2^n)` that never appear in the table.
    pub fn missing_outputs(&self) -> usize {
        let mut seen = vec![false; self.size()];
        let mut present = 0;
        for &v in &self.table {
            let slot = &mut seen[v as usize];
            if !*slot {
                *slot = true;
                present += 1;
            }
        }
        self.size() - present
    }

    pub fn is_permutation(&self) -> bool {
        self.missing_outputs() == 0
    }

    pub fn invert(&self) -> Result<Self, SBoxError> {
        if !self.is_permutation() {
            return Err(SBoxError::NotPermutation);
        }
        let mut inv = vec![0u16; self.size()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Ok(Self::from_table_unchecked(self.n, inv))
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &SBox) -> Result<Self, SBoxError> {
        if self.n != inner.n {
            return Err(SBoxError::DimensionMismatch(self.n, inner.n));
        }
        let table = inner.table.iter().map(|&x| self.table[x as usize]).collect();
        Ok(Self::from_table_unchecked(self.n, table))
    }

    /// Renders the two-line text format: `n=<k>` followed by the hex table.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        let width = (self.n as usize).div_ceil(4);
        for (i, v) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v:0width$x}")?;
        }
        writeln!(f)
    }
}

impl FromStr for SBox {
    type Err = SBoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| SBoxError::Parse("empty input".into()))?;
        let n = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| SBoxError::Parse(format!("bad header line `{header}`")))?;
        let mut values = Vec::new();
        for line in lines {
            for tok in line.split_whitespace() {
                let tok = tok.trim_start_matches("0x").trim_start_matches("0X");
                let v = u32::from_str_radix(tok, 16)
                    .map_err(|e| SBoxError::Parse(format!("bad hex value `{tok}`: {e}")))?;
                values.push(v);
            }
        }
        SBox::from_values(n, &values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity4() -> SBox {
        SBox::identity(4).unwrap()
    }

    #[test]
    fn new_accepts_identity() {
        let s = SBox::new(4, (0..16).collect()).unwrap();
        assert_eq!(s, identity4());
        assert_eq!(s.size(), 16);
    }

    #[test]
    fn new_rejects_bad_input() {
        assert_eq!(
            SBox::new(4, (0..15).collect()),
            Err(SBoxError::WrongLength {
                expected: 16,
                got: 15
            })
        );
        let mut t: Vec<u16> = (0..15).collect();
        t.push(16);
        assert!(matches!(
            SBox::new(4, t),
            Err(SBoxError::OutOfRange {
                index: 15,
                value: 16,
                ..
            })
        ));
        assert_eq!(SBox::new(2, vec![0; 4]), Err(SBoxError::InvalidWidth(2)));
        assert_eq!(
            SBox::new(11, vec![0; 2048]),
            Err(SBoxError::InvalidWidth(11))
        );
    }

    #[test]
    fn permutation_checks() {
        assert!(identity4().is_permutation());
        let zero = SBox::new(4, vec![0; 16]).unwrap();
        assert!(!zero.is_permutation());
        let flip: Vec<u16> = (0..16).map(|x| x ^ 1).collect();
        assert_eq!(
            flip,
            vec![1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14]
        );
        assert!(SBox::new(4, flip).unwrap().is_permutation());
    }

    #[test]
    fn missing_output_counts() {
        assert_eq!(SBox::new(4, vec![0; 16]).unwrap().missing_outputs(), 15);
        assert_eq!(identity4().missing_outputs(), 0);
        let mut t: Vec<u16> = (0..16).collect();
        t[1] = 0;
        assert_eq!(SBox::new(4, t).unwrap().missing_outputs(), 1);
    }

    #[test]
    fn invert_cycle() {
        assert_eq!(identity4().invert().unwrap(), identity4());
        // x -> x + 1 mod 8
        let rot = SBox::new(3, vec![1, 2, 3, 4, 5, 6, 7, 0]).unwrap();
        assert_eq!(
            rot.invert().unwrap().table(),
            &[7, 0, 1, 2, 3, 4, 5, 6]
        );
        assert_eq!(
            SBox::new(4, vec![0; 16]).unwrap().invert(),
            Err(SBoxError::NotPermutation)
        );
    }

    #[test]
    fn text_round_trip() {
        let s = SBox::new(3, vec![7, 1, 2, 0, 4, 5, 6, 3]).unwrap();
        let text = s.to_text();
        assert_eq!(text, "n=3\n7 1 2 0 4 5 6 3\n");
        assert_eq!(text.parse::<SBox>().unwrap(), s);

        let hex: Vec<String> = (0..32).map(|v| format!("{v:x}")).collect();
        let wide: SBox = format!("n=5\n{}", hex.join(" ")).parse().unwrap();
        assert_eq!(wide, SBox::identity(5).unwrap());
        assert!(wide.to_text().contains(" 1f"));
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!("".parse::<SBox>(), Err(SBoxError::Parse(_))));
        assert!(matches!("m=3\n0".parse::<SBox>(), Err(SBoxError::Parse(_))));
        assert!(matches!(
            "n=3\n0 1 2 zz 4 5 6 7".parse::<SBox>(),
            Err(SBoxError::Parse(_))
        ));
        assert!(matches!(
            "n=3\n0 1 2 3".parse::<SBox>(),
            Err(SBoxError::WrongLength { .. })
        ));
    }

}
