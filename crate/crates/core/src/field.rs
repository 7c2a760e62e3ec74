//! Arithmetic in GF(2^n) over a polynomial basis, and power-map S-boxes.

use crate::sbox::{check_width, SBox, SBoxError};

/// Degree of a nonzero binary polynomial.
fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of binary polynomial division.
fn poly_mod(mut a: u32, m: u32) -> u32 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let d = degree(poly);
    (1..=d / 2).all(|k| (1u32 << k..1u32 << (k + 1)).all(|q| poly_mod(poly, q) != 0))
}

/// The field GF(2^n) defined by an irreducible polynomial. Bit `i` of `poly`
/// is the coefficient of `x^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    n: u32,
    poly: u32,
}

impl FieldSpec {
    pub fn new(n: u32, poly: u32) -> Result<Self, SBoxError> {
        check_width(n)?;
        if poly >> n != 1 || !is_irreducible(poly) {
            return Err(SBoxError::InvalidField { n, poly });
        }
        Ok(Self { n, poly })
    }

    /// Low-weight irreducible polynomial for each supported width.
    pub fn default_for(n: u32) -> Result<Self, SBoxError> {
        let poly = match n {
            3 => 0xB,
            4 => 0x13,
            5 => 0x25,
            6 => 0x43,
            7 => 0x83,
            8 => 0x11B,
            9 => 0x211,
            10 => 0x409,
            _ => return Err(SBoxError::InvalidWidth(n)),
        };
        Self::new(n, poly)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    /// Carry-less product of `a` and `b` reduced modulo the field polynomial.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order() && b < self.order());
        let mut acc = 0u32;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.n & 1 == 1 {
                a ^= self.poly;
            }
        }
        acc
    }

    /// `base^exp` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut result = 1;
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        result
    }

    /// Multiplicative inverse, with `0` mapped to `0`.
    pub fn inv(&self, a: u32) -> u32 {
        self.pow(a, u64::from(self.order()) - 2)
    }

    /// The S-box `x ↦ x^d`.
    pub fn power_map(&self, d: u64) -> SBox {
        let table = (0..self.order()).map(|x| self.pow(x, d) as u16).collect();
        SBox::from_table_unchecked(self.n, table)
    }

    /// `x ↦ x^(2^n - 2)`, field inversion extended by `0 ↦ 0`.
    pub fn inverse_map(&self) -> SBox {
        self.power_map(u64::from(self.order()) - 2)
    }

    /// The Gold map `x ↦ x^(2^i + 1)`.
    pub fn gold_map(&self, i: u32) -> SBox {
        self.power_map((1u64 << i) + 1)
    }
}

/// Multiplication in the field described by `fs`.
pub fn gf_mul(fs: &FieldSpec, a: u32, b: u32) -> u32 {
    fs.mul(a, b)
}

/// Power map `x^d` under `fs`.
pub fn power_map(fs: &FieldSpec, d: u64) -> SBox {
    fs.power_map(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn defaults_are_irreducible() {
        for n in 3..=10 {
            let fs = FieldSpec::default_for(n).unwrap();
            assert_eq!(fs.poly() >> n, 1);
        }
    }

    #[test]
    fn rejects_reducible_and_wrong_degree() {
        // x^4 + 1 = (x + 1)^4
        assert!(FieldSpec::new(4, 0x11).is_err());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(FieldSpec::new(4, 0x15).is_err());
        assert!(FieldSpec::new(5, 0x13).is_err());
        assert!(FieldSpec::new(4, 0x19).is_ok());
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // Number of irreducible binary polynomials of degree d: 2,1,2,3,6,9,18,30 for d=1..8.
        let expected = [2, 1, 2, 3, 6, 9, 18, 30];
        for (d, &count) in (1..=8u32).zip(&expected) {
            let got = (1u32 << d..1u32 << (d + 1))
                .filter(|&p| is_irreducible(p))
                .count();
            assert_eq!(got, count, "degree {d}");
        }
    }

    #[test]
    fn mul_examples() {
        let fs = FieldSpec::new(4, 0x13).unwrap();
        for b in 0..16 {
            assert_eq!(fs.mul(0, b), 0);
        }
        assert_eq!(fs.mul(1, 7), 7);
        assert_eq!(fs.mul(2, 9), 1);
    }

    #[test]
    fn mul_field_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [4, 5, 6] {
            let fs = FieldSpec::default_for(n).unwrap();
            let q = fs.order();
            for _ in 0..500 {
                let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
                assert_eq!(fs.mul(a, b), fs.mul(b, a));
                assert_eq!(fs.mul(fs.mul(a, b), c), fs.mul(a, fs.mul(b, c)));
                assert_eq!(fs.mul(a, b ^ c), fs.mul(a, b) ^ fs.mul(a, c));
            }
            for a in 1..q {
                assert_eq!(fs.mul(a, fs.inv(a)), 1);
            }
        }
    }

    #[test]
    fn power_map_examples() {
        let fs4 = FieldSpec::default_for(4).unwrap();
        assert_eq!(fs4.power_map(1), SBox::identity(4).unwrap());
        let fs5 = FieldSpec::default_for(5).unwrap();
        assert!(fs5.power_map(3).is_permutation());
        // 0^0 = 1
        assert!(fs4.power_map(0).table().iter().all(|&v| v == 1));
    }

    #[test]
    fn inverse_map_is_involution() {
        let fs = FieldSpec::default_for(4).unwrap();
        let inv = fs.inverse_map();
        assert_eq!(inv, fs.power_map(14));
        assert_eq!(inv.compose(&inv).unwrap(), SBox::identity(4).unwrap());
        assert_eq!(inv.invert().unwrap(), inv);
    }

    #[test]
    fn power_map_bijective_iff_coprime() {
        for n in 3..=6 {
            let fs = FieldSpec::default_for(n).unwrap();
            let m = u64::from(fs.order()) - 1;
            for d in 1..fs.order() as u64 {
                assert_eq!(
                    fs.power_map(d).is_permutation(),
                    gcd(d, m) == 1,
                    "n={n} d={d}"
                );
            }
        }
    }
}
