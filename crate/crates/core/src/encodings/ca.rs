//! Cellular-automaton S-boxes: one local rule applied to every cell of an
//! `n`-cell ring.
//!
//! Output bit `i` for input state `s` is the rule evaluated with `vj` bound to
//! bit `(i + j) mod n` of `s`. The neighbourhood word seen by cell `i` is
//! therefore `s` rotated right by `i` within `n` bits, so the whole S-box is
//! read off the rule's truth table.

use super::rule_tree::{Node, RuleTree};
use crate::sbox::SBox;

/// Bit pattern of variable `j` across 64 consecutive assignments starting at
/// assignment `64 * word`.
fn var_word(j: u8, word: usize) -> u64 {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    match j {
        0..=5 => LOW[j as usize],
        _ => {
            if word >> (j - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        }
    }
}

/// Truth table of the rule over all `2^n` assignments, 64 per word.
/// Bits beyond `2^n` in the last word are unspecified.
pub fn truth_table(rule: &RuleTree) -> Vec<u64> {
    let words = ((1usize << rule.n()) / 64).max(1);
    let mut stack: Vec<Vec<u64>> = Vec::new();
    for &node in rule.nodes().iter().rev() {
        let value = match node {
            Node::Var(j) => (0..words).map(|w| var_word(j, w)).collect(),
            Node::Not => {
                let mut a = stack.pop().expect("well-formed tree");
                a.iter_mut().for_each(|w| *w = !*w);
                a
            }
            Node::If => {
                let c = stack.pop().expect("well-formed tree");
                let t = stack.pop().expect("well-formed tree");
                let e = stack.pop().expect("well-formed tree");
                (0..words).map(|w| (c[w] & t[w]) | (!c[w] & e[w])).collect()
            }
            op => {
                let a = stack.pop().expect("well-formed tree");
                let b = stack.pop().expect("well-formed tree");
                let f: fn(u64, u64) -> u64 = match op {
                    Node::Xor => |x, y| x ^ y,
                    Node::And => |x, y| x & y,
                    Node::Or => |x, y| x | y,
                    Node::Nand => |x, y| !(x & y),
                    Node::Xnor => |x, y| !(x ^ y),
                    _ => unreachable!(),
                };
                a.iter().zip(&b).map(|(&x, &y)| f(x, y)).collect()
            }
        };
        stack.push(value);
    }
    stack.pop().expect("non-empty tree")
}

/// S-box of the CA defined by `rule` with periodic boundary.
pub fn decode_ca_rule(rule: &RuleTree) -> SBox {
    let n = rule.n();
    let size = 1usize << n;
    let mask = size - 1;
    let tt = truth_table(rule);
    let bit = |k: usize| (tt[k / 64] >> (k % 64) & 1) as usize;
    let table = (0..size)
        .map(|s| {
            (0..n as usize).fold(0usize, |acc, i| {
                let neighbourhood = ((s >> i) | (s << (n as usize - i))) & mask;
                acc | bit(neighbourhood) << i
            }) as u16
        })
        .collect();
    SBox::from_table_unchecked(n, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::{boomerang_uniformity, delta_uniformity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn decode(n: u32, rule: &str) -> SBox {
        decode_ca_rule(&RuleTree::parse(n, rule).unwrap())
    }

    /// Cell-by-cell simulation, independent of the truth-table shortcut.
    fn simulate(rule: &RuleTree) -> Vec<u16> {
        let n = rule.n() as usize;
        (0..1usize << n)
            .map(|s| {
                let mut out = 0u16;
                for i in 0..n {
                    let mut inputs = 0u32;
                    for j in 0..n {
                        inputs |= (((s >> ((i + j) % n)) & 1) as u32) << j;
                    }
                    out |= u16::from(rule.eval(inputs)) << i;
                }
                out
            })
            .collect()
    }

    #[test]
    fn identity_rule_for_all_widths() {
        for n in 3..=8 {
            assert_eq!(decode(n, "v0"), SBox::identity(n).unwrap());
        }
    }

    #[test]
    fn complement_rule() {
        let s = decode(4, "NOT v0");
        for x in 0..16 {
            assert_eq!(s.apply(x), x ^ 15);
        }
        assert!(s.is_permutation());
    }

    #[test]
    fn xor_neighbour_rule_is_singular() {
        let s = decode(4, "XOR v0 v1");
        for x in 0..16usize {
            let rot = ((x >> 1) | (x << 3)) & 15;
            assert_eq!(s.apply(x), x ^ rot);
        }
        assert_eq!(s.missing_outputs(), 8);
    }

    #[test]
    fn chi_rule_matches_keccak_chi() {
        // b_i = a_i ^ (!a_{i+1} & a_{i+2})
        let s = decode(5, "XOR v0 AND NOT v1 v2");
        assert!(s.is_permutation());
        for x in 0..32usize {
            let bit = |k: usize| x >> (k % 5) & 1;
            let expected = (0..5).fold(0, |acc, i| acc | (bit(i) ^ ((1 ^ bit(i + 1)) & bit(i + 2))) << i);
            assert_eq!(s.apply(x), expected);
        }
        assert_eq!(delta_uniformity(&s), 8);
        assert!(boomerang_uniformity(&s).unwrap() >= 8);
    }

    #[test]
    fn truth_table_decode_matches_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=8 {
            for _ in 0..30 {
                let rule = RuleTree::random(n, &mut rng).unwrap();
                assert_eq!(decode_ca_rule(&rule).table(), &simulate(&rule)[..], "{rule}");
            }
        }
    }
}
