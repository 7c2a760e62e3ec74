//! Fitness functions.
//!
//! Lower is better everywhere. Balanced S-boxes score their boomerang
//! uniformity β. Unbalanced ones (possible under the integer and CA
//! encodings) score `2^n + BAL`, where BAL is the number of missing output
//! values; since β ≤ 2^n, every balanced S-box beats every unbalanced one.

use serde::{Deserialize, Serialize};

use crate::encodings::Genotype;
use crate::properties::{boomerang_uniformity, delta_uniformity};
use crate::sbox::SBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Single,
    Multi,
}

/// Cached objective value of an individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fitness {
    Single(u32),
    /// `[β objective, δ objective]`.
    Multi([u32; 2]),
}

impl Fitness {
    /// The scalar fitness, or the β objective of a multi-objective fitness.
    pub fn primary(&self) -> u32 {
        match *self {
            Fitness::Single(v) => v,
            Fitness::Multi([beta, _]) => beta,
        }
    }

    pub fn objectives(&self) -> [u32; 2] {
        match *self {
            Fitness::Single(v) => [v, v],
            Fitness::Multi(o) => o,
        }
    }
}

/// Result of scoring one genotype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub fitness: Fitness,
    pub bal: u32,
}

fn penalty(sbox: &SBox, bal: usize) -> u32 {
    (sbox.size() + bal) as u32
}

fn missing(genotype: &Genotype, sbox: &SBox) -> usize {
    if genotype.encoding().always_balanced() {
        0
    } else {
        sbox.missing_outputs()
    }
}

/// β for balanced S-boxes, `2^n + BAL` otherwise.
pub fn fitness_single(genotype: &Genotype) -> u32 {
    evaluate(genotype, Objective::Single).fitness.primary()
}

/// `(β, δ)` for balanced S-boxes, `(2^n + BAL, 2^n + BAL)` otherwise.
pub fn fitness_multi(genotype: &Genotype) -> (u32, u32) {
    let [b, d] = evaluate(genotype, Objective::Multi).fitness.objectives();
    (b, d)
}

pub fn evaluate(genotype: &Genotype, objective: Objective) -> Evaluation {
    let sbox = genotype.decode();
    let bal = missing(genotype, &sbox);
    let fitness = if bal > 0 {
        let p = penalty(&sbox, bal);
        match objective {
            Objective::Single => Fitness::Single(p),
            Objective::Multi => Fitness::Multi([p, p]),
        }
    } else {
        let beta = boomerang_uniformity(&sbox).expect("balanced S-box is a permutation");
        match objective {
            Objective::Single => Fitness::Single(beta),
            Objective::Multi => Fitness::Multi([beta, delta_uniformity(&sbox)]),
        }
    };
    Evaluation {
        fitness,
        bal: bal as u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{IntegerGenotype, PermutationGenotype, RuleTree};
    use crate::field::FieldSpec;

    fn perm(sbox: SBox) -> Genotype {
        Genotype::Permutation(PermutationGenotype::new(sbox.n(), sbox.into_table()).unwrap())
    }

    #[test]
    fn single_objective_examples() {
        let inv4 = perm(FieldSpec::default_for(4).unwrap().inverse_map());
        assert_eq!(fitness_single(&inv4), 6);
        let zero = Genotype::Integer(IntegerGenotype::new(4, vec![0; 16]).unwrap());
        assert_eq!(fitness_single(&zero), 31);
        let id = Genotype::Rule(RuleTree::var(4, 0).unwrap());
        assert_eq!(fitness_single(&id), 16);
        assert_eq!(evaluate(&id, Objective::Single).bal, 0);
    }

    #[test]
    fn multi_objective_examples() {
        let inv4 = perm(FieldSpec::default_for(4).unwrap().inverse_map());
        assert_eq!(fitness_multi(&inv4), (6, 4));
        let gold5 = perm(FieldSpec::default_for(5).unwrap().gold_map(1));
        assert_eq!(fitness_multi(&gold5), (2, 2));
        let zero = Genotype::Integer(IntegerGenotype::new(4, vec![0; 16]).unwrap());
        assert_eq!(fitness_multi(&zero), (31, 31));
        assert_eq!(evaluate(&zero, Objective::Multi).bal, 15);
    }

    #[test]
    fn balanced_integer_genotype_uses_beta() {
        let table = FieldSpec::default_for(4).unwrap().inverse_map().into_table();
        let g = Genotype::Integer(IntegerGenotype::new(4, table).unwrap());
        assert_eq!(fitness_single(&g), 6);
    }
}
