//! Genotype encodings of S-boxes and their variation operators.

pub mod ca;
pub mod integer;
pub mod permutation;
pub mod rule_tree;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ca::decode_ca_rule;
pub use integer::{IntCrossover, IntegerGenotype};
pub use permutation::{PermCrossover, PermMutation, PermutationGenotype};
pub use rule_tree::{GpCrossover, Node, RuleTree};

use crate::sbox::{SBox, SBoxError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenotypeError {
    #[error(transparent)]
    SBox(#[from] SBoxError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("tree depth {depth} exceeds maximum {max}")]
    DepthExceeded { depth: u32, max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Encoding {
    #[serde(rename = "int")]
    Integer,
    #[serde(rename = "perm")]
    Permutation,
    #[serde(rename = "ca")]
    Ca,
}

impl Encoding {
    pub const ALL: [Encoding; 3] = [Encoding::Integer, Encoding::Permutation, Encoding::Ca];

    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Integer => "int",
            Encoding::Permutation => "perm",
            Encoding::Ca => "ca",
        }
    }

    /// Whether every genotype of this encoding decodes to a permutation.
    pub fn always_balanced(self) -> bool {
        self == Encoding::Permutation
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Encoding {
    type Err = GenotypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "int" | "integer" => Ok(Encoding::Integer),
            "perm" | "permutation" => Ok(Encoding::Permutation),
            "ca" | "gp" => Ok(Encoding::Ca),
            other => Err(GenotypeError::Parse(format!("unknown encoding `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Genotype {
    Integer(IntegerGenotype),
    Permutation(PermutationGenotype),
    Rule(RuleTree),
}

impl Genotype {
    pub fn encoding(&self) -> Encoding {
        match self {
            Genotype::Integer(_) => Encoding::Integer,
            Genotype::Permutation(_) => Encoding::Permutation,
            Genotype::Rule(_) => Encoding::Ca,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            Genotype::Integer(g) => g.n(),
            Genotype::Permutation(g) => g.n(),
            Genotype::Rule(r) => r.n(),
        }
    }

    pub fn decode(&self) -> SBox {
        match self {
            Genotype::Integer(g) => g.decode(),
            Genotype::Permutation(g) => g.decode(),
            Genotype::Rule(r) => decode_ca_rule(r),
        }
    }

    /// Parses the text produced by `Display`: hex genes for integer and
    /// permutation genotypes, prefix notation for rule trees.
    pub fn parse(encoding: Encoding, n: u32, text: &str) -> Result<Self, GenotypeError> {
        let genes = || -> Result<Vec<u16>, GenotypeError> {
            text.split_whitespace()
                .map(|t| {
                    u16::from_str_radix(t, 16)
                        .map_err(|e| GenotypeError::Parse(format!("bad gene `{t}`: {e}")))
                })
                .collect()
        };
        Ok(match encoding {
            Encoding::Integer => Genotype::Integer(IntegerGenotype::new(n, genes()?)?),
            Encoding::Permutation => Genotype::Permutation(PermutationGenotype::new(n, genes()?)?),
            Encoding::Ca => Genotype::Rule(RuleTree::parse(n, text)?),
        })
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let genes = match self {
            Genotype::Integer(g) => g.genes(),
            Genotype::Permutation(g) => g.genes(),
            Genotype::Rule(r) => return write!(f, "{r}"),
        };
        for (i, v) in genes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v:x}")?;
        }
        Ok(())
    }
}

/// Uniform integer vector, uniform permutation, or ramped half-and-half tree.
pub fn random_genotype<R: Rng + ?Sized>(
    encoding: Encoding,
    n: u32,
    rng: &mut R,
) -> Result<Genotype, GenotypeError> {
    Ok(match encoding {
        Encoding::Integer => Genotype::Integer(IntegerGenotype::random(n, rng)?),
        Encoding::Permutation => Genotype::Permutation(PermutationGenotype::random(n, rng)?),
        Encoding::Ca => Genotype::Rule(RuleTree::random(n, rng)?),
    })
}

/// The operators available to the search for each encoding. Whenever a
/// crossover or mutation is applied, one enabled operator is drawn uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSuite {
    pub int_crossovers: Vec<IntCrossover>,
    pub perm_mutations: Vec<PermMutation>,
    pub perm_crossovers: Vec<PermCrossover>,
    pub gp_crossovers: Vec<GpCrossover>,
}

impl Default for OperatorSuite {
    fn default() -> Self {
        Self {
            int_crossovers: IntCrossover::ALL.to_vec(),
            perm_mutations: PermMutation::ALL.to_vec(),
            perm_crossovers: PermCrossover::ALL.to_vec(),
            gp_crossovers: GpCrossover::ALL.to_vec(),
        }
    }
}

fn pick<T: Copy, R: Rng + ?Sized>(ops: &[T], rng: &mut R) -> T {
    assert!(!ops.is_empty(), "operator suite has no operators for this encoding");
    ops[rng.gen_range(0..ops.len())]
}

impl OperatorSuite {
    pub fn crossover<R: Rng + ?Sized>(&self, p1: &Genotype, p2: &Genotype, rng: &mut R) -> Genotype {
        match (p1, p2) {
            (Genotype::Integer(a), Genotype::Integer(b)) => {
                Genotype::Integer(a.crossover(b, pick(&self.int_crossovers, rng), rng))
            }
            (Genotype::Permutation(a), Genotype::Permutation(b)) => {
                Genotype::Permutation(a.crossover(b, pick(&self.perm_crossovers, rng), rng))
            }
            (Genotype::Rule(a), Genotype::Rule(b)) => {
                Genotype::Rule(a.crossover(b, pick(&self.gp_crossovers, rng), rng))
            }
            _ => panic!("crossover between different encodings"),
        }
    }

    pub fn mutate<R: Rng + ?Sized>(&self, g: &Genotype, rng: &mut R) -> Genotype {
        match g {
            Genotype::Integer(a) => Genotype::Integer(a.mutate(rng)),
            Genotype::Permutation(a) => Genotype::Permutation(a.mutate(pick(&self.perm_mutations, rng), rng)),
            Genotype::Rule(a) => Genotype::Rule(a.mutate(rng)),
        }
    }
}
