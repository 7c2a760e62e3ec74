//! Search algorithms over S-box genotypes.

pub mod fitness;
pub mod nsga2;
pub mod pareto;
pub mod random;
pub mod steady_state;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fitness::{evaluate, fitness_multi, fitness_single, Evaluation, Fitness, Objective};
pub use nsga2::{nsga2, NsgaResult};
pub use pareto::{crowding_distance, dominates, nondominated_sort, FrontPoint, ParetoFront};
pub use random::random_search;
pub use steady_state::steady_state_ea;

use crate::encodings::{random_genotype, Encoding, Genotype, GenotypeError};
use crate::exec::Execution;

/// Individuals per population.
pub const DEFAULT_POP_SIZE: usize = 500;
/// Probability that an offspring is mutated.
pub const DEFAULT_MUTATION_PROB: f64 = 0.7;
/// Fitness evaluations per run.
pub const DEFAULT_BUDGET: u64 = 500_000;
/// Convergence series get a checkpoint at least this often.
pub const CHECKPOINT_INTERVAL: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("budget {budget} cannot initialize a population of {pop_size}")]
    BudgetTooSmall { budget: u64, pop_size: usize },
    #[error("{algorithm} requires a {expected:?} objective")]
    WrongObjective {
        algorithm: &'static str,
        expected: Objective,
    },
    #[error(transparent)]
    Genotype(#[from] GenotypeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub encoding: Encoding,
    pub n: u32,
    pub pop_size: usize,
    pub mutation_prob: f64,
    pub budget: u64,
    pub seed: u64,
    pub objective: Objective,
    /// How batches of independent evaluations are scheduled. Never changes
    /// results.
    pub execution: Execution,
}

impl SearchConfig {
    /// Single-objective configuration with the default parameters.
    pub fn new(encoding: Encoding, n: u32) -> Self {
        Self {
            encoding,
            n,
            pop_size: DEFAULT_POP_SIZE,
            mutation_prob: DEFAULT_MUTATION_PROB,
            budget: DEFAULT_BUDGET,
            seed: 0,
            objective: Objective::Single,
            execution: Execution::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_pop_size(mut self, pop_size: usize) -> Self {
        self.pop_size = pop_size;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        crate::sbox::check_width(self.n).map_err(GenotypeError::from)?;
        if self.pop_size < 3 {
            return Err(SearchError::InvalidConfig(format!(
                "population size {} is below 3",
                self.pop_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(SearchError::InvalidConfig(format!(
                "mutation probability {} outside [0, 1]",
                self.mutation_prob
            )));
        }
        if self.budget == 0 {
            return Err(SearchError::InvalidConfig("budget must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub genotype: Genotype,
    pub fitness: Fitness,
    pub bal: u32,
    /// 1-based index of the evaluation that produced this individual.
    pub eval_index: u64,
}

/// `(evaluation, best fitness so far)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub evaluation: u64,
    pub fitness: u32,
}

/// Best-so-far series recorded at every improvement and every
/// [`CHECKPOINT_INTERVAL`] evaluations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConvergenceLog {
    points: Vec<ConvergencePoint>,
    best: Option<u32>,
}

impl ConvergenceLog {
    pub fn observe(&mut self, evaluation: u64, fitness: u32) {
        let improved = self.best.is_none_or(|b| fitness < b);
        if improved {
            self.best = Some(fitness);
        }
        if improved || evaluation.is_multiple_of(CHECKPOINT_INTERVAL) {
            self.points.push(ConvergencePoint {
                evaluation,
                fitness: self.best.expect("set above"),
            });
        }
    }

    pub fn best(&self) -> Option<u32> {
        self.best
    }

    pub fn into_points(self) -> Vec<ConvergencePoint> {
        self.points
    }
}

/// Outcome of a single-objective run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub best: Individual,
    pub convergence: Vec<ConvergencePoint>,
    pub evaluations: u64,
}

/// Draws `count` genotypes sequentially from `rng`, then evaluates them as a
/// batch. Evaluation indices continue from `first_index`.
pub(crate) fn spawn_batch(
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
    count: usize,
    first_index: u64,
) -> Result<Vec<Individual>, SearchError> {
    let genotypes = (0..count)
        .map(|_| random_genotype(cfg.encoding, cfg.n, rng))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(evaluate_batch(cfg.execution, genotypes, cfg.objective, first_index))
}

/// Scores genotypes in input order; evaluation may run in parallel.
pub fn evaluate_batch(
    execution: Execution,
    genotypes: Vec<Genotype>,
    objective: Objective,
    first_index: u64,
) -> Vec<Individual> {
    let scored = execution.map_owned(genotypes, |g| {
        let e = evaluate(&g, objective);
        (g, e)
    });
    scored
        .into_iter()
        .enumerate()
        .map(|(k, (genotype, e))| Individual {
            genotype,
            fitness: e.fitness,
            bal: e.bal,
            eval_index: first_index + k as u64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let base = SearchConfig::new(Encoding::Permutation, 4);
        assert!(base.validate().is_ok());
        assert!(base.clone().with_pop_size(2).validate().is_err());
        let mut bad = base.clone();
        bad.mutation_prob = 1.5;
        assert!(bad.validate().is_err());
        assert!(base.clone().with_budget(0).validate().is_err());
        let mut wide = base;
        wide.n = 11;
        assert!(wide.validate().is_err());
    }

    #[test]
    fn convergence_log_records_improvements_and_checkpoints() {
        let mut log = ConvergenceLog::default();
        log.observe(1, 20);
        log.observe(2, 22);
        log.observe(3, 18);
        for e in 4..=2000 {
            log.observe(e, 19);
        }
        let pts = log.into_points();
        let as_pairs: Vec<_> = pts.iter().map(|p| (p.evaluation, p.fitness)).collect();
        assert_eq!(as_pairs, vec![(1, 20), (3, 18), (1000, 18), (2000, 18)]);
    }

    #[test]
    fn batch_evaluation_is_mode_independent() {
        let cfg = SearchConfig::new(Encoding::Ca, 5).with_seed(3);
        let a = spawn_batch(&cfg, &mut cfg.rng(), 64, 1).unwrap();
        let seq = cfg.clone().with_execution(Execution::Sequential);
        let b = spawn_batch(&seq, &mut seq.rng(), 64, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[63].eval_index, 64);
    }
}
