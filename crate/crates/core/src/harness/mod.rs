//! Seeded multi-run experiments.
//!
//! An [`ExperimentConfig`] expands every `(size, encoding, algorithm)` triple
//! into `runs` independent searches. Runs fan out across the worker pool; each
//! run is sequential inside, so a record depends only on its seed.

pub mod export;
pub mod summary;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use export::{
    convergence_csv, load_records, median_convergence, median_convergence_csv, pareto_csv,
    summary_csv, write_outputs, MedianPoint,
};
pub use summary::{pareto_union, summarize, SummaryRow, UnionPoint};

use crate::encodings::{Encoding, Genotype, GenotypeError, OperatorSuite};
use crate::exec::Execution;
use crate::search::{
    nsga2, random_search, steady_state_ea, ConvergencePoint, Objective, SearchConfig, SearchError,
    DEFAULT_BUDGET,
};

/// Budget used for n ≥ [`DESK_SCALE_FROM`] unless `paper_budget` is set.
pub const DESK_BUDGET: u64 = 100_000;
/// Smallest width that gets the reduced default budget.
pub const DESK_SCALE_FROM: u32 = 7;
pub const DEFAULT_RUNS: usize = 30;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Genotype(#[from] GenotypeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ea,
    Rs,
    Nsga2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ea, Algorithm::Rs, Algorithm::Nsga2];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ea => "ea",
            Algorithm::Rs => "rs",
            Algorithm::Nsga2 => "nsga2",
        }
    }

    /// The only objective this algorithm accepts.
    pub fn objective(self) -> Objective {
        match self {
            Algorithm::Nsga2 => Objective::Multi,
            Algorithm::Ea | Algorithm::Rs => Objective::Single,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ea" => Ok(Algorithm::Ea),
            "rs" | "random" => Ok(Algorithm::Rs),
            "nsga2" | "nsga-ii" => Ok(Algorithm::Nsga2),
            other => Err(HarnessError::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// A full experiment. Deserializes from a flat TOML table with the same
/// field names; missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sizes: Vec<u32>,
    pub encodings: Vec<Encoding>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub base_seed: u64,
    /// Overrides the per-size default budget.
    pub budget: Option<u64>,
    pub pop_size: Option<usize>,
    pub mutation_prob: Option<f64>,
    /// Use the full default budget for every size.
    pub paper_budget: bool,
    /// When set, every algorithm must accept it.
    pub objective: Option<Objective>,
    /// Run records go to `<output_dir>/runs/`; nothing is written when unset.
    pub output_dir: Option<PathBuf>,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sizes: vec![4],
            encodings: vec![Encoding::Permutation],
            algorithms: vec![Algorithm::Ea],
            runs: DEFAULT_RUNS,
            base_seed: 0,
            budget: None,
            pop_size: None,
            mutation_prob: None,
            paper_budget: false,
            objective: None,
            output_dir: None,
            execution: Execution::default(),
        }
    }
}

/// One expanded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub run: usize,
    pub search: SearchConfig,
}

/// FNV-1a, 64 bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of run `run` of a triple: `(base_seed XOR fnv1a64("n/enc/algo")) + run`.
pub fn run_seed(base_seed: u64, n: u32, encoding: Encoding, algorithm: Algorithm, run: usize) -> u64 {
    let key = format!("{n}/{encoding}/{algorithm}");
    (base_seed ^ fnv1a64(key.as_bytes())).wrapping_add(run as u64)
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Budget for width `n` when no explicit override is set.
    pub fn budget_for(&self, n: u32) -> u64 {
        match self.budget {
            Some(b) => b,
            None if n >= DESK_SCALE_FROM && !self.paper_budget => DESK_BUDGET,
            None => DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::InvalidConfig("runs must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.encodings.is_empty() || self.algorithms.is_empty() {
            return Err(HarnessError::InvalidConfig(
                "sizes, encodings and algorithms must be nonempty".into(),
            ));
        }
        if let Some(objective) = self.objective {
            if let Some(a) = self.algorithms.iter().find(|a| a.objective() != objective) {
                return Err(HarnessError::InvalidConfig(format!(
                    "{a} cannot run with a {objective:?} objective"
                )));
            }
        }
        Ok(())
    }

    /// All runs in triple order (sizes, then encodings, then algorithms),
    /// each validated.
    pub fn expand(&self) -> Result<Vec<RunSpec>, HarnessError> {
        self.validate()?;
        let mut specs = Vec::new();
        for &n in &self.sizes {
            for &encoding in &self.encodings {
                for &algorithm in &self.algorithms {
                    for run in 0..self.runs {
                        let mut search = SearchConfig::new(encoding, n)
                            .with_budget(self.budget_for(n))
                            .with_seed(run_seed(self.base_seed, n, encoding, algorithm, run))
                            .with_objective(algorithm.objective())
                            .with_execution(Execution::Sequential);
                        if let Some(p) = self.pop_size {
                            search = search.with_pop_size(p);
                        }
                        if let Some(pm) = self.mutation_prob {
                            search.mutation_prob = pm;
                        }
                        search.validate()?;
                        specs.push(RunSpec {
                            algorithm,
                            run,
                            search,
                        });
                    }
                }
            }
        }
        Ok(specs)
    }
}

/// A point of an NSGA-II final front.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontEntry {
    pub beta: u32,
    pub delta: u32,
    /// Missing outputs; nonzero only for penalized points.
    pub bal: u32,
    pub genotype: String,
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub size: u32,
    pub encoding: Encoding,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub budget: u64,
    pub pop_size: usize,
    pub mutation_prob: f64,
    pub objective: Objective,
    /// Single-objective best fitness; for NSGA-II the lowest β objective on
    /// the final front.
    pub best_fitness: u32,
    pub best_delta: Option<u32>,
    pub best_genotype: String,
    pub bal: u32,
    /// Final first front (NSGA-II only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub front: Vec<FrontEntry>,
    pub convergence: Vec<ConvergencePoint>,
    pub evaluations: u64,
    pub wall_time_secs: f64,
}

impl RunRecord {
    /// Best fitness if the best solution is balanced.
    pub fn balanced_best(&self) -> Option<u32> {
        (self.bal == 0).then_some(self.best_fitness)
    }

    /// `(size, encoding, algorithm)`.
    pub fn triple(&self) -> (u32, Encoding, Algorithm) {
        (self.size, self.encoding, self.algorithm)
    }

    /// The record with its wall time zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }

    pub fn genotype(&self) -> Result<Genotype, GenotypeError> {
        Genotype::parse(self.encoding, self.size, &self.best_genotype)
    }

    /// Re-decodes every stored genotype and checks the recorded fitness.
    pub fn verify(&self) -> Result<bool, GenotypeError> {
        let g = self.genotype()?;
        let e = crate::search::evaluate(&g, self.objective);
        if e.fitness.primary() != self.best_fitness || e.bal != self.bal {
            return Ok(false);
        }
        for p in &self.front {
            let g = Genotype::parse(self.encoding, self.size, &p.genotype)?;
            if crate::search::evaluate(&g, Objective::Multi).fitness.objectives() != [p.beta, p.delta] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn file_name(&self) -> String {
        format!(
            "{n}x{n}_{}_{}_{:03}.json",
            self.encoding,
            self.algorithm,
            self.run,
            n = self.size
        )
    }
}

/// Executes one run.
pub fn execute(spec: &RunSpec, ops: &OperatorSuite) -> Result<RunRecord, HarnessError> {
    let cfg = &spec.search;
    let start = Instant::now();
    let mut front = Vec::new();
    let (best_fitness, best_delta, best_genotype, bal, convergence, evaluations) = match spec.algorithm {
        Algorithm::Ea | Algorithm::Rs => {
            let r = if spec.algorithm == Algorithm::Ea {
                steady_state_ea(cfg, ops)?
            } else {
                random_search(cfg)?
            };
            let b = r.best;
            (b.fitness.primary(), None, b.genotype.to_string(), b.bal, r.convergence, r.evaluations)
        }
        Algorithm::Nsga2 => {
            let r = nsga2(cfg, ops)?;
            let full = 1u32 << cfg.n;
            front = r
                .front
                .points
                .iter()
                .map(|p| FrontEntry {
                    beta: p.beta,
                    delta: p.delta,
                    bal: p.beta.saturating_sub(full),
                    genotype: p.genotype.to_string(),
                })
                .collect();
            let best = front
                .iter()
                .min_by_key(|p| (p.beta, p.delta))
                .expect("a final front is never empty");
            (best.beta, Some(best.delta), best.genotype.clone(), best.bal, r.convergence, r.evaluations)
        }
    };
    Ok(RunRecord {
        size: cfg.n,
        encoding: cfg.encoding,
        algorithm: spec.algorithm,
        run: spec.run,
        seed: cfg.seed,
        budget: cfg.budget,
        pop_size: cfg.pop_size,
        mutation_prob: cfg.mutation_prob,
        objective: cfg.objective,
        best_fitness,
        best_delta,
        best_genotype,
        bal,
        front,
        convergence,
        evaluations,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Writes `record` as pretty JSON under `dir`.
pub fn write_record(dir: &Path, record: &RunRecord) -> Result<PathBuf, HarnessError> {
    let path = dir.join(record.file_name());
    let json = serde_json::to_string_pretty(record).map_err(|e| HarnessError::Json {
        path: path.clone(),
        source: e,
    })?;
    fs::write(&path, json + "\n").map_err(|e| HarnessError::io(&path, e))?;
    Ok(path)
}

/// Runs every expanded configuration. Records come back in expansion order;
/// with an output directory each run also writes its own record file.
pub fn run_experiment(cfg: &ExperimentConfig, ops: &OperatorSuite) -> Result<Vec<RunRecord>, HarnessError> {
    let specs = cfg.expand()?;
    let runs_dir = cfg.output_dir.as_ref().map(|d| d.join("runs"));
    if let Some(dir) = &runs_dir {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    log::info!("running {} searches", specs.len());
    cfg.execution
        .map(&specs, |spec| {
            let record = execute(spec, ops)?;
            log::info!(
                "{}x{} {} {} run {}: best {} ({:.1} s)",
                record.size,
                record.size,
                record.encoding,
                record.algorithm,
                record.run,
                record.best_fitness,
                record.wall_time_secs
            );
            if let Some(dir) = &runs_dir {
                write_record(dir, &record)?;
            }
            Ok(record)
        })
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            sizes: vec![3, 4],
            encodings: vec![Encoding::Permutation],
            algorithms: vec![Algorithm::Ea],
            runs: 3,
            budget: Some(400),
            pop_size: Some(20),
            ..Default::default()
        }
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x8594_4171_f739_67e8);
    }

    #[test]
    fn seeds_are_consecutive_within_a_triple_and_differ_across() {
        let s0 = run_seed(7, 4, Encoding::Ca, Algorithm::Ea, 0);
        assert_eq!(run_seed(7, 4, Encoding::Ca, Algorithm::Ea, 5), s0.wrapping_add(5));
        assert_ne!(run_seed(7, 4, Encoding::Ca, Algorithm::Rs, 0), s0);
        assert_ne!(run_seed(7, 5, Encoding::Ca, Algorithm::Ea, 0), s0);
    }

    #[test]
    fn expansion_cardinality_and_budgets() {
        let cfg = ExperimentConfig {
            sizes: vec![4, 7],
            runs: 30,
            ..Default::default()
        };
        let specs = cfg.expand().unwrap();
        assert_eq!(specs.len(), 60);
        assert_eq!(specs[0].search.budget, DEFAULT_BUDGET);
        assert_eq!(specs[59].search.budget, DESK_BUDGET);
        let full = ExperimentConfig {
            paper_budget: true,
            ..cfg.clone()
        };
        assert_eq!(full.budget_for(8), DEFAULT_BUDGET);
        assert_eq!(
            ExperimentConfig {
                budget: Some(123),
                ..cfg
            }
            .budget_for(8),
            123
        );
    }

    #[test]
    fn objectives_follow_algorithms() {
        let mut cfg = tiny();
        cfg.algorithms = vec![Algorithm::Rs, Algorithm::Nsga2];
        let specs = cfg.expand().unwrap();
        assert_eq!(specs[0].search.objective, Objective::Single);
        assert_eq!(specs[3].search.objective, Objective::Multi);
        cfg.objective = Some(Objective::Single);
        assert!(matches!(cfg.expand(), Err(HarnessError::InvalidConfig(_))));
        cfg.runs = 0;
        cfg.objective = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            sizes = [4, 5]
            encodings = ["perm", "ca"]
            algorithms = ["ea", "nsga2"]
            runs = 5
            base_seed = 11
            budget = 1000
            output_dir = "out"
        "#;
        let cfg = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.sizes, vec![4, 5]);
        assert_eq!(cfg.encodings, vec![Encoding::Permutation, Encoding::Ca]);
        assert_eq!(cfg.algorithms, vec![Algorithm::Ea, Algorithm::Nsga2]);
        assert_eq!(cfg.pop_size, None);
        let again = ExperimentConfig::from_toml_str(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert!(ExperimentConfig::from_toml_str("runz = 3").is_err());
    }

    #[test]
    fn records_verify_and_repeat() {
        let cfg = tiny();
        let a = run_experiment(&cfg, &OperatorSuite::default()).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.iter().all(|r| r.verify().unwrap() && r.evaluations == 400));
        let b = run_experiment(
            &ExperimentConfig {
                execution: Execution::Sequential,
                ..cfg
            },
            &OperatorSuite::default(),
        )
        .unwrap();
        let strip = |v: &[RunRecord]| v.iter().map(RunRecord::without_timing).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn nsga2_record_reports_front() {
        let cfg = ExperimentConfig {
            algorithms: vec![Algorithm::Nsga2],
            encodings: vec![Encoding::Integer],
            runs: 1,
            sizes: vec![3],
            ..tiny()
        };
        let r = &run_experiment(&cfg, &OperatorSuite::default()).unwrap()[0];
        assert!(!r.front.is_empty());
        assert_eq!(r.best_fitness, r.front[0].beta);
        assert!(r.verify().unwrap());
    }
}
