//! Random-search baseline.

use super::{spawn_batch, ConvergenceLog, Objective, RunResult, SearchConfig, SearchError};

/// Genotypes drawn (sequentially, from the run's RNG) per evaluation batch.
const BATCH: u64 = 1024;

/// `cfg.budget` independent random genotypes; keeps the first best one.
pub fn random_search(cfg: &SearchConfig) -> Result<RunResult, SearchError> {
    cfg.validate()?;
    if cfg.objective != Objective::Single {
        return Err(SearchError::WrongObjective {
            algorithm: "random search",
            expected: Objective::Single,
        });
    }
    let mut rng = cfg.rng();
    let mut log = ConvergenceLog::default();
    let mut best = None;
    let mut evaluations = 0u64;
    while evaluations < cfg.budget {
        let count = BATCH.min(cfg.budget - evaluations);
        for ind in spawn_batch(cfg, &mut rng, count as usize, evaluations + 1)? {
            log.observe(ind.eval_index, ind.fitness.primary());
            let better = best
                .as_ref()
                .is_none_or(|b: &super::Individual| ind.fitness.primary() < b.fitness.primary());
            if better {
                best = Some(ind);
            }
        }
        evaluations += count;
    }
    Ok(RunResult {
        best: best.expect("budget is positive"),
        convergence: log.into_points(),
        evaluations,
    })
}
