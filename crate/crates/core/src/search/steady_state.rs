//! Steady-state evolutionary algorithm with 3-tournament replacement.

use rand::seq::index::sample;
use rand::Rng;

use super::{
    evaluate, spawn_batch, ConvergenceLog, Individual, Objective, RunResult, SearchConfig,
    SearchError,
};
use crate::encodings::OperatorSuite;

/// Runs until `cfg.budget` evaluations (initial population included).
///
/// Each step samples three distinct individuals, discards the worst (ties
/// broken uniformly), recombines the other two, mutates the child with
/// probability `cfg.mutation_prob`, and puts the child in the freed slot.
pub fn steady_state_ea(cfg: &SearchConfig, ops: &OperatorSuite) -> Result<RunResult, SearchError> {
    cfg.validate()?;
    if cfg.objective != Objective::Single {
        return Err(SearchError::WrongObjective {
            algorithm: "steady-state EA",
            expected: Objective::Single,
        });
    }
    if cfg.budget < cfg.pop_size as u64 {
        return Err(SearchError::BudgetTooSmall {
            budget: cfg.budget,
            pop_size: cfg.pop_size,
        });
    }

    let mut rng = cfg.rng();
    let mut log = ConvergenceLog::default();
    let mut population = spawn_batch(cfg, &mut rng, cfg.pop_size, 1)?;
    let mut best = population[0].clone();
    for ind in &population {
        log.observe(ind.eval_index, ind.fitness.primary());
        if ind.fitness.primary() < best.fitness.primary() {
            best = ind.clone();
        }
    }

    let mut evaluations = cfg.pop_size as u64;
    while evaluations < cfg.budget {
        let picks = sample(&mut rng, cfg.pop_size, 3).into_vec();
        let worst_fitness = picks
            .iter()
            .map(|&i| population[i].fitness.primary())
            .max()
            .expect("three picks");
        let tied: Vec<usize> = (0..3)
            .filter(|&k| population[picks[k]].fitness.primary() == worst_fitness)
            .collect();
        let loser = tied[rng.gen_range(0..tied.len())];
        let parents: Vec<usize> = (0..3).filter(|&k| k != loser).map(|k| picks[k]).collect();

        let mut child = ops.crossover(
            &population[parents[0]].genotype,
            &population[parents[1]].genotype,
            &mut rng,
        );
        if rng.gen_bool(cfg.mutation_prob) {
            child = ops.mutate(&child, &mut rng);
        }
        evaluations += 1;
        let e = evaluate(&child, Objective::Single);
        let child = Individual {
            genotype: child,
            fitness: e.fitness,
            bal: e.bal,
            eval_index: evaluations,
        };
        log.observe(evaluations, child.fitness.primary());
        if child.fitness.primary() < best.fitness.primary() {
            best = child.clone();
        }
        population[picks[loser]] = child;
    }

    log::debug!(
        "ea {}x{} {} seed {}: best {} after {} evaluations",
        cfg.n,
        cfg.n,
        cfg.encoding,
        cfg.seed,
        best.fitness.primary(),
        evaluations
    );
    Ok(RunResult {
        best,
        convergence: log.into_points(),
        evaluations,
    })
}
