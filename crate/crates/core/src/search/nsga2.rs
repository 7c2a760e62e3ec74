//! Generational NSGA-II minimizing `(β, δ)`.

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    crowding_distance, evaluate_batch, nondominated_sort, spawn_batch, ConvergenceLog,
    FrontPoint, Individual, Objective, ParetoFront, SearchConfig, SearchError,
};
use crate::encodings::OperatorSuite;

#[derive(Debug, Clone, PartialEq)]
pub struct NsgaResult {
    /// First front of the final population.
    pub front: ParetoFront,
    /// Distinct objective vectors of the first front after every generation,
    /// starting with the initial population.
    pub front_history: Vec<Vec<[u32; 2]>>,
    /// Best β objective seen so far.
    pub convergence: Vec<super::ConvergencePoint>,
    pub evaluations: u64,
    pub generations: usize,
}

/// Rank and crowding distance of every individual.
fn rank_and_crowd(objectives: &[[u32; 2]]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; objectives.len()];
    let mut crowd = vec![0.0; objectives.len()];
    for (r, front) in nondominated_sort(objectives).into_iter().enumerate() {
        let pts: Vec<[u32; 2]> = front.iter().map(|&i| objectives[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&pts)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

fn crowded_cmp(rank: &[usize], crowd: &[f64], a: usize, b: usize) -> Ordering {
    rank[a]
        .cmp(&rank[b])
        .then_with(|| crowd[b].partial_cmp(&crowd[a]).unwrap_or(Ordering::Equal))
}

fn binary_tournament(rng: &mut ChaCha8Rng, rank: &[usize], crowd: &[f64]) -> usize {
    let picks = sample(rng, rank.len(), 2);
    let (a, b) = (picks.index(0), picks.index(1));
    match crowded_cmp(rank, crowd, a, b) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

/// Keeps the best `keep` of `pool` by rank, then by crowding distance.
fn environmental_selection(pool: Vec<Individual>, keep: usize) -> Vec<Individual> {
    let objectives: Vec<[u32; 2]> = pool.iter().map(|i| i.fitness.objectives()).collect();
    let mut chosen = Vec::with_capacity(keep);
    for front in nondominated_sort(&objectives) {
        if chosen.len() + front.len() <= keep {
            chosen.extend(front);
        } else {
            let pts: Vec<[u32; 2]> = front.iter().map(|&i| objectives[i]).collect();
            let dist = crowding_distance(&pts);
            let mut order: Vec<usize> = (0..front.len()).collect();
            // stable: equal distances keep population order
            order.sort_by(|&a, &b| dist[b].partial_cmp(&dist[a]).unwrap_or(Ordering::Equal));
            chosen.extend(order.into_iter().take(keep - chosen.len()).map(|k| front[k]));
        }
        if chosen.len() == keep {
            break;
        }
    }
    chosen.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|i| slots[i].take().expect("each index chosen once"))
        .collect()
}

fn first_front(population: &[Individual]) -> Vec<[u32; 2]> {
    let objectives: Vec<[u32; 2]> = population.iter().map(|i| i.fitness.objectives()).collect();
    let mut front: Vec<[u32; 2]> = nondominated_sort(&objectives)
        .into_iter()
        .next()
        .unwrap_or_default()
        .into_iter()
        .map(|i| objectives[i])
        .collect();
    front.sort_unstable();
    front.dedup();
    front
}

/// Runs until `cfg.budget` evaluations; the last generation is truncated to
/// fit the budget exactly.
pub fn nsga2(cfg: &SearchConfig, ops: &OperatorSuite) -> Result<NsgaResult, SearchError> {
    cfg.validate()?;
    if cfg.objective != Objective::Multi {
        return Err(SearchError::WrongObjective {
            algorithm: "NSGA-II",
            expected: Objective::Multi,
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
    for ind in &population {
        log.observe(ind.eval_index, ind.fitness.primary());
    }
    let mut evaluations = cfg.pop_size as u64;
    let mut history = vec![first_front(&population)];
    let mut generations = 0;

    while evaluations < cfg.budget {
        let objectives: Vec<[u32; 2]> = population.iter().map(|i| i.fitness.objectives()).collect();
        let (rank, crowd) = rank_and_crowd(&objectives);
        let count = (cfg.pop_size as u64).min(cfg.budget - evaluations) as usize;
        let children: Vec<_> = (0..count)
            .map(|_| {
                let a = binary_tournament(&mut rng, &rank, &crowd);
                let b = binary_tournament(&mut rng, &rank, &crowd);
                let mut child = ops.crossover(&population[a].genotype, &population[b].genotype, &mut rng);
                if rng.gen_bool(cfg.mutation_prob) {
                    child = ops.mutate(&child, &mut rng);
                }
                child
            })
            .collect();
        let offspring = evaluate_batch(cfg.execution, children, Objective::Multi, evaluations + 1);
        for ind in &offspring {
            log.observe(ind.eval_index, ind.fitness.primary());
        }
        evaluations += count as u64;

        population.extend(offspring);
        population = environmental_selection(population, cfg.pop_size);
        history.push(first_front(&population));
        generations += 1;
    }

    let objectives: Vec<[u32; 2]> = population.iter().map(|i| i.fitness.objectives()).collect();
    let first = nondominated_sort(&objectives).into_iter().next().unwrap_or_default();
    let front = ParetoFront::from_candidates(first.into_iter().map(|i| {
        let [beta, delta] = objectives[i];
        FrontPoint {
            beta,
            delta,
            genotype: population[i].genotype.clone(),
        }
    }));

    Ok(NsgaResult {
        front,
        front_history: history,
        convergence: log.into_points(),
        evaluations,
        generations,
    })
}
