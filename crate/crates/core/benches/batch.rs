//! Sequential against parallel execution of the same work. Without the
//! `parallel` feature both variants run sequentially.

use std::hint::black_box;

use boomevo::search::{evaluate_batch, Objective};
use boomevo::{
    random_genotype, run_experiment, Algorithm, Encoding, Execution, ExperimentConfig,
    OperatorSuite,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_batch_1024");
    for (encoding, n) in [(Encoding::Permutation, 6), (Encoding::Ca, 8)] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let genotypes: Vec<_> = (0..1024)
            .map(|_| random_genotype(encoding, n, &mut rng).unwrap())
            .collect();
        for (name, mode) in MODES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("{encoding}{n}")),
                &genotypes,
                |b, g| b.iter(|| evaluate_batch(mode, black_box(g.clone()), Objective::Single, 1)),
            );
        }
    }
    group.finish();
}

fn experiments(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = ExperimentConfig {
            sizes: vec![5],
            encodings: vec![Encoding::Permutation],
            algorithms: vec![Algorithm::Ea],
            runs: 8,
            budget: Some(5_000),
            pop_size: Some(100),
            execution: mode,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::new(name, "perm5_ea_8x5000"), |b| {
            b.iter(|| run_experiment(black_box(&cfg), &OperatorSuite::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, batches, experiments);
criterion_main!(benches);
