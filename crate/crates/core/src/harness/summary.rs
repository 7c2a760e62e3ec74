//! Per-triple statistics and Pareto-front unions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Algorithm, RunRecord};
use crate::encodings::Encoding;

/// Statistics of the best fitness over the balanced runs of one triple.
/// `min`, `avg` and `std` are absent when no run ended balanced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub size: u32,
    pub encoding: Encoding,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub balanced_runs: usize,
    pub min: Option<u32>,
    pub avg: Option<f64>,
    /// Sample standard deviation (n − 1 denominator); 0 for a single run.
    pub std: Option<f64>,
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// One row per triple, sorted by `(size, encoding, algorithm)`.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(u32, Encoding, Algorithm), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.triple()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((size, encoding, algorithm), group)| {
            let mut best: Vec<u32> = group.iter().filter_map(|r| r.balanced_best()).collect();
            best.sort_unstable();
            let values: Vec<f64> = best.iter().map(|&v| f64::from(v)).collect();
            let avg = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
            SummaryRow {
                size,
                encoding,
                algorithm,
                runs: group.len(),
                balanced_runs: best.len(),
                min: best.first().copied(),
                avg,
                std: avg.map(|m| sample_std(&values, m)),
            }
        })
        .collect()
}

/// A distinct `(β, δ)` point of some run's final front.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionPoint {
    pub size: u32,
    pub encoding: Encoding,
    pub beta: u32,
    pub delta: u32,
    /// Number of runs whose front contains the point.
    pub runs: usize,
    /// Genotype from the first such run.
    pub genotype: String,
}

/// Union of all final fronts, one entry per `(size, encoding, β, δ)`, sorted.
/// Points dominated by another run's point are kept.
pub fn pareto_union(records: &[RunRecord]) -> Vec<UnionPoint> {
    let mut points: BTreeMap<(u32, Encoding, u32, u32), UnionPoint> = BTreeMap::new();
    for r in records {
        for p in &r.front {
            points
                .entry((r.size, r.encoding, p.beta, p.delta))
                .and_modify(|u| u.runs += 1)
                .or_insert_with(|| UnionPoint {
                    size: r.size,
                    encoding: r.encoding,
                    beta: p.beta,
                    delta: p.delta,
                    runs: 1,
                    genotype: p.genotype.clone(),
                });
        }
    }
    points.into_values().collect()
}
