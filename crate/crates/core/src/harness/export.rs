//! CSV and JSON exports.
//!
//! | file | columns |
//! |------|---------|
//! | `summary.csv` | `size,encoding,algorithm,min,avg,std,balanced_runs` |
//! | `convergence.csv` | `size,encoding,algorithm,run,seed,evaluation,fitness` |
//! | `convergence_median.csv` | `size,encoding,algorithm,evaluation,median_fitness` |
//! | `pareto_union.csv` | `size,encoding,beta,delta,runs,genotype` |
//!
//! Absent statistics are written as `-`. `summary.json` and
//! `pareto_union.json` hold the same rows with their field names.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{pareto_union, summarize, Algorithm, HarnessError, RunRecord, SummaryRow, UnionPoint};
use crate::encodings::Encoding;
use crate::search::CHECKPOINT_INTERVAL;

pub const SUMMARY_HEADER: &str = "size,encoding,algorithm,min,avg,std,balanced_runs";
pub const CONVERGENCE_HEADER: &str = "size,encoding,algorithm,run,seed,evaluation,fitness";
pub const MEDIAN_HEADER: &str = "size,encoding,algorithm,evaluation,median_fitness";
pub const PARETO_HEADER: &str = "size,encoding,beta,delta,runs,genotype";

fn dash<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.size,
            r.encoding,
            r.algorithm,
            dash(r.min),
            dash(r.avg.map(|v| format!("{v:.2}"))),
            dash(r.std.map(|v| format!("{v:.2}"))),
            r.balanced_runs
        );
    }
    out
}

pub fn convergence_csv(records: &[RunRecord]) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in records {
        for p in &r.convergence {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.size, r.encoding, r.algorithm, r.run, r.seed, p.evaluation, p.fitness
            );
        }
    }
    out
}

pub fn pareto_csv(points: &[UnionPoint]) -> String {
    let mut out = format!("{PARETO_HEADER}\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.size, p.encoding, p.beta, p.delta, p.runs, p.genotype
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianPoint {
    pub size: u32,
    pub encoding: Encoding,
    pub algorithm: Algorithm,
    pub evaluation: u64,
    pub median_fitness: f64,
}

fn best_at(record: &RunRecord, evaluation: u64) -> Option<u32> {
    let k = record.convergence.partition_point(|p| p.evaluation <= evaluation);
    k.checked_sub(1).map(|i| record.convergence[i].fitness)
}

fn median(values: &mut [u32]) -> f64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        f64::from(values[mid])
    } else {
        (f64::from(values[mid - 1]) + f64::from(values[mid])) / 2.0
    }
}

/// Median best-so-far fitness across the runs of each triple, sampled every
/// checkpoint interval and at the final evaluation.
pub fn median_convergence(records: &[RunRecord]) -> Vec<MedianPoint> {
    let mut groups: BTreeMap<(u32, Encoding, Algorithm), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.triple()).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((size, encoding, algorithm), group) in groups {
        let last = group.iter().map(|r| r.evaluations).max().unwrap_or(0);
        let mut grid: Vec<u64> = (1..=last / CHECKPOINT_INTERVAL).map(|k| k * CHECKPOINT_INTERVAL).collect();
        if !last.is_multiple_of(CHECKPOINT_INTERVAL) {
            grid.push(last);
        }
        for evaluation in grid {
            let mut values: Vec<u32> = group.iter().filter_map(|r| best_at(r, evaluation)).collect();
            if values.is_empty() {
                continue;
            }
            out.push(MedianPoint {
                size,
                encoding,
                algorithm,
                evaluation,
                median_fitness: median(&mut values),
            });
        }
    }
    out
}

pub fn median_convergence_csv(points: &[MedianPoint]) -> String {
    let mut out = format!("{MEDIAN_HEADER}\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.size, p.encoding, p.algorithm, p.evaluation, p.median_fitness
        );
    }
    out
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, HarnessError> {
    fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok(path)
}

fn write_json<T: Serialize>(path: PathBuf, value: &T) -> Result<PathBuf, HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Json {
        path: path.clone(),
        source: e,
    })?;
    write(path, &(text + "\n"))
}

/// Writes summaries and convergence series for `records` into `dir`, plus
/// the Pareto union when any record carries a front. Returns the paths.
pub fn write_outputs(dir: &Path, records: &[RunRecord]) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let rows = summarize(records);
    let medians = median_convergence(records);
    let mut paths = vec![
        write(dir.join("summary.csv"), &summary_csv(&rows))?,
        write_json(dir.join("summary.json"), &rows)?,
        write(dir.join("convergence.csv"), &convergence_csv(records))?,
        write(dir.join("convergence_median.csv"), &median_convergence_csv(&medians))?,
    ];
    if records.iter().any(|r| !r.front.is_empty()) {
        let union = pareto_union(records);
        paths.push(write(dir.join("pareto_union.csv"), &pareto_csv(&union))?);
        paths.push(write_json(dir.join("pareto_union.json"), &union)?);
    }
    Ok(paths)
}

/// Reads every `*.json` record in `dir` (or in `dir/runs` when present),
/// sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let runs = dir.join("runs");
    let dir = if runs.is_dir() { runs } else { dir.to_path_buf() };
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| HarnessError::io(&dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
            serde_json::from_str(&text).map_err(|e| HarnessError::Json { path, source: e })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::summary::tests::record;
    use crate::search::ConvergencePoint;

    fn series(points: &[(u64, u32)], evaluations: u64) -> RunRecord {
        let mut r = record(4, Algorithm::Ea, points.last().unwrap().1, 0);
        r.convergence = points
            .iter()
            .map(|&(evaluation, fitness)| ConvergencePoint { evaluation, fitness })
            .collect();
        r.evaluations = evaluations;
        r
    }

    #[test]
    fn empty_summary_is_header_only() {
        assert_eq!(summary_csv(&[]), format!("{SUMMARY_HEADER}\n"));
        assert_eq!(summary_csv(&[]).lines().next(), Some("size,encoding,algorithm,min,avg,std,balanced_runs"));
    }

    #[test]
    fn dashes_for_unbalanced_triples() {
        let rows = summarize(&[record(5, Algorithm::Rs, 36, 4)]);
        assert_eq!(summary_csv(&rows).lines().nth(1), Some("5,perm,rs,-,-,-,0"));
        let rows = summarize(&[record(4, Algorithm::Ea, 6, 0), record(4, Algorithm::Ea, 8, 0)]);
        assert_eq!(summary_csv(&rows).lines().nth(1), Some("4,perm,ea,6,7.00,1.41,2"));
    }

    #[test]
    fn median_series_steps() {
        let a = series(&[(1, 20), (1500, 10), (2000, 10)], 2500);
        let b = series(&[(1, 16), (1000, 16), (2000, 12)], 2000);
        let c = series(&[(1, 14), (1000, 14), (2000, 14)], 2000);
        let m = median_convergence(&[a, b, c]);
        let got: Vec<_> = m.iter().map(|p| (p.evaluation, p.median_fitness)).collect();
        assert_eq!(got, vec![(1000, 16.0), (2000, 12.0), (2500, 12.0)]);
        let even = median_convergence(&[series(&[(1, 10)], 1000), series(&[(1, 13)], 1000)]);
        assert_eq!(even[0].median_fitness, 11.5);
    }

    #[test]
    fn json_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = series(&[(1, 9), (1000, 8)], 1000);
        r.best_genotype = "0 1 2 3 4 5 6 7".into();
        r.wall_time_secs = 0.25;
        crate::harness::write_record(dir.path(), &r).unwrap();
        let back = load_records(dir.path()).unwrap();
        assert_eq!(back, vec![r.clone()]);
        let paths = write_outputs(dir.path(), &back).unwrap();
        assert_eq!(paths.len(), 4);
        let rows: Vec<SummaryRow> =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(rows, summarize(&[r]));
    }
}
