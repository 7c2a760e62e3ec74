use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use boomevo::harness::{
    load_records, pareto_csv, pareto_union, summarize, summary_csv, write_outputs,
};
use boomevo::{
    bct_fast, ddt, run_experiment, Algorithm, Encoding, Execution, ExperimentConfig, FieldSpec,
    OperatorSuite, PropertyReport, RunRecord, SBox,
};
use clap::{Args, Parser, Subcommand};

/// S-box properties and evolutionary search for low boomerang uniformity.
#[derive(Parser)]
#[command(name = "boomevo", version)]
struct Cli {
    /// Log progress (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the property report of an S-box file as JSON.
    Evaluate {
        #[arg(long)]
        sbox: PathBuf,
        /// Also write the DDT as CSV.
        #[arg(long)]
        ddt: Option<PathBuf>,
        /// Also write the BCT as CSV (permutations only).
        #[arg(long)]
        bct: Option<PathBuf>,
    },
    /// Build a power map over GF(2^n) and report its properties.
    Reference {
        #[arg(long = "n")]
        n: u32,
        /// `inverse` or `gold:<i>`.
        #[arg(long)]
        map: String,
        /// Field polynomial as hex (default: the standard one for n).
        #[arg(long, value_parser = parse_hex)]
        poly: Option<u32>,
        /// Write the S-box here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-objective runs (steady-state EA or random search).
    Evolve {
        /// `ea` or `rs`; comma-separated for several.
        #[arg(long, value_delimiter = ',')]
        algo: Vec<Algorithm>,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Multi-objective (β, δ) runs; prints the union of the final fronts.
    Nsga2 {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Summarize the run records in a directory.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
        /// Print JSON instead of CSV.
        #[arg(long)]
        json: bool,
        /// Rewrite the summary and convergence files in the directory.
        #[arg(long)]
        write: bool,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `int`, `perm` or `ca`; comma-separated for several.
    #[arg(long, value_delimiter = ',')]
    encoding: Vec<Encoding>,
    /// S-box width; comma-separated for several.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed of the experiment.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    pop: Option<usize>,
    /// Mutation probability.
    #[arg(long)]
    pm: Option<f64>,
    /// Use the full evaluation budget for n >= 7 too.
    #[arg(long)]
    paper_budget: bool,
    /// Output directory for run records, summaries and series.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(digits, 16).map_err(|e| e.to_string())
}

impl ExperimentArgs {
    fn into_config(self, algorithms: Vec<Algorithm>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => {
                if self.encoding.is_empty() || self.n.is_empty() {
                    bail!("--encoding and --n are required without --config");
                }
                ExperimentConfig::default()
            }
        };
        if !self.encoding.is_empty() {
            cfg.encodings = self.encoding;
        }
        if !self.n.is_empty() {
            cfg.sizes = self.n;
        }
        if !algorithms.is_empty() {
            cfg.algorithms = algorithms;
        }
        cfg.runs = self.runs.unwrap_or(cfg.runs);
        cfg.base_seed = self.seed.unwrap_or(cfg.base_seed);
        cfg.budget = self.budget.or(cfg.budget);
        cfg.pop_size = self.pop.or(cfg.pop_size);
        cfg.mutation_prob = self.pm.or(cfg.mutation_prob);
        cfg.paper_budget |= self.paper_budget;
        cfg.output_dir = self.out.or(cfg.output_dir);
        if self.sequential {
            cfg.execution = Execution::Sequential;
        }
        Ok(cfg)
    }
}

fn read_sbox(path: &Path) -> Result<SBox> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn reference_map(n: u32, map: &str, poly: Option<u32>) -> Result<SBox> {
    let field = match poly {
        Some(p) => FieldSpec::new(n, p)?,
        None => FieldSpec::default_for(n)?,
    };
    match map.split_once(':') {
        None if map == "inverse" => Ok(field.inverse_map()),
        Some(("gold", i)) => {
            let i: u32 = i.parse().with_context(|| format!("bad gold exponent `{i}`"))?;
            if i == 0 || i >= n {
                bail!("gold exponent must be in 1..{n}");
            }
            Ok(field.gold_map(i))
        }
        _ => bail!("unknown map `{map}` (expected `inverse` or `gold:<i>`)"),
    }
}

fn run(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let records = run_experiment(cfg, &OperatorSuite::default())?;
    if let Some(dir) = &cfg.output_dir {
        for path in write_outputs(dir, &records)? {
            log::info!("wrote {}", path.display());
        }
    }
    Ok(records)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match cli.command {
        Command::Evaluate { sbox, ddt: ddt_out, bct } => {
            let f = read_sbox(&sbox)?;
            if let Some(path) = ddt_out {
                write_file(&path, &ddt(&f).to_csv())?;
            }
            if let Some(path) = bct {
                write_file(&path, &bct_fast(&f)?.to_csv())?;
            }
            print_json(&PropertyReport::of(&f))?;
        }
        Command::Reference { n, map, poly, out } => {
            let f = reference_map(n, &map, poly)?;
            match out {
                Some(path) => write_file(&path, &f.to_text())?,
                None => print!("{f}"),
            }
            print_json(&PropertyReport::of(&f))?;
        }
        Command::Evolve { algo, exp } => {
            if algo.contains(&Algorithm::Nsga2) {
                bail!("use the nsga2 subcommand for multi-objective runs");
            }
            let cfg = exp.into_config(algo)?;
            let records = run(&cfg)?;
            print!("{}", summary_csv(&summarize(&records)));
        }
        Command::Nsga2 { exp } => {
            let cfg = exp.into_config(vec![Algorithm::Nsga2])?;
            let records = run(&cfg)?;
            print!("{}", pareto_csv(&pareto_union(&records)));
        }
        Command::Summarize { dir, json, write } => {
            let records = load_records(&dir)?;
            if records.is_empty() {
                bail!("no run records in {}", dir.display());
            }
            if write {
                write_outputs(&dir, &records)?;
            }
            let rows = summarize(&records);
            if json {
                print_json(&rows)?;
            } else {
                print!("{}", summary_csv(&rows));
            }
        }
    }
    Ok(())
}
