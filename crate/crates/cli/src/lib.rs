//! Command implementations behind the `amap` binary.

pub mod bench;
pub mod generate;
pub mod seed;
pub mod solve;

use std::fs;
use std::path::{Path, PathBuf};

use amap_core::io::{parse_network, parse_problem};
use amap_core::model::{BayesianNetwork, MapProblem};
use amap_core::solver::{AnnealSchedule, DEFAULT_ORACLE_CAP};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use generate::generate_problem;
pub use seed::{derive_seed, rng_from};

/// Environment variable overriding the oracle's search-space cap.
pub const ORACLE_CAP_ENV: &str = "AMAP_ORACLE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "amap",
    version,
    about = "Annealed MAP inference for discrete Bayesian networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one MAP problem.
    Solve(solve::SolveArgs),
    /// Generate a random MAP problem for a network.
    Gen(GenArgs),
    /// Run a benchmark over generated problems and write a CSV report.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Algo {
    Anneal,
    Hillclimb,
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Anneal => "anneal",
            Algo::Hillclimb => "hillclimb",
            Algo::Oracle => "oracle",
        }
    }

    /// Stable stream index for seed derivation.
    pub fn stream(self) -> u64 {
        match self {
            Algo::Anneal => 1,
            Algo::Hillclimb => 2,
            Algo::Oracle => 3,
        }
    }
}

/// Annealing schedule overrides shared by `solve` and `bench`.
#[derive(Debug, Clone, Default, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub wait: Option<u64>,
    #[arg(long)]
    pub stop: Option<u64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub max_sweeps: Option<u64>,
}

impl ScheduleArgs {
    pub fn schedule(&self) -> Result<AnnealSchedule> {
        let d = AnnealSchedule::default();
        let s = AnnealSchedule {
            t0: self.t0.unwrap_or(d.t0),
            alpha: self.alpha.unwrap_or(d.alpha),
            k: self.k.unwrap_or(d.k),
            wait: self.wait.unwrap_or(d.wait),
            stop: self.stop.unwrap_or(d.stop),
            t_min: self.t_min.unwrap_or(d.t_min),
            max_sweeps: self.max_sweeps.or(d.max_sweeps),
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub map_count: usize,
    #[arg(long, default_value_t = 20)]
    pub evid_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<()> {
    match cli.command {
        Command::Solve(a) => solve::run(&a, out),
        Command::Gen(a) => run_gen(&a, out),
        Command::Bench(a) => bench::run(&a, out),
    }
}

pub fn run_gen(args: &GenArgs, out: &mut dyn std::io::Write) -> Result<()> {
    let net = load_network(&args.net)?;
    let problem = generate_problem(&net, args.map_count, args.evid_count, &mut rng_from(args.seed))
        .with_context(|| format!("generating a problem for {}", args.net.display()))?;
    let text = amap_core::io::serialize_problem(&problem, &net);
    match &args.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn load_network(path: &Path) -> Result<BayesianNetwork> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_network(&text).with_context(|| format!("{}", path.display()))
}

pub fn load_problem(path: &Path, net: &BayesianNetwork) -> Result<MapProblem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_problem(&text, net).with_context(|| format!("{}", path.display()))
}

/// Oracle cap from [`ORACLE_CAP_ENV`], or the library default.
pub fn oracle_cap() -> Result<usize> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("{ORACLE_CAP_ENV} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}
