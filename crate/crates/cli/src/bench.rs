use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use amap_core::io::{write_report, ReportRow};
use amap_core::model::{BayesianNetwork, MapProblem};
use amap_core::solver::{
    annealed_map, brute_force_map_capped, hill_climb_map, AnnealSchedule, SolveReport, SolverError,
};
use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;

use crate::{derive_seed, generate_problem, load_network, oracle_cap, rng_from, Algo, ScheduleArgs};

/// Two log-probabilities closer than this count as the same optimum.
pub const MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Network files; may be repeated.
    #[arg(long, required = true, num_args = 1..)]
    pub net: Vec<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "anneal,oracle")]
    pub algos: Vec<Algo>,
    #[arg(short = 'o', long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 20)]
    pub map_count: usize,
    #[arg(long, default_value_t = 20)]
    pub evid_count: usize,
    #[arg(long, default_value_t = 1)]
    pub restarts: u32,
    #[arg(long, default_value_t = 25)]
    pub max_steps: u64,
    /// Leave wall_ms blank so reports are byte-identical across runs.
    #[arg(long)]
    pub no_wall_clock: bool,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

struct Setup<'a> {
    args: &'a BenchArgs,
    schedule: AnnealSchedule,
    algos: Vec<Algo>,
    cap: usize,
}

pub fn run(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    if args.workers == 0 {
        bail!("--workers must be at least 1");
    }
    if args.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let mut algos = args.algos.clone();
    algos.sort();
    algos.dedup();
    if algos.is_empty() {
        bail!("--algos must name at least one algorithm");
    }
    let setup = Setup {
        args,
        schedule: args.schedule.schedule()?,
        algos,
        cap: oracle_cap()?,
    };
    let nets = args
        .net
        .iter()
        .map(|p| Ok((network_label(p), load_network(p)?)))
        .collect::<Result<Vec<_>>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .context("starting worker pool")?;
    let jobs: Vec<(usize, usize)> = (0..nets.len())
        .flat_map(|n| (0..args.cases).map(move |c| (n, c)))
        .collect();
    let results: Vec<Vec<ReportRow>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, c)| run_case(&setup, &nets[n].0, &nets[n].1, n, c))
            .collect::<Result<Vec<_>>>()
    })?;
    let rows: Vec<ReportRow> = results.into_iter().flatten().collect();

    fs::write(&args.output, write_report(&rows))
        .with_context(|| format!("writing {}", args.output.display()))?;
    for (label, _) in &nets {
        summarize(label, &rows, &setup.algos, out)?;
    }
    Ok(())
}

fn network_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn run_case(
    setup: &Setup,
    label: &str,
    net: &BayesianNetwork,
    net_idx: usize,
    case: usize,
) -> Result<Vec<ReportRow>> {
    let case_seed = derive_seed(setup.args.seed, &[net_idx as u64, case as u64]);
    let problem = generate_problem(
        net,
        setup.args.map_count,
        setup.args.evid_count,
        &mut rng_from(derive_seed(case_seed, &[0])),
    )
    .with_context(|| format!("{label} case {case}"))?;

    let oracle_seed = derive_seed(case_seed, &[Algo::Oracle.stream()]);
    let started = Instant::now();
    let oracle = match brute_force_map_capped(net, &problem, setup.cap) {
        Ok(r) => Some(r),
        Err(SolverError::OracleCap { .. }) => None,
        Err(e) => return Err(e).with_context(|| format!("{label} case {case}: oracle")),
    };
    let oracle_ms = started.elapsed().as_millis() as u64;

    let mut rows = Vec::with_capacity(setup.algos.len());
    for &algo in &setup.algos {
        let seed = derive_seed(case_seed, &[algo.stream()]);
        let (report, ms) = match algo {
            Algo::Oracle => (oracle.clone(), oracle_ms),
            _ => {
                let started = Instant::now();
                let r = run_algo(setup, algo, net, &problem, seed)
                    .with_context(|| format!("{label} case {case}: {}", algo.name()))?;
                (Some(r), started.elapsed().as_millis() as u64)
            }
        };
        let matches = match (&report, &oracle) {
            (Some(r), Some(o)) => Some(r.best == o.best || (r.logp - o.logp).abs() <= MATCH_TOLERANCE),
            _ => None,
        };
        let seed = if algo == Algo::Oracle { oracle_seed } else { seed };
        rows.push(ReportRow {
            network: label.to_string(),
            case_id: case,
            algorithm: algo.name().to_string(),
            seed,
            log10_prob: report.as_ref().map(SolveReport::log10_prob),
            prob: report.as_ref().map(SolveReport::prob),
            sweeps: report.as_ref().map_or(0, |r| r.sweeps),
            restarts_used: report.as_ref().map_or(0, |r| r.restarts),
            best_found_sweep: report.as_ref().map_or(0, |r| r.best_found_sweep),
            reheats: report.as_ref().map_or(0, |r| r.reheats),
            wall_ms: (!setup.args.no_wall_clock).then_some(ms),
            matches_oracle: matches,
        });
    }
    Ok(rows)
}

fn run_algo(
    setup: &Setup,
    algo: Algo,
    net: &BayesianNetwork,
    problem: &MapProblem,
    seed: u64,
) -> Result<SolveReport, SolverError> {
    match algo {
        Algo::Anneal => annealed_map(
            net,
            problem,
            &setup.schedule,
            &mut rng_from(seed),
            setup.args.restarts,
        ),
        Algo::Hillclimb => hill_climb_map(net, problem, setup.args.max_steps),
        Algo::Oracle => unreachable!("oracle results are shared across rows"),
    }
}

fn summarize(label: &str, rows: &[ReportRow], algos: &[Algo], out: &mut dyn Write) -> Result<()> {
    let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.network == label).collect();
    let cases = mine.iter().map(|r| r.case_id).max().map_or(0, |m| m + 1);
    let oracle_of = |case: usize| {
        mine.iter()
            .find(|r| r.case_id == case && r.algorithm == "oracle")
            .and_then(|r| r.log10_prob)
    };
    write!(out, "{label}: cases={cases}")?;
    for &algo in algos.iter().filter(|&&a| a != Algo::Oracle) {
        let judged: Vec<&&ReportRow> = mine
            .iter()
            .filter(|r| r.algorithm == algo.name() && r.matches_oracle.is_some())
            .collect();
        let optimal = judged.iter().filter(|r| r.matches_oracle == Some(true)).count();
        write!(out, " {}_optimal={}/{}", algo.name(), optimal, judged.len())?;
        let ratios: Vec<f64> = judged
            .iter()
            .filter(|r| r.matches_oracle == Some(false))
            .filter_map(|r| Some(10f64.powf(r.log10_prob? - oracle_of(r.case_id)?)))
            .collect();
        if !ratios.is_empty() {
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            write!(out, " {}_mean_ratio_on_mismatch={:.6}", algo.name(), mean)?;
        }
    }
    writeln!(out)?;
    Ok(())
}
