use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use amap_core::solver::{
    annealed_map_with, brute_force_map_capped, hill_climb_map, AnnealOptions, SolveReport, SweepRecord,
};
use anyhow::{Context, Result};
use clap::Args;

use crate::{load_network, load_problem, oracle_cap, rng_from, Algo, ScheduleArgs};

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Anneal)]
    pub algo: Algo,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub restarts: u32,
    /// Move limit for the hill climber.
    #[arg(long, default_value_t = 25)]
    pub max_steps: u64,
    /// Recompute ln p(x|E) exactly after every sweep and fail on drift.
    #[arg(long)]
    pub verify: bool,
    /// Write a per-sweep CSV trace (anneal only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

pub fn run(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let net = load_network(&args.net)?;
    let problem = load_problem(&args.problem, &net)?;
    let report = match args.algo {
        Algo::Anneal => {
            let schedule = args.schedule.schedule()?;
            let opts = AnnealOptions {
                restarts: args.restarts,
                record_trace: args.trace.is_some(),
                verify_each_sweep: args.verify,
            };
            annealed_map_with(&net, &problem, &schedule, &mut rng_from(args.seed), &opts)?
        }
        Algo::Hillclimb => hill_climb_map(&net, &problem, args.max_steps)?,
        Algo::Oracle => brute_force_map_capped(&net, &problem, oracle_cap()?)?,
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let (Some(path), Some(trace)) = (&args.trace, &report.trace) {
        fs::write(path, trace_csv(trace)).with_context(|| format!("writing {}", path.display()))?;
    }

    writeln!(out, "network: {}", net.name())?;
    writeln!(out, "algorithm: {}", args.algo.name())?;
    for &v in problem.map_vars() {
        let var = net.variable(v);
        let s = report.best.get(v).expect("report covers every MAP variable");
        writeln!(out, "{} = {}", var.name, var.states[s])?;
    }
    write_summary(&report, out)?;
    Ok(())
}

fn write_summary(r: &SolveReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "p(x|E) = {:e}", r.prob())?;
    writeln!(out, "log10 p(x|E) = {:.12}", r.log10_prob())?;
    writeln!(
        out,
        "sweeps: {}  reheats: {}  best found at sweep: {}  restarts: {}",
        r.sweeps, r.reheats, r.best_found_sweep, r.restarts
    )?;
    Ok(())
}

pub const TRACE_COLUMNS: &str = "restart,sweep,temperature,current_logp,best_logp,specific_heat,reheated,next_temperature,accepted,min_acceptance,impossible_contexts";

pub fn trace_csv(trace: &[SweepRecord]) -> String {
    let mut s = String::from(TRACE_COLUMNS);
    s.push('\n');
    for r in trace {
        let heat = r.specific_heat.map(|h| format!("{h:?}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{:?},{:?},{:?},{},{},{:?},{},{:?},{}",
            r.restart,
            r.sweep,
            r.temperature,
            r.current_logp,
            r.best_logp,
            heat,
            u8::from(r.reheated),
            r.next_temperature,
            r.accepted,
            r.min_acceptance,
            r.impossible_contexts
        );
    }
    s
}
