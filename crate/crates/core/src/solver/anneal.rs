use rand::Rng;

use crate::engine::{forward_sample, sample_index, EngineError};
use crate::model::{Assignment, BayesianNetwork, MapProblem};

use super::prepared::PreparedProblem;
use super::schedule::{
    acceptance_probability, geometric_cool, reheat_temperature, specific_heat, AnnealSchedule,
};
use super::{SolveReport, SolverError, IMPROVEMENT_EPSILON, TRACKING_TOLERANCE};

/// Greedy start: MAP variables in topological order, each fixed to the
/// argmax (lowest index on ties) of its conditional given the evidence
/// and the variables fixed so far.
///
/// Returns the state vector aligned with `map_vars()` and a warning per
/// variable whose context turned out impossible (those are set to 0).
pub fn sequential_init_prepared(prep: &PreparedProblem) -> Result<(Vec<usize>, Vec<String>), SolverError> {
    let mut states: Vec<Option<usize>> = vec![None; prep.map_vars().len()];
    let mut warnings = Vec::new();
    for j in prep.topological_slots() {
        let pick = match prep.conditional(j, &states) {
            Ok(dist) => argmax(&dist),
            Err(EngineError::ImpossibleContext) => {
                warnings.push(format!(
                    "impossible context while initializing variable {}; set to state 0",
                    prep.map_vars()[j]
                ));
                0
            }
            Err(e) => return Err(e.into()),
        };
        states[j] = Some(pick);
    }
    Ok((states.into_iter().map(|s| s.unwrap_or(0)).collect(), warnings))
}

/// Sequential initialization as an assignment over the MAP variables.
pub fn sequential_init(net: &BayesianNetwork, problem: &MapProblem) -> Result<Assignment, SolverError> {
    let prep = PreparedProblem::new(net, problem)?;
    let (states, _) = sequential_init_prepared(&prep)?;
    Ok(prep.assignment(&states))
}

fn argmax(dist: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > dist[best] {
            best = i;
        }
    }
    best
}

/// Loop state of one annealing chain. `current` and `best` are state
/// vectors aligned with the problem's MAP variables.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealState {
    pub current: Vec<usize>,
    pub current_logp: f64,
    pub best: Vec<usize>,
    pub best_logp: f64,
    pub temperature: f64,
    pub sweep: u64,
    pub no_improve: u64,
    /// `(temperature, specific heat)` per sweep with at least one finite
    /// cost sample.
    pub heat_trace: Vec<(f64, f64)>,
    pub max_heat: f64,
    pub t_at_max_ch: f64,
    pub best_found_sweep: u64,
    pub reheats: u64,
}

/// What happened during one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub restart: u32,
    pub sweep: u64,
    /// Temperature the sweep ran at.
    pub temperature: f64,
    pub current_logp: f64,
    pub best_logp: f64,
    pub specific_heat: Option<f64>,
    /// The temperature after this sweep came from a reheat.
    pub reheated: bool,
    pub next_temperature: f64,
    pub accepted: u32,
    /// Smallest acceptance probability computed in the sweep.
    pub min_acceptance: f64,
    /// Variables resampled uniformly because their context was impossible.
    pub impossible_contexts: u32,
    pub current: Vec<usize>,
}

/// Simulated-annealing Gibbs chain over the MAP variables.
///
/// Each step draws a candidate from the untempered conditional
/// `p(x_j | x_-j, E)` and accepts it with
/// [`acceptance_probability`] at the current temperature, so the chain
/// targets `p^{1/T}(X | E)`. The log-probability of the current state is
/// tracked incrementally from the conditionals.
pub struct Annealer<'a> {
    prep: &'a PreparedProblem,
    schedule: AnnealSchedule,
    state: AnnealState,
    restart: u32,
    verify_each_sweep: bool,
    max_tracking_error: f64,
    finished: bool,
}

impl<'a> Annealer<'a> {
    pub fn new(
        prep: &'a PreparedProblem,
        schedule: AnnealSchedule,
        init: Vec<usize>,
    ) -> Result<Self, SolverError> {
        schedule.validate()?;
        if init.len() != prep.map_vars().len() || init.iter().zip(prep.cardinalities()).any(|(&s, &c)| s >= c)
        {
            return Err(SolverError::Contract(
                "initial state does not fit the MAP variables".into(),
            ));
        }
        let logp = prep.log_posterior(&init)?;
        let t0 = schedule.t0;
        Ok(Self {
            prep,
            state: AnnealState {
                best: init.clone(),
                current: init,
                current_logp: logp,
                best_logp: logp,
                temperature: t0,
                sweep: 0,
                no_improve: 0,
                heat_trace: Vec::new(),
                max_heat: f64::NEG_INFINITY,
                t_at_max_ch: t0,
                best_found_sweep: 0,
                reheats: 0,
            },
            schedule,
            restart: 0,
            verify_each_sweep: false,
            max_tracking_error: 0.0,
            finished: false,
        })
    }

    /// Compare the tracked log-probability with an exact recomputation
    /// after every sweep.
    pub fn verify_each_sweep(mut self, on: bool) -> Self {
        self.verify_each_sweep = on;
        self
    }

    pub fn with_restart_index(mut self, restart: u32) -> Self {
        self.restart = restart;
        self
    }

    pub fn state(&self) -> &AnnealState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn max_tracking_error(&self) -> f64 {
        self.max_tracking_error
    }

    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<SweepRecord, SolverError> {
        let prep = self.prep;
        let st = &mut self.state;
        let t = st.temperature;
        let start_best = st.best_logp;
        let mut costs = Vec::with_capacity(st.current.len());
        let mut accepted = 0u32;
        let mut impossible = 0u32;
        let mut min_acceptance = 1.0f64;

        for j in 0..st.current.len() {
            match prep.full_conditional(j, &st.current) {
                Ok(dist) => {
                    let cand = sample_index(&dist, rng);
                    let old = st.current[j];
                    let lp_new = dist[cand].ln();
                    let lp_old = dist[old].ln();
                    let a = acceptance_probability(t, lp_new, lp_old)?;
                    min_acceptance = min_acceptance.min(a);
                    let u: f64 = rng.gen();
                    if u < a {
                        accepted += 1;
                        if cand != old {
                            st.current[j] = cand;
                            if st.current_logp.is_finite() && lp_old.is_finite() {
                                st.current_logp += lp_new - lp_old;
                            } else {
                                st.current_logp = prep.log_posterior(&st.current)?;
                            }
                        }
                    }
                }
                Err(EngineError::ImpossibleContext) => {
                    impossible += 1;
                    st.current[j] = rng.gen_range(0..prep.cardinalities()[j]);
                    st.current_logp = f64::NEG_INFINITY;
                }
                Err(e) => return Err(e.into()),
            }
            if st.current_logp > st.best_logp {
                st.best.clone_from(&st.current);
                st.best_logp = st.current_logp;
            }
            let cost = st.best_logp - st.current_logp;
            if cost.is_finite() {
                costs.push(cost);
            }
        }

        let heat = if costs.is_empty() {
            None
        } else {
            Some(specific_heat(&costs, t)?)
        };
        if let Some(h) = heat {
            st.heat_trace.push((t, h));
            if h > st.max_heat {
                st.max_heat = h;
                st.t_at_max_ch = t;
            }
        }

        st.sweep += 1;
        if st.best_logp - start_best > IMPROVEMENT_EPSILON
            || (start_best == f64::NEG_INFINITY && st.best_logp > start_best)
        {
            st.no_improve = 0;
            st.best_found_sweep = st.sweep;
        } else {
            st.no_improve += 1;
        }

        if self.verify_each_sweep {
            let exact = prep.log_posterior(&st.current)?;
            let err = tracking_error(st.current_logp, exact);
            self.max_tracking_error = self.max_tracking_error.max(err);
            if err > TRACKING_TOLERANCE {
                return Err(SolverError::TrackingDrift {
                    tracked: st.current_logp,
                    exact,
                });
            }
        }

        let sched = &self.schedule;
        let mut reheated = false;
        if st.no_improve >= sched.stop || sched.max_sweeps.is_some_and(|m| st.sweep >= m) {
            self.finished = true;
        } else if st.no_improve > 0 && st.no_improve.is_multiple_of(sched.wait) {
            let c_b = st.best_logp - st.current_logp;
            st.temperature = if c_b.is_finite() {
                reheat_temperature(c_b, st.t_at_max_ch, sched.k, sched.t0)
            } else {
                sched.t0
            };
            st.reheats += 1;
            reheated = true;
        } else {
            st.temperature = geometric_cool(t, sched.alpha, sched.t_min);
        }

        Ok(SweepRecord {
            restart: self.restart,
            sweep: st.sweep,
            temperature: t,
            current_logp: st.current_logp,
            best_logp: st.best_logp,
            specific_heat: heat,
            reheated,
            next_temperature: st.temperature,
            accepted,
            min_acceptance,
            impossible_contexts: impossible,
            current: st.current.clone(),
        })
    }

    /// Runs until the stopping rule fires, then checks the tracked best
    /// against an exact recomputation.
    pub fn run<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        mut on_sweep: impl FnMut(&SweepRecord),
    ) -> Result<f64, SolverError> {
        while !self.finished {
            let rec = self.sweep(rng)?;
            on_sweep(&rec);
        }
        self.check_best()
    }

    /// Exact `ln p(best | E)`; errors if the tracked value drifted.
    pub fn check_best(&mut self) -> Result<f64, SolverError> {
        let exact = self.prep.log_posterior(&self.state.best)?;
        let err = tracking_error(self.state.best_logp, exact);
        self.max_tracking_error = self.max_tracking_error.max(err);
        if err > TRACKING_TOLERANCE {
            return Err(SolverError::TrackingDrift {
                tracked: self.state.best_logp,
                exact,
            });
        }
        Ok(exact)
    }
}

fn tracking_error(tracked: f64, exact: f64) -> f64 {
    if tracked == exact {
        0.0
    } else {
        (tracked - exact).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOptions {
    pub restarts: u32,
    pub record_trace: bool,
    pub verify_each_sweep: bool,
}

impl Default for AnnealOptions {
    fn default() -> Self {
        Self {
            restarts: 1,
            record_trace: false,
            verify_each_sweep: false,
        }
    }
}

/// Annealed MAP search. Restart 1 starts from [`sequential_init`];
/// later restarts start from the MAP part of a prior forward sample.
pub fn annealed_map<R: Rng + ?Sized>(
    net: &BayesianNetwork,
    problem: &MapProblem,
    schedule: &AnnealSchedule,
    rng: &mut R,
    restarts: u32,
) -> Result<SolveReport, SolverError> {
    let opts = AnnealOptions {
        restarts,
        ..AnnealOptions::default()
    };
    annealed_map_with(net, problem, schedule, rng, &opts)
}

pub fn annealed_map_with<R: Rng + ?Sized>(
    net: &BayesianNetwork,
    problem: &MapProblem,
    schedule: &AnnealSchedule,
    rng: &mut R,
    opts: &AnnealOptions,
) -> Result<SolveReport, SolverError> {
    if opts.restarts == 0 {
        return Err(SolverError::Contract("restarts must be at least 1".into()));
    }
    schedule.validate()?;
    let prep = PreparedProblem::new(net, problem)?;

    let mut trace = opts.record_trace.then(Vec::new);
    let mut best: Option<(Vec<usize>, f64, u64)> = None;
    let mut total_sweeps = 0u64;
    let mut reheats = 0u64;
    let mut impossible = 0u64;
    let mut max_err = 0.0f64;
    let mut warnings = Vec::new();

    for r in 0..opts.restarts {
        let init = if r == 0 {
            let (s, w) = sequential_init_prepared(&prep)?;
            warnings.extend(w);
            s
        } else {
            let sample = forward_sample(net, rng);
            prep.states_of(&sample).expect("forward samples are full")
        };
        let mut chain = Annealer::new(&prep, schedule.clone(), init)?
            .verify_each_sweep(opts.verify_each_sweep)
            .with_restart_index(r + 1);
        let exact = chain.run(rng, |rec| {
            impossible += u64::from(rec.impossible_contexts);
            if let Some(t) = trace.as_mut() {
                t.push(rec.clone());
            }
        })?;
        let st = chain.state();
        max_err = max_err.max(chain.max_tracking_error());
        if best.as_ref().is_none_or(|(_, lp, _)| exact > *lp) {
            best = Some((st.best.clone(), exact, total_sweeps + st.best_found_sweep));
        }
        total_sweeps += st.sweep;
        reheats += st.reheats;
    }

    let (states, logp, found) = best.expect("at least one restart ran");
    if impossible > 0 {
        warnings.push(format!("{impossible} variable updates hit an impossible context"));
    }
    Ok(SolveReport {
        best: prep.assignment(&states),
        logp,
        sweeps: total_sweeps,
        reheats,
        best_found_sweep: found,
        restarts: opts.restarts,
        trace,
        max_tracking_error: max_err,
        warnings,
    })
}
