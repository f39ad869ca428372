use crate::engine::{self, EngineError};
use crate::model::{BayesianNetwork, MapProblem};

use super::prepared::PreparedProblem;
use super::{SolveReport, SolverError};

/// Largest MAP search space the oracle will enumerate by default.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 20;

/// Exact MAP by exhaustive enumeration with the default cap.
pub fn brute_force_map(net: &BayesianNetwork, problem: &MapProblem) -> Result<SolveReport, SolverError> {
    brute_force_map_capped(net, problem, DEFAULT_ORACLE_CAP)
}

/// Enumerates every MAP configuration (first MAP variable most
/// significant) and returns the first one with the highest posterior.
///
/// Each configuration is scored as the sum of per-component log
/// posteriors, read from one normalized table per pruned component.
pub fn brute_force_map_capped(
    net: &BayesianNetwork,
    problem: &MapProblem,
    cap: usize,
) -> Result<SolveReport, SolverError> {
    let size = problem.search_space(net);
    if size > cap {
        return Err(SolverError::OracleCap { size, cap });
    }
    let prep = PreparedProblem::new(net, problem)?;
    let n = prep.map_vars().len();

    // ln p(x_c | E_c) tables and the stride of each MAP slot inside its
    // component's table
    let mut tables: Vec<Vec<f64>> = Vec::with_capacity(prep.components().len());
    let mut stride = vec![0usize; n];
    for (c, comp) in prep.components().iter().enumerate() {
        let locals: Vec<usize> = prep.members(c).iter().map(|&j| prep.slot(j).1).collect();
        let f = engine::eliminate(&comp.network, &locals, comp.problem.evidence())?;
        let probs = f.normalized().ok_or(EngineError::InconsistentEvidence)?;
        tables.push(probs.iter().map(|p| p.ln()).collect());
        let cards = f.cardinalities();
        for &j in prep.members(c) {
            let pos = f
                .scope()
                .binary_search(&prep.slot(j).1)
                .expect("kept variable in scope");
            stride[j] = cards[pos + 1..].iter().product();
        }
    }

    let cards = prep.cardinalities();
    let mut states = vec![0usize; n];
    let mut index = vec![0usize; tables.len()];
    let score = |index: &[usize]| -> f64 { tables.iter().zip(index).map(|(t, &i)| t[i]).sum() };
    let mut best_states = states.clone();
    let mut best = score(&index);
    'outer: loop {
        // odometer, last MAP variable fastest
        let mut j = n;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            let c = prep.slot(j).0;
            if states[j] + 1 < cards[j] {
                states[j] += 1;
                index[c] += stride[j];
                break;
            }
            index[c] -= stride[j] * states[j];
            states[j] = 0;
        }
        let s = score(&index);
        if s > best {
            best = s;
            best_states.clone_from(&states);
        }
    }

    Ok(SolveReport {
        best: prep.assignment(&best_states),
        logp: best,
        sweeps: 0,
        reheats: 0,
        best_found_sweep: 0,
        restarts: 0,
        trace: None,
        max_tracking_error: 0.0,
        warnings: Vec::new(),
    })
}
