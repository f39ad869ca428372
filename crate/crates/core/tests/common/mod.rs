//! Exhaustive-enumeration oracle over the full joint. Uses only the model
//! module (chain rule), never the elimination engine.
#![allow(dead_code)]

use amap_core::model::{complete, joint_log_prob, Assignment, BayesianNetwork, MapProblem, VarId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Unnormalized `Σ_others p(keep, others, E)` laid out row-major over
/// `keep` in ascending id order.
pub fn enumerate_marginal(net: &BayesianNetwork, keep: &[VarId], evidence: &Assignment) -> Vec<f64> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let size: usize = keep.iter().map(|&v| net.cardinality(v)).product();
    let mut out = vec![0.0; size];
    for full in complete(evidence, net) {
        let idx = keep
            .iter()
            .fold(0, |acc, &v| acc * net.cardinality(v) + full.get(v).unwrap());
        out[idx] += joint_log_prob(net, &full).unwrap().exp();
    }
    out
}

/// Brute-force MAP from the full joint: the lowest configuration (first
/// MAP variable most significant) with maximal `p(x | E)`.
pub fn enumerate_map(net: &BayesianNetwork, problem: &MapProblem) -> (Assignment, f64) {
    let vars = problem.map_vars();
    let sorted = {
        let mut s = vars.to_vec();
        s.sort_unstable();
        s
    };
    let table = enumerate_marginal(net, vars, problem.evidence());
    let total: f64 = table.iter().sum();
    let cards: Vec<usize> = vars.iter().map(|&v| net.cardinality(v)).collect();
    let mut states = vec![0usize; vars.len()];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let a: Assignment = vars.iter().copied().zip(states.iter().copied()).collect();
        let idx = sorted
            .iter()
            .fold(0, |acc, &v| acc * net.cardinality(v) + a.get(v).unwrap());
        let lp = (table[idx] / total).ln();
        if best.as_ref().is_none_or(|(_, b)| lp > *b) {
            best = Some((states.clone(), lp));
        }
        let mut j = vars.len();
        loop {
            if j == 0 {
                let (s, lp) = best.unwrap();
                return (vars.iter().copied().zip(s).collect(), lp);
            }
            j -= 1;
            states[j] += 1;
            if states[j] < cards[j] {
                break;
            }
            states[j] = 0;
        }
    }
}

/// A random MAP problem whose evidence comes from a prior sample, so
/// `p(E) > 0`.
pub fn random_problem<R: Rng>(
    rng: &mut R,
    net: &BayesianNetwork,
    max_map: usize,
    max_evidence: usize,
) -> MapProblem {
    let mut ids: Vec<VarId> = (0..net.len()).collect();
    ids.shuffle(rng);
    let n_map = rng.gen_range(1..=max_map.min(net.len()));
    let rest = net.len() - n_map;
    let n_ev = rng.gen_range(0..=max_evidence.min(rest));
    let sample = amap_core::engine::forward_sample(net, rng);
    let map_vars = ids[..n_map].to_vec();
    let evidence = sample.restricted(&ids[n_map..n_map + n_ev]);
    MapProblem::new(net, map_vars, evidence).unwrap()
}

pub fn log_close(a: f64, b: f64, tol: f64) -> bool {
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        a == b
    } else {
        (a - b).abs() <= tol
    }
}
