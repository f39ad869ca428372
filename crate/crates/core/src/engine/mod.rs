//! Exact inference by variable elimination, evidence-based pruning, and
//! prior forward sampling.

mod factor;
mod prune;
mod sample;

use std::collections::BTreeSet;

use thiserror::Error;

pub use factor::Factor;
pub use prune::{prune, Component, PrunedNetwork};
pub use sample::{forward_sample, sample_index};

use crate::model::{Assignment, BayesianNetwork, ModelError, VarId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    /// The conditioning context has probability zero.
    #[error("impossible context: the conditioning assignment has probability zero")]
    ImpossibleContext,
    #[error("inconsistent evidence: p(E) = 0")]
    InconsistentEvidence,
    #[error("variable `{0}` is both queried and conditioned on")]
    QueryOverlap(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Tie-break applied when several variables add the same number of fill
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestId,
    HighestId,
}

/// Unnormalized `f(keep) = Σ_others Π_i p(z_i | pa(z_i))` with evidence
/// rows selected. The result scope is `keep` sorted ascending.
pub fn eliminate(
    net: &BayesianNetwork,
    keep: &[VarId],
    evidence: &Assignment,
) -> Result<Factor, EngineError> {
    eliminate_with(net, keep, evidence, TieBreak::LowestId)
}

pub fn eliminate_with(
    net: &BayesianNetwork,
    keep: &[VarId],
    evidence: &Assignment,
    tie: TieBreak,
) -> Result<Factor, EngineError> {
    evidence.validate(net)?;
    let keep: BTreeSet<VarId> = keep.iter().copied().collect();
    for &k in &keep {
        if k >= net.len() {
            return Err(ModelError::UnknownId(k).into());
        }
        if evidence.contains(k) {
            return Err(EngineError::QueryOverlap(net.variable(k).name.clone()));
        }
    }

    let mut constant = Factor::unit();
    let mut pool: Vec<Factor> = Vec::with_capacity(net.len());
    for v in 0..net.len() {
        let mut f = Factor::from_cpt(net, v);
        for var in f.scope().to_vec() {
            if let Some(s) = evidence.get(var) {
                f = f.restrict(var, s);
            }
        }
        if f.scope().is_empty() {
            constant = constant.product(&f);
        } else {
            pool.push(f);
        }
    }

    let hidden: Vec<VarId> = (0..net.len())
        .filter(|v| !keep.contains(v) && !evidence.contains(*v))
        .collect();
    for var in min_fill_order(net.len(), &pool, &hidden, tie) {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = pool.into_iter().partition(|f| f.contains(var));
        pool = rest;
        let Some(joined) = touching.into_iter().reduce(|a, b| a.product(&b)) else {
            continue;
        };
        let summed = joined.sum_out(var);
        if summed.scope().is_empty() {
            constant = constant.product(&summed);
        } else {
            pool.push(summed);
        }
    }

    let result = pool.into_iter().fold(constant, |acc, f| acc.product(&f));
    debug_assert!(keep.iter().all(|&k| result.contains(k)));
    Ok(result)
}

/// Greedy min-fill elimination order over `hidden`, computed on the
/// interaction graph of `factors`.
pub fn min_fill_order(n: usize, factors: &[Factor], hidden: &[VarId], tie: TieBreak) -> Vec<VarId> {
    let mut adj: Vec<BTreeSet<VarId>> = vec![BTreeSet::new(); n];
    for f in factors {
        let s = f.scope();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    let mut remaining: BTreeSet<VarId> = hidden.iter().copied().collect();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut best: Option<(usize, VarId)> = None;
        let candidates: Box<dyn Iterator<Item = &VarId>> = match tie {
            TieBreak::LowestId => Box::new(remaining.iter()),
            TieBreak::HighestId => Box::new(remaining.iter().rev()),
        };
        for &v in candidates {
            let fill = fill_in(&adj, v);
            if best.is_none_or(|(b, _)| fill < b) {
                best = Some((fill, v));
                if fill == 0 {
                    break;
                }
            }
        }
        let (_, v) = best.expect("remaining is nonempty");
        let nbrs: Vec<VarId> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        remaining.remove(&v);
        order.push(v);
    }
    order
}

fn fill_in(adj: &[BTreeSet<VarId>], v: VarId) -> usize {
    let nbrs: Vec<VarId> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for b in &nbrs[i + 1..] {
            if !adj[a].contains(b) {
                missing += 1;
            }
        }
    }
    missing
}

/// `p(target | context)` as a normalized distribution over the target's
/// states. Returns [`EngineError::ImpossibleContext`] when `p(context) = 0`.
pub fn conditional(
    net: &BayesianNetwork,
    target: VarId,
    context: &Assignment,
) -> Result<Vec<f64>, EngineError> {
    let f = eliminate(net, &[target], context)?;
    f.normalized().ok_or(EngineError::ImpossibleContext)
}

/// `ln p(x | E)` where `x` binds exactly the MAP variables.
pub fn map_posterior(
    net: &BayesianNetwork,
    x: &Assignment,
    evidence: &Assignment,
) -> Result<f64, EngineError> {
    x.validate(net)?;
    let keep: Vec<VarId> = x.vars().collect();
    let f = eliminate(net, &keep, evidence)?;
    if f.is_all_zero() {
        return Err(EngineError::InconsistentEvidence);
    }
    let states: Vec<usize> = f.scope().iter().map(|&v| x.get(v).unwrap()).collect();
    let idx = f.index_of(&states);
    let total: f64 = f.values().iter().sum();
    Ok((f.values()[idx] / total).ln())
}

/// `ln p(E)`; `-inf` for inconsistent evidence.
pub fn evidence_log_prob(net: &BayesianNetwork, evidence: &Assignment) -> Result<f64, EngineError> {
    let f = eliminate(net, &[], evidence)?;
    Ok(f.ln_value(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::sprinkler;

    const R: VarId = 0;
    const S: VarId = 1;
    const W: VarId = 2;

    #[test]
    fn sprinkler_eliminate_rain() {
        let net = sprinkler();
        let f = eliminate(&net, &[R], &Assignment::from_pairs([(W, 0)])).unwrap();
        let v = f.linear_values();
        assert!((v[0] - 0.16038).abs() < 1e-12, "{v:?}");
        assert!((v[1] - 0.288).abs() < 1e-12, "{v:?}");
    }

    #[test]
    fn keep_everything_is_the_joint() {
        let net = sprinkler();
        let f = eliminate(&net, &[W, S, R], &Assignment::new()).unwrap();
        assert_eq!(f.scope(), &[R, S, W]);
        let total: f64 = f.linear_values().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // R=f, S=t, W=t
        let idx = f.index_of(&[1, 0, 0]);
        assert!((f.linear_values()[idx] - 0.288).abs() < 1e-12);
    }

    #[test]
    fn contradictory_evidence_gives_zero_factor() {
        let net = sprinkler();
        // S=f, R=f forces W=f
        let ev = Assignment::from_pairs([(S, 1), (W, 0)]);
        let f = eliminate(&net, &[], &ev.merged(&Assignment::from_pairs([(R, 1)]))).unwrap();
        assert!(f.is_all_zero());
    }

    #[test]
    fn conditional_examples() {
        let net = sprinkler();
        let p = conditional(&net, R, &Assignment::from_pairs([(W, 0)])).unwrap();
        assert!((p[0] - 0.16038 / 0.44838).abs() < 1e-12);
        assert!((p[1] - 0.288 / 0.44838).abs() < 1e-12);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-12);

        let prior = conditional(&net, R, &Assignment::new()).unwrap();
        assert!((prior[0] - 0.2).abs() < 1e-15);
        assert!((prior[1] - 0.8).abs() < 1e-15);

        // S=f, W=t forces R=t
        let forced = conditional(&net, R, &Assignment::from_pairs([(S, 1), (W, 0)])).unwrap();
        assert_eq!(forced, vec![1.0, 0.0]);
    }

    #[test]
    fn conditional_flags_impossible_context() {
        // A -> B -> C, each a deterministic copy of its parent
        let net = crate::synth::deterministic_chain(3);
        let ctx = Assignment::from_pairs([(0, 0), (2, 1)]);
        assert_eq!(conditional(&net, 1, &ctx), Err(EngineError::ImpossibleContext));
    }

    #[test]
    fn map_posterior_examples() {
        let net = sprinkler();
        let x = Assignment::from_pairs([(S, 0), (R, 1)]);
        let e = Assignment::from_pairs([(W, 0)]);
        let lp = map_posterior(&net, &x, &e).unwrap();
        assert!((lp - (0.288f64 / 0.44838).ln()).abs() < 1e-12);

        let zero = Assignment::from_pairs([(S, 1), (R, 1)]);
        assert_eq!(map_posterior(&net, &zero, &e).unwrap(), f64::NEG_INFINITY);

        let prior = map_posterior(&net, &Assignment::from_pairs([(R, 0)]), &Assignment::new()).unwrap();
        assert!((prior - 0.2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn map_posterior_inconsistent_evidence() {
        let net = crate::synth::deterministic_chain(3);
        let e = Assignment::from_pairs([(0, 0), (2, 1)]);
        assert_eq!(
            map_posterior(&net, &Assignment::from_pairs([(1, 0)]), &e),
            Err(EngineError::InconsistentEvidence)
        );
    }

    #[test]
    fn overlap_is_rejected() {
        let net = sprinkler();
        let e = Assignment::from_pairs([(W, 0)]);
        assert!(matches!(
            eliminate(&net, &[W], &e),
            Err(EngineError::QueryOverlap(_))
        ));
    }

    #[test]
    fn min_fill_prefers_simplicial_vertices() {
        // star around 0 with leaves 1..4: eliminating 0 first adds 6 fills
        let fs: Vec<Factor> = (1..5)
            .map(|k| Factor::from_table(&[0, k], &[2, 2], vec![1.0; 4]))
            .collect();
        let order = min_fill_order(5, &fs, &[0, 1, 2, 3, 4], TieBreak::LowestId);
        assert_eq!(order[0], 1);
        assert_eq!(*order.last().unwrap(), 4);
        let rev = min_fill_order(5, &fs, &[0, 1, 2, 3, 4], TieBreak::HighestId);
        assert_eq!(rev[0], 4);
    }

    #[test]
    fn evidence_probability() {
        let net = sprinkler();
        let lp = evidence_log_prob(&net, &Assignment::from_pairs([(W, 0)])).unwrap();
        assert!((lp - 0.44838f64.ln()).abs() < 1e-12);
    }
}
