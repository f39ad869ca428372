use amap_core::engine::forward_sample;
use amap_core::model::{BayesianNetwork, MapProblem, VarId};
use anyhow::{bail, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random MAP problem in the style of the benchmark protocol: MAP
/// variables drawn from the roots, evidence variables from the leaves,
/// evidence states copied from one prior forward sample.
///
/// A variable that is both root and leaf (isolated) can only be chosen as
/// a MAP variable.
pub fn generate_problem<R: Rng + ?Sized>(
    net: &BayesianNetwork,
    n_map: usize,
    n_evid: usize,
    rng: &mut R,
) -> Result<MapProblem> {
    if n_map == 0 {
        bail!("map count must be at least 1");
    }
    let roots = net.roots();
    if roots.is_empty() {
        bail!("network `{}` has no root variables", net.name());
    }
    let mut map_vars: Vec<VarId> = roots
        .choose_multiple(rng, n_map.min(roots.len()))
        .copied()
        .collect();
    map_vars.sort_unstable();
    let leaves: Vec<VarId> = net
        .leaves()
        .into_iter()
        .filter(|v| map_vars.binary_search(v).is_err())
        .collect();
    let evid_vars: Vec<VarId> = leaves
        .choose_multiple(rng, n_evid.min(leaves.len()))
        .copied()
        .collect();
    let sample = forward_sample(net, rng);
    let evidence = sample.restricted(&evid_vars);
    Ok(MapProblem::new(net, map_vars, evidence)?)
}
