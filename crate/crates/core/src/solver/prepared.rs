use crate::engine::{self, Component, EngineError, PrunedNetwork};
use crate::model::{Assignment, BayesianNetwork, MapProblem, VarId};

use super::SolverError;

/// A MAP problem split into independent pieces, with MAP configurations
/// handled as state vectors aligned with `problem.map_vars()`.
#[derive(Debug, Clone)]
pub struct PreparedProblem {
    map_vars: Vec<VarId>,
    cards: Vec<usize>,
    topo_rank: Vec<usize>,
    pruned: PrunedNetwork,
    /// `(component, local id)` per MAP slot.
    slots: Vec<(usize, VarId)>,
    /// MAP slots per component.
    members: Vec<Vec<usize>>,
}

impl PreparedProblem {
    /// Prunes the problem and checks that the evidence is consistent.
    pub fn new(net: &BayesianNetwork, problem: &MapProblem) -> Result<Self, SolverError> {
        if engine::evidence_log_prob(net, problem.evidence())? == f64::NEG_INFINITY {
            return Err(SolverError::InconsistentEvidence);
        }
        let pruned = engine::prune(net, problem);
        let map_vars = problem.map_vars().to_vec();
        let slots: Vec<(usize, VarId)> = map_vars
            .iter()
            .map(|&g| pruned.locate(g).expect("every MAP variable lands in a component"))
            .collect();
        let mut members = vec![Vec::new(); pruned.components.len()];
        for (j, &(c, _)) in slots.iter().enumerate() {
            members[c].push(j);
        }
        let mut topo_rank = vec![0; net.len()];
        for (rank, &v) in net.topological_order().iter().enumerate() {
            topo_rank[v] = rank;
        }
        Ok(Self {
            cards: map_vars.iter().map(|&v| net.cardinality(v)).collect(),
            topo_rank: map_vars.iter().map(|&v| topo_rank[v]).collect(),
            map_vars,
            pruned,
            slots,
            members,
        })
    }

    pub fn map_vars(&self) -> &[VarId] {
        &self.map_vars
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    pub fn pruned(&self) -> &PrunedNetwork {
        &self.pruned
    }

    pub fn components(&self) -> &[Component] {
        &self.pruned.components
    }

    /// Slot indices ordered by the variables' topological rank.
    pub fn topological_slots(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.map_vars.len()).collect();
        order.sort_by_key(|&j| self.topo_rank[j]);
        order
    }

    pub fn assignment(&self, states: &[usize]) -> Assignment {
        self.map_vars
            .iter()
            .copied()
            .zip(states.iter().copied())
            .collect()
    }

    pub fn states_of(&self, a: &Assignment) -> Option<Vec<usize>> {
        self.map_vars.iter().map(|&v| a.get(v)).collect()
    }

    fn context(&self, c: usize, skip: usize, states: &[Option<usize>]) -> Assignment {
        let comp = &self.pruned.components[c];
        let mut ctx = comp.problem.evidence().clone();
        for &k in &self.members[c] {
            if k != skip {
                if let Some(s) = states[k] {
                    ctx.set(self.slots[k].1, s);
                }
            }
        }
        ctx
    }

    /// `p(x_j | bound MAP slots, E)`; unbound slots are summed out.
    pub fn conditional(&self, j: usize, states: &[Option<usize>]) -> Result<Vec<f64>, EngineError> {
        let (c, local) = self.slots[j];
        let ctx = self.context(c, j, states);
        engine::conditional(&self.pruned.components[c].network, local, &ctx)
    }

    /// Same as [`Self::conditional`] for a full MAP state vector.
    pub fn full_conditional(&self, j: usize, states: &[usize]) -> Result<Vec<f64>, EngineError> {
        let opt: Vec<Option<usize>> = states.iter().copied().map(Some).collect();
        self.conditional(j, &opt)
    }

    /// `ln p(x_c | E_c)` of component `c` at a full MAP state vector.
    pub fn component_log_posterior(&self, c: usize, states: &[usize]) -> Result<f64, EngineError> {
        let comp = &self.pruned.components[c];
        let x: Assignment = self.members[c]
            .iter()
            .map(|&k| (self.slots[k].1, states[k]))
            .collect();
        engine::map_posterior(&comp.network, &x, comp.problem.evidence())
    }

    /// Exact `ln p(x | E)`, the sum of the per-component posteriors.
    pub fn log_posterior(&self, states: &[usize]) -> Result<f64, EngineError> {
        let mut total = 0.0;
        for c in 0..self.pruned.components.len() {
            total += self.component_log_posterior(c, states)?;
        }
        Ok(total)
    }

    pub(crate) fn slot(&self, j: usize) -> (usize, VarId) {
        self.slots[j]
    }

    pub(crate) fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }
}
