use std::collections::BTreeSet;

use crate::model::{Assignment, BayesianNetwork, Cpt, MapProblem, VarId, Variable};

/// One independent piece of a pruned MAP problem.
///
/// The sub-network uses its own dense ids; `globals[local]` maps back to
/// the original network.
#[derive(Debug, Clone)]
pub struct Component {
    pub network: BayesianNetwork,
    pub problem: MapProblem,
    pub globals: Vec<VarId>,
}

impl Component {
    pub fn local_of(&self, global: VarId) -> Option<VarId> {
        self.globals.binary_search(&global).ok()
    }

    /// Restricts a global assignment to this component, renumbered.
    pub fn to_local(&self, a: &Assignment) -> Assignment {
        a.iter()
            .filter_map(|(v, s)| self.local_of(v).map(|l| (l, s)))
            .collect()
    }

    pub fn to_global(&self, a: &Assignment) -> Assignment {
        a.iter().map(|(v, s)| (self.globals[v], s)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PrunedNetwork {
    pub components: Vec<Component>,
    /// Barren variables removed before splitting.
    pub dropped: Vec<VarId>,
    /// Variables of components that held no MAP variable.
    pub discarded: Vec<VarId>,
}

impl PrunedNetwork {
    /// Index of the component holding a MAP variable, and its local id.
    pub fn locate(&self, global: VarId) -> Option<(usize, VarId)> {
        self.components
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.local_of(global).map(|l| (i, l)))
    }
}

/// Removes barren variables, splits what remains into weakly connected
/// components, and discards components without MAP variables.
///
/// `p(X | E)` on the original network equals the product of the
/// per-component conditionals.
pub fn prune(net: &BayesianNetwork, problem: &MapProblem) -> PrunedNetwork {
    let n = net.len();
    let mut targets = vec![false; n];
    for &v in problem.map_vars() {
        targets[v] = true;
    }
    for v in problem.evidence().vars() {
        targets[v] = true;
    }

    let mut alive = vec![true; n];
    let mut live_children: Vec<usize> = (0..n).map(|v| net.children(v).len()).collect();
    let mut stack: Vec<VarId> = (0..n).filter(|&v| live_children[v] == 0 && !targets[v]).collect();
    let mut dropped = Vec::new();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        dropped.push(v);
        for &p in net.parents(v) {
            live_children[p] -= 1;
            if live_children[p] == 0 && !targets[p] && alive[p] {
                stack.push(p);
            }
        }
    }
    dropped.sort_unstable();

    // union-find over surviving parent edges
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for v in (0..n).filter(|&v| alive[v]) {
        for &p in net.parents(v) {
            let (a, b) = (find(&mut uf, v), find(&mut uf, p));
            if a != b {
                uf[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<VarId>> = Vec::new();
    let mut group_of_root = vec![usize::MAX; n];
    for v in (0..n).filter(|&v| alive[v]) {
        let r = find(&mut uf, v);
        if group_of_root[r] == usize::MAX {
            group_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of_root[r]].push(v);
    }

    let mut components = Vec::new();
    let mut discarded = Vec::new();
    for members in groups {
        let set: BTreeSet<VarId> = members.iter().copied().collect();
        let map_vars: Vec<VarId> = problem
            .map_vars()
            .iter()
            .copied()
            .filter(|v| set.contains(v))
            .collect();
        if map_vars.is_empty() {
            discarded.extend(members);
            continue;
        }
        components.push(build_component(net, problem, members, &map_vars));
    }
    discarded.sort_unstable();

    PrunedNetwork {
        components,
        dropped,
        discarded,
    }
}

fn build_component(
    net: &BayesianNetwork,
    problem: &MapProblem,
    globals: Vec<VarId>,
    map_vars: &[VarId],
) -> Component {
    let local = |g: VarId| {
        globals
            .binary_search(&g)
            .expect("parent of a live variable is live")
    };
    let variables: Vec<Variable> = globals
        .iter()
        .enumerate()
        .map(|(i, &g)| Variable {
            id: i,
            ..net.variable(g).clone()
        })
        .collect();
    let cpts: Vec<Cpt> = globals
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let cpt = net.cpt(g);
            Cpt::new(
                i,
                cpt.parents.iter().map(|&p| local(p)).collect(),
                cpt.table.clone(),
            )
        })
        .collect();
    let network =
        BayesianNetwork::new(net.name(), variables, cpts).expect("sub-network of a valid network is valid");
    let local_map: Vec<VarId> = map_vars.iter().map(|&g| local(g)).collect();
    let evidence: Assignment = problem
        .evidence()
        .iter()
        .filter_map(|(v, s)| globals.binary_search(&v).ok().map(|l| (l, s)))
        .collect();
    let problem =
        MapProblem::new(&network, local_map, evidence).expect("restriction of a valid problem is valid");
    Component {
        network,
        problem,
        globals,
    }
}
