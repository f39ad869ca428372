//! Discrete Bayesian networks, assignments and joint-probability evaluation.
//!
//! A [`BayesianNetwork`] is immutable once built. Every constructor validates
//! the structural invariants (unique names, one CPT per variable, acyclic
//! parent relation, normalized rows), so downstream code can index freely.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Dense index of a variable inside its network.
pub type VarId = usize;

/// Tolerance on CPT row sums. Rows are checked, never renormalized.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` has no states")]
    NoStates(String),
    #[error("variable `{var}` has an empty state name")]
    EmptyState { var: String },
    #[error("variable `{var}` declares state `{state}` twice")]
    DuplicateState { var: String, state: String },
    #[error("variable `{0}` has no cpt")]
    MissingCpt(String),
    #[error("variable `{0}` has more than one cpt")]
    DuplicateCpt(String),
    #[error("cpt references unknown variable id {0}")]
    UnknownVariable(VarId),
    #[error("cpt of `{var}` lists parent `{parent}` twice")]
    DuplicateParent { var: String, parent: String },
    #[error("cpt of `{var}` has {found} entries, expected {expected}")]
    TableShape {
        var: String,
        expected: usize,
        found: usize,
    },
    #[error("cpt of `{var}` row {row} has entry {value} outside [0, 1]")]
    EntryOutOfRange { var: String, row: usize, value: f64 },
    #[error("cpt of `{var}` row {row} sums to {sum}")]
    RowSum { var: String, row: usize, sum: f64 },
    #[error("parent relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("variable id {0} is not in the network")]
    UnknownId(VarId),
    #[error("state {state} out of range for `{var}` ({cardinality} states)")]
    StateOutOfRange {
        var: String,
        state: usize,
        cardinality: usize,
    },
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("at least one MAP variable required")]
    EmptyMapSet,
    #[error("variable `{0}` listed twice among MAP variables")]
    DuplicateMapVariable(String),
    #[error("variable `{0}` is both a MAP variable and evidence")]
    MapEvidenceOverlap(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub id: VarId,
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

/// Conditional probability table `p(child | parents)`.
///
/// `table` holds one row of `cardinality(child)` entries per parent
/// configuration. Parent configurations are enumerated row-major with the
/// last listed parent varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub child: VarId,
    pub parents: Vec<VarId>,
    pub table: Vec<f64>,
}

impl Cpt {
    pub fn new(child: VarId, parents: Vec<VarId>, table: Vec<f64>) -> Self {
        Self {
            child,
            parents,
            table,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork {
    name: String,
    variables: Vec<Variable>,
    /// Indexed by child id.
    cpts: Vec<Cpt>,
    children: Vec<Vec<VarId>>,
    topo: Vec<VarId>,
    by_name: HashMap<String, VarId>,
}

impl BayesianNetwork {
    /// Builds and validates a network. Variable ids are reassigned to match
    /// their position in `variables`; CPTs may be given in any order.
    pub fn new(
        name: impl Into<String>,
        variables: Vec<Variable>,
        cpts: Vec<Cpt>,
    ) -> Result<Self, ModelError> {
        let mut variables = variables;
        let mut by_name = HashMap::with_capacity(variables.len());
        for (id, var) in variables.iter_mut().enumerate() {
            var.id = id;
            if by_name.insert(var.name.clone(), id).is_some() {
                return Err(ModelError::DuplicateVariable(var.name.clone()));
            }
            if var.states.is_empty() {
                return Err(ModelError::NoStates(var.name.clone()));
            }
            let mut seen = HashSet::new();
            for s in &var.states {
                if s.is_empty() {
                    return Err(ModelError::EmptyState {
                        var: var.name.clone(),
                    });
                }
                if !seen.insert(s.as_str()) {
                    return Err(ModelError::DuplicateState {
                        var: var.name.clone(),
                        state: s.clone(),
                    });
                }
            }
        }

        let n = variables.len();
        let mut slots: Vec<Option<Cpt>> = vec![None; n];
        for cpt in cpts {
            let child = cpt.child;
            if child >= n {
                return Err(ModelError::UnknownVariable(child));
            }
            if slots[child].is_some() {
                return Err(ModelError::DuplicateCpt(variables[child].name.clone()));
            }
            slots[child] = Some(cpt);
        }
        let mut cpts = Vec::with_capacity(n);
        for (id, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(cpt) => cpts.push(cpt),
                None => return Err(ModelError::MissingCpt(variables[id].name.clone())),
            }
        }

        for cpt in &cpts {
            validate_cpt(&variables, cpt)?;
        }

        let mut children = vec![Vec::new(); n];
        for cpt in &cpts {
            for &p in &cpt.parents {
                children[p].push(cpt.child);
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }

        let topo = topo_sort(&variables, &cpts)?;

        Ok(Self {
            name: name.into(),
            variables,
            cpts,
            children,
            topo,
            by_name,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id]
    }

    pub fn cardinality(&self, id: VarId) -> usize {
        self.variables[id].states.len()
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn cpt(&self, id: VarId) -> &Cpt {
        &self.cpts[id]
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        &self.cpts[id].parents
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id]
    }

    pub fn find(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    /// Variables without parents, ascending by id.
    pub fn roots(&self) -> Vec<VarId> {
        (0..self.len()).filter(|&v| self.parents(v).is_empty()).collect()
    }

    /// Variables without children, ascending by id.
    pub fn leaves(&self) -> Vec<VarId> {
        (0..self.len()).filter(|&v| self.children(v).is_empty()).collect()
    }

    /// Topological order computed at construction (lowest id first among
    /// ready variables).
    pub fn topological_order(&self) -> &[VarId] {
        &self.topo
    }

    /// Row of `p(child | parents)` selected by a full parent configuration.
    pub fn cpt_row(&self, child: VarId, parent_states: impl IntoIterator<Item = usize>) -> &[f64] {
        let cpt = &self.cpts[child];
        let mut row = 0usize;
        for (&p, s) in cpt.parents.iter().zip(parent_states) {
            row = row * self.cardinality(p) + s;
        }
        let card = self.cardinality(child);
        &cpt.table[row * card..(row + 1) * card]
    }

    /// Total number of joint states, saturating at `usize::MAX`.
    pub fn joint_size(&self) -> usize {
        self.variables
            .iter()
            .fold(1usize, |acc, v| acc.saturating_mul(v.cardinality()))
    }
}

fn validate_cpt(variables: &[Variable], cpt: &Cpt) -> Result<(), ModelError> {
    let n = variables.len();
    let child = &variables[cpt.child];
    let mut seen = HashSet::new();
    let mut rows = 1usize;
    for &p in &cpt.parents {
        if p >= n {
            return Err(ModelError::UnknownVariable(p));
        }
        if !seen.insert(p) {
            return Err(ModelError::DuplicateParent {
                var: child.name.clone(),
                parent: variables[p].name.clone(),
            });
        }
        rows = rows.saturating_mul(variables[p].cardinality());
    }
    let card = child.cardinality();
    let expected = rows.saturating_mul(card);
    if cpt.table.len() != expected {
        return Err(ModelError::TableShape {
            var: child.name.clone(),
            expected,
            found: cpt.table.len(),
        });
    }
    for (row, chunk) in cpt.table.chunks(card).enumerate() {
        for &value in chunk {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::EntryOutOfRange {
                    var: child.name.clone(),
                    row,
                    value,
                });
            }
        }
        let sum: f64 = chunk.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(ModelError::RowSum {
                var: child.name.clone(),
                row,
                sum,
            });
        }
    }
    Ok(())
}

/// Kahn's algorithm with a min-heap of ready ids for a stable order.
fn topo_sort(variables: &[Variable], cpts: &[Cpt]) -> Result<Vec<VarId>, ModelError> {
    let n = variables.len();
    let mut indegree: Vec<usize> = cpts.iter().map(|c| c.parents.len()).collect();
    let mut children = vec![Vec::new(); n];
    for c in cpts {
        for &p in &c.parents {
            children[p].push(c.child);
        }
    }
    let mut ready: BTreeSet<VarId> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() < n {
        let on_cycle = find_cycle_member(cpts, &indegree);
        return Err(ModelError::Cycle(variables[on_cycle].name.clone()));
    }
    Ok(order)
}

/// Among variables left with positive indegree, walk parent edges until a
/// variable repeats; that variable lies on a cycle.
fn find_cycle_member(cpts: &[Cpt], indegree: &[usize]) -> VarId {
    let start = indegree.iter().position(|&d| d > 0).unwrap_or(0);
    let mut visited = HashSet::new();
    let mut v = start;
    while visited.insert(v) {
        match cpts[v].parents.iter().find(|&&p| indegree[p] > 0) {
            Some(&p) => v = p,
            None => break,
        }
    }
    v
}

/// Standalone form of [`BayesianNetwork::topological_order`].
pub fn topological_order(net: &BayesianNetwork) -> Vec<VarId> {
    net.topological_order().to_vec()
}

/// Partial or full mapping from variables to state indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bindings: BTreeMap<VarId, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, usize)>) -> Self {
        Self {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.bindings.get(&var).copied()
    }

    pub fn set(&mut self, var: VarId, state: usize) {
        self.bindings.insert(var, state);
    }

    pub fn remove(&mut self, var: VarId) -> Option<usize> {
        self.bindings.remove(&var)
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.bindings.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Bindings in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.bindings.iter().map(|(&v, &s)| (v, s))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.bindings.keys().copied()
    }

    pub fn is_full(&self, net: &BayesianNetwork) -> bool {
        self.len() == net.len() && self.vars().all(|v| v < net.len())
    }

    /// Union of two assignments; bindings in `other` win.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        out.bindings.extend(other.bindings.iter().map(|(&v, &s)| (v, s)));
        out
    }

    /// The bindings of `vars` only.
    pub fn restricted(&self, vars: &[VarId]) -> Assignment {
        Assignment::from_pairs(vars.iter().filter_map(|&v| self.get(v).map(|s| (v, s))))
    }

    pub fn validate(&self, net: &BayesianNetwork) -> Result<(), ModelError> {
        for (v, s) in self.iter() {
            if v >= net.len() {
                return Err(ModelError::UnknownId(v));
            }
            let card = net.cardinality(v);
            if s >= card {
                return Err(ModelError::StateOutOfRange {
                    var: net.variable(v).name.clone(),
                    state: s,
                    cardinality: card,
                });
            }
        }
        Ok(())
    }

    /// Renders `Name=state` pairs in ascending id order.
    pub fn display<'a>(&'a self, net: &'a BayesianNetwork) -> impl fmt::Display + 'a {
        DisplayAssignment { a: self, net }
    }
}

impl FromIterator<(VarId, usize)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (VarId, usize)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

struct DisplayAssignment<'a> {
    a: &'a Assignment,
    net: &'a BayesianNetwork,
}

impl fmt::Display for DisplayAssignment<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, s) in self.a.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let var = self.net.variable(v);
            write!(f, "{}={}", var.name, var.states[s])?;
        }
        Ok(())
    }
}

/// MAP query: find the most probable joint state of `map_vars` given
/// `evidence`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapProblem {
    map_vars: Vec<VarId>,
    evidence: Assignment,
}

impl MapProblem {
    pub fn new(
        net: &BayesianNetwork,
        map_vars: Vec<VarId>,
        evidence: Assignment,
    ) -> Result<Self, ModelError> {
        if map_vars.is_empty() {
            return Err(ModelError::EmptyMapSet);
        }
        let mut seen = HashSet::new();
        for &v in &map_vars {
            if v >= net.len() {
                return Err(ModelError::UnknownId(v));
            }
            if !seen.insert(v) {
                return Err(ModelError::DuplicateMapVariable(net.variable(v).name.clone()));
            }
            if evidence.contains(v) {
                return Err(ModelError::MapEvidenceOverlap(net.variable(v).name.clone()));
            }
        }
        evidence.validate(net)?;
        Ok(Self { map_vars, evidence })
    }

    pub fn map_vars(&self) -> &[VarId] {
        &self.map_vars
    }

    pub fn evidence(&self) -> &Assignment {
        &self.evidence
    }

    /// Number of joint MAP configurations, saturating.
    pub fn search_space(&self, net: &BayesianNetwork) -> usize {
        self.map_vars
            .iter()
            .fold(1usize, |acc, &v| acc.saturating_mul(net.cardinality(v)))
    }
}

/// `Σ_i ln p(z_i | pa(z_i))` for a full assignment; `-inf` when any factor
/// is zero.
pub fn joint_log_prob(net: &BayesianNetwork, full: &Assignment) -> Result<f64, ModelError> {
    full.validate(net)?;
    let mut states = Vec::with_capacity(net.len());
    for v in 0..net.len() {
        match full.get(v) {
            Some(s) => states.push(s),
            None => return Err(ModelError::Unbound(net.variable(v).name.clone())),
        }
    }
    let mut total = 0.0;
    for v in 0..net.len() {
        let row = net.cpt_row(v, net.parents(v).iter().map(|&p| states[p]));
        total += row[states[v]].ln();
    }
    Ok(total)
}

/// Iterator over every full extension of a partial assignment, in
/// lexicographic order of the unbound variables' states (lowest id most
/// significant).
pub fn complete<'a>(partial: &Assignment, net: &'a BayesianNetwork) -> Completions<'a> {
    let free: Vec<VarId> = (0..net.len()).filter(|&v| !partial.contains(v)).collect();
    Completions {
        net,
        base: partial.clone(),
        counter: vec![0; free.len()],
        free,
        done: false,
    }
}

pub struct Completions<'a> {
    net: &'a BayesianNetwork,
    base: Assignment,
    free: Vec<VarId>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for Completions<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let mut out = self.base.clone();
        for (&v, &s) in self.free.iter().zip(&self.counter) {
            out.set(v, s);
        }
        // odometer, last free variable fastest
        self.done = true;
        for i in (0..self.free.len()).rev() {
            self.counter[i] += 1;
            if self.counter[i] < self.net.cardinality(self.free[i]) {
                self.done = false;
                break;
            }
            self.counter[i] = 0;
        }
        Some(out)
    }
}
