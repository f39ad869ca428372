//! Fixture networks and seeded random generators used by tests and
//! benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Assignment, BayesianNetwork, Cpt, MapProblem, Variable};

pub fn binary_var(name: &str) -> Variable {
    Variable {
        id: 0,
        name: name.into(),
        states: vec!["t".into(), "f".into()],
    }
}

/// Rain → Sprinkler, {Sprinkler, Rain} → WetGrass; states `{t, f}`.
/// Ids: Rain = 0, Sprinkler = 1, WetGrass = 2.
pub fn sprinkler() -> BayesianNetwork {
    BayesianNetwork::new(
        "sprinkler",
        vec![
            binary_var("Rain"),
            binary_var("Sprinkler"),
            binary_var("WetGrass"),
        ],
        vec![
            Cpt::new(0, vec![], vec![0.2, 0.8]),
            Cpt::new(1, vec![0], vec![0.01, 0.99, 0.4, 0.6]),
            Cpt::new(2, vec![1, 0], vec![0.99, 0.01, 0.9, 0.1, 0.8, 0.2, 0.0, 1.0]),
        ],
    )
    .expect("fixture is valid")
}

pub const SPRINKLER_BNET: &str = "\
# classic sprinkler network
network sprinkler

var Rain { t, f }
var Sprinkler { t, f }
var WetGrass { t, f }

cpt Rain { 0.2 0.8 }
cpt Sprinkler | Rain { 0.01 0.99; 0.4 0.6 }
cpt WetGrass | Sprinkler Rain {
  0.99 0.01;
  0.9 0.1;
  0.8 0.2;
  0.0 1.0
}
";

/// `V0 → V1 → … `, every child a copy of its parent; the root is fixed
/// to state 0.
pub fn deterministic_chain(len: usize) -> BayesianNetwork {
    let vars = (0..len).map(|i| binary_var(&format!("V{i}"))).collect();
    let cpts = (0..len)
        .map(|i| {
            if i == 0 {
                Cpt::new(0, vec![], vec![1.0, 0.0])
            } else {
                Cpt::new(i, vec![i - 1], vec![1.0, 0.0, 0.0, 1.0])
            }
        })
        .collect();
    BayesianNetwork::new("chain", vars, cpts).expect("fixture is valid")
}

/// Two uniform binary roots `A`, `B` with an observed child `C`.
///
/// Given `C = t` the posterior over `(A, B)` is proportional to
/// `(0,0): 0.35, (0,1): 0.25, (1,0): 0.02, (1,1): 0.45`. Sequential
/// initialization picks `A = 0` (marginal 0.60 vs 0.47) and then `B = 0`,
/// which is a strict local maximum under single-variable moves; the
/// global maximum is `(1,1)`.
pub fn local_optimum_trap() -> (BayesianNetwork, MapProblem) {
    let net = BayesianNetwork::new(
        "trap",
        vec![binary_var("A"), binary_var("B"), binary_var("C")],
        vec![
            Cpt::new(0, vec![], vec![0.5, 0.5]),
            Cpt::new(1, vec![], vec![0.5, 0.5]),
            Cpt::new(
                2,
                vec![0, 1],
                vec![0.35, 0.65, 0.25, 0.75, 0.02, 0.98, 0.45, 0.55],
            ),
        ],
    )
    .expect("fixture is valid");
    let problem =
        MapProblem::new(&net, vec![0, 1], Assignment::from_pairs([(2, 0)])).expect("fixture is valid");
    (net, problem)
}

#[derive(Debug, Clone)]
pub struct RandomNetworkSpec {
    pub min_vars: usize,
    pub max_vars: usize,
    pub min_states: usize,
    pub max_states: usize,
    pub max_parents: usize,
    /// Chance that a CPT entry is forced to zero (rows keep at least one
    /// positive entry).
    pub zero_prob: f64,
}

impl Default for RandomNetworkSpec {
    fn default() -> Self {
        Self {
            min_vars: 8,
            max_vars: 12,
            min_states: 2,
            max_states: 3,
            max_parents: 2,
            zero_prob: 0.0,
        }
    }
}

/// Random DAG with random CPTs. Variables are created in a random
/// topological position so ids do not follow the DAG order.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, spec: &RandomNetworkSpec) -> BayesianNetwork {
    let n = rng.gen_range(spec.min_vars..=spec.max_vars);
    // position -> id
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let cards: Vec<usize> = (0..n)
        .map(|_| rng.gen_range(spec.min_states..=spec.max_states))
        .collect();
    let variables: Vec<Variable> = (0..n)
        .map(|id| Variable {
            id,
            name: format!("V{id}"),
            states: (0..cards[id]).map(|s| format!("s{s}")).collect(),
        })
        .collect();
    let mut cpts = Vec::with_capacity(n);
    for pos in 0..n {
        let child = ids[pos];
        let k = rng.gen_range(0..=spec.max_parents.min(pos));
        let mut parents: Vec<usize> = ids[..pos].choose_multiple(rng, k).copied().collect();
        parents.shuffle(rng);
        let rows: usize = parents.iter().map(|&p| cards[p]).product();
        let mut table = Vec::with_capacity(rows * cards[child]);
        for _ in 0..rows {
            table.extend(random_row(rng, cards[child], spec.zero_prob));
        }
        cpts.push(Cpt::new(child, parents, table));
    }
    BayesianNetwork::new("random", variables, cpts).expect("generated network is valid")
}

pub fn random_row<R: Rng + ?Sized>(rng: &mut R, card: usize, zero_prob: f64) -> Vec<f64> {
    let mut row: Vec<f64> = (0..card)
        .map(|_| {
            if zero_prob > 0.0 && rng.gen_bool(zero_prob) {
                0.0
            } else {
                rng.gen_range(0.01..1.0)
            }
        })
        .collect();
    if row.iter().all(|&x| x == 0.0) {
        let i = rng.gen_range(0..card);
        row[i] = 1.0;
    }
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x /= total);
    row
}

/// Two-layer network: `roots` binary roots feeding `leaves` binary leaves,
/// each leaf with between one and `max_parents` distinct root parents.
pub fn bipartite_network<R: Rng + ?Sized>(
    rng: &mut R,
    roots: usize,
    leaves: usize,
    max_parents: usize,
) -> BayesianNetwork {
    let mut variables: Vec<Variable> = (0..roots).map(|i| binary_var(&format!("R{i}"))).collect();
    variables.extend((0..leaves).map(|i| binary_var(&format!("L{i}"))));
    let mut cpts: Vec<Cpt> = (0..roots)
        .map(|i| Cpt::new(i, vec![], random_row(rng, 2, 0.0)))
        .collect();
    let all_roots: Vec<usize> = (0..roots).collect();
    for j in 0..leaves {
        let k = rng.gen_range(1..=max_parents.min(roots));
        let mut parents: Vec<usize> = all_roots.choose_multiple(rng, k).copied().collect();
        parents.sort_unstable();
        let rows = 1usize << parents.len();
        let table = (0..rows).flat_map(|_| random_row(rng, 2, 0.0)).collect();
        cpts.push(Cpt::new(roots + j, parents, table));
    }
    BayesianNetwork::new("bipartite", variables, cpts).expect("generated network is valid")
}
