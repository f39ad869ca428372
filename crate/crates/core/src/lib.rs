//! MAP inference for discrete Bayesian networks by simulated annealing
//! over a Gibbs chain whose single-variable conditionals come from exact
//! variable elimination.
//!
//! ```
//! use amap_core::io::{parse_network, parse_problem};
//! use amap_core::solver::{annealed_map, brute_force_map, AnnealSchedule};
//! use amap_core::synth::SPRINKLER_BNET;
//! use rand::SeedableRng;
//!
//! let net = parse_network(SPRINKLER_BNET).unwrap();
//! let problem = parse_problem("map Sprinkler Rain\nevidence WetGrass=t", &net).unwrap();
//! let mut rng = rand::rngs::StdRng::seed_from_u64(7);
//! let found = annealed_map(&net, &problem, &AnnealSchedule::default(), &mut rng, 1).unwrap();
//! let exact = brute_force_map(&net, &problem).unwrap();
//! assert_eq!(found.best, exact.best);
//! ```

pub mod engine;
pub mod io;
pub mod model;
pub mod solver;
pub mod synth;

pub use model::{Assignment, BayesianNetwork, MapProblem, VarId};
