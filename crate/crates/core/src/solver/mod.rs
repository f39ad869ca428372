//! Annealed MAP search, its schedule arithmetic, an exhaustive oracle, and
//! a hill-climbing baseline.

mod anneal;
mod hill;
mod oracle;
mod prepared;
mod schedule;

use thiserror::Error;

pub use anneal::{
    annealed_map, annealed_map_with, sequential_init, sequential_init_prepared, AnnealOptions, AnnealState,
    Annealer, SweepRecord,
};
pub use hill::hill_climb_map;
pub use oracle::{brute_force_map, brute_force_map_capped, DEFAULT_ORACLE_CAP};
pub use prepared::PreparedProblem;
pub use schedule::{
    acceptance_probability, geometric_cool, reheat_temperature, specific_heat, AnnealSchedule,
};

use crate::engine::EngineError;
use crate::model::Assignment;

/// A best-value increase at or below this does not count as improvement.
pub const IMPROVEMENT_EPSILON: f64 = 1e-12;
/// Allowed gap between tracked and recomputed `ln p(x | E)`.
pub const TRACKING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("inconsistent evidence: p(E) = 0")]
    InconsistentEvidence,
    #[error("MAP search space of {size} configurations exceeds the oracle cap of {cap}")]
    OracleCap { size: usize, cap: usize },
    #[error("tracked log-probability {tracked} drifted from exact value {exact}")]
    TrackingDrift { tracked: f64, exact: f64 },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("{0}")]
    Contract(String),
    #[error(transparent)]
    Engine(EngineError),
}

impl From<EngineError> for SolverError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InconsistentEvidence => SolverError::InconsistentEvidence,
            other => SolverError::Engine(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub best: Assignment,
    /// Exact `ln p(best | E)`.
    pub logp: f64,
    pub sweeps: u64,
    pub reheats: u64,
    /// Cumulative sweep index of the last improvement of the reported best.
    pub best_found_sweep: u64,
    pub restarts: u32,
    pub trace: Option<Vec<SweepRecord>>,
    /// Largest gap seen between tracked and exact log-probabilities.
    pub max_tracking_error: f64,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn prob(&self) -> f64 {
        self.logp.exp()
    }

    pub fn log10_prob(&self) -> f64 {
        self.logp / std::f64::consts::LN_10
    }
}
