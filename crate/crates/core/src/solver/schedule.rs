use super::SolverError;

/// Cooling, reheating and stopping parameters.
///
/// Defaults are `t0 = 0.99`, `alpha = 0.8`, `k = 0.1`, `wait = 10`,
/// `stop = 20`: reheat once after ten sweeps without improvement, stop
/// after twenty.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealSchedule {
    pub t0: f64,
    /// Geometric cooling rate. `1.0` pins the temperature (plain Gibbs
    /// sampling when `t0 = 1`).
    pub alpha: f64,
    /// Reheat constant multiplying the cost at reheat time.
    pub k: f64,
    /// Sweeps without improvement before each reheat.
    pub wait: u64,
    /// Sweeps without improvement before termination.
    pub stop: u64,
    pub t_min: f64,
    /// Hard cap on sweeps per restart.
    pub max_sweeps: Option<u64>,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            t0: 0.99,
            alpha: 0.8,
            k: 0.1,
            wait: 10,
            stop: 20,
            t_min: 1e-6,
            max_sweeps: None,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: &str| Err(SolverError::Schedule(msg.to_string()));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t0 && self.t0 <= 1.0) {
            return bad("temperatures must satisfy 0 < t_min <= t0 <= 1");
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return bad("k must be finite and nonnegative");
        }
        if !(self.wait > 0 && self.wait <= self.stop) {
            return bad("wait and stop must satisfy 0 < wait <= stop");
        }
        if self.max_sweeps == Some(0) {
            return bad("max_sweeps must be positive");
        }
        Ok(())
    }

    /// Schedule that never cools, reheats or stops on its own.
    pub fn gibbs(sweeps: u64) -> Self {
        Self {
            t0: 1.0,
            alpha: 1.0,
            k: 0.0,
            wait: u64::MAX,
            stop: u64::MAX,
            t_min: 1e-6,
            max_sweeps: Some(sweeps),
        }
    }
}

/// Metropolis acceptance for a candidate drawn from the untempered
/// single-variable conditional while targeting `p^{1/t}`:
/// `min{1, exp((1/t - 1)(logp_new - logp_old))}`.
pub fn acceptance_probability(t: f64, logp_new: f64, logp_old: f64) -> Result<f64, SolverError> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(SolverError::Contract(format!("temperature {t} outside (0, 1]")));
    }
    if logp_old == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    if logp_new == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let exponent = (1.0 / t - 1.0) * (logp_new - logp_old);
    Ok(exponent.exp().min(1.0))
}

/// `max(alpha * t, t_min)`.
pub fn geometric_cool(t: f64, alpha: f64, t_min: f64) -> f64 {
    (alpha * t).max(t_min)
}

/// Population variance of `costs` divided by `t^2`.
pub fn specific_heat(costs: &[f64], t: f64) -> Result<f64, SolverError> {
    if costs.is_empty() {
        return Err(SolverError::Contract(
            "specific heat of an empty cost sample".into(),
        ));
    }
    if t <= 0.0 {
        return Err(SolverError::Contract(format!("temperature {t} must be positive")));
    }
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / n;
    let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
    Ok(var / (t * t))
}

/// `min(t0, k * c_b + t_at_max_ch)`.
pub fn reheat_temperature(c_b: f64, t_at_max_ch: f64, k: f64, t0: f64) -> f64 {
    (k * c_b + t_at_max_ch).min(t0)
}
