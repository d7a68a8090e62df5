use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-distance path-loss model with one exponent per link class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathLossParams {
    /// Path loss at the reference distance, dB.
    pub beta0_db: f64,
    pub d0_m: f64,
    pub alpha_ub: f64,
    pub alpha_ui: f64,
    pub alpha_ib: f64,
    pub alpha_ii: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            beta0_db: -30.0,
            d0_m: 1.0,
            alpha_ub: 3.75,
            alpha_ui: 2.2,
            alpha_ib: 1.0,
            alpha_ii: 2.0,
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d0_m > 0.0) || !self.beta0_db.is_finite() {
            return Err(Error::invalid("path loss needs d0 > 0 and finite beta0"));
        }
        let alphas = [self.alpha_ub, self.alpha_ui, self.alpha_ib, self.alpha_ii];
        if alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::invalid("path-loss exponents must be positive"));
        }
        Ok(())
    }
}

/// `β₀ − 10·α·log₁₀(d/d₀)` in dB; distances below `d₀` are clamped to `d₀`.
pub fn path_loss_db(distance_m: f64, alpha: f64, params: &PathLossParams) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::invalid(format!("path loss distance {distance_m} must be > 0")));
    }
    let d = distance_m.max(params.d0_m);
    Ok(params.beta0_db - 10.0 * alpha * (d / params.d0_m).log10())
}
