use crate::{MemadError, Result};

pub const ALPHA_MAX: f64 = 256.0;
pub const BETA_MAX: f64 = 8.0;
pub const ORDER_MAX: usize = 32;

/// Tunable knobs of the filter.
///
/// `alpha` scales the high-pass (difference) term, `beta` dims the
/// passthrough image and `order` is the moving-average window length `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    pub alpha: f64,
    pub beta: f64,
    pub order: usize,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            alpha: 16.0,
            beta: 1.0,
            order: 5,
        }
    }
}

impl FilterParams {
    pub fn new(alpha: f64, beta: f64, order: usize) -> Result<Self> {
        let params = Self { alpha, beta, order };
        params.validate()?;
        Ok(params)
    }

    /// Identity configuration: `alpha = 0`, `beta = 1`.
    pub fn identity(order: usize) -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
            order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // NaN fails both range checks.
        if !(0.0..=ALPHA_MAX).contains(&self.alpha) {
            return Err(MemadError::InvalidParams(format!(
                "alpha {} outside [0, {ALPHA_MAX}]",
                self.alpha
            )));
        }
        if !(0.0..=BETA_MAX).contains(&self.beta) {
            return Err(MemadError::InvalidParams(format!(
                "beta {} outside [0, {BETA_MAX}]",
                self.beta
            )));
        }
        if !(1..=ORDER_MAX).contains(&self.order) {
            return Err(MemadError::InvalidParams(format!(
                "order {} outside [1, {ORDER_MAX}]",
                self.order
            )));
        }
        Ok(())
    }
}
