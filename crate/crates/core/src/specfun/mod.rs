//! Special functions: reciprocal Gamma, Wright, Mittag-Leffler, Airy and
//! modified Bessel functions of the second kind.

mod airy;
mod bessel;
mod gamma;
mod mittag_leffler;
mod wright;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use airy::{airy_ai, airy_ai_with_derivative};
pub use bessel::{bessel_i, bessel_k, bessel_k_quarter, bessel_k_scaled};
pub use gamma::{gamma, ln_gamma, ln_reciprocal_gamma, reciprocal_gamma, sin_pi};
pub use mittag_leffler::mittag_leffler;
pub use wright::wright;

/// Truncation policy for power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub min_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-14, max_terms: 400, min_terms: 8 }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, min_terms: usize) -> Result<Self> {
        let ctl = Self { rel_tol, max_terms, min_terms };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParams(format!("series rel_tol must lie in (0,1), got {}", self.rel_tol)));
        }
        if self.min_terms > self.max_terms {
            return Err(Error::InvalidParams(format!(
                "min_terms ({}) exceeds max_terms ({})",
                self.min_terms, self.max_terms
            )));
        }
        Ok(())
    }
}
