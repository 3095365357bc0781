//! Option pricing under the Heston model.
//!
//! * [`price_european_put_cf`] integrates the characteristic function and is
//!   the semi-analytic reference.
//! * [`price_american_put_lsmc`] runs Longstaff–Schwartz regression over
//!   full-truncation Euler paths produced by [`simulate_paths`].
//! * [`bs_put`] and [`crr_american_put`] are constant-volatility oracles used
//!   to check both pricers in the vanishing vol-of-vol limit.
//!
//! Monte Carlo pricing is a pure function of its inputs and the seed in
//! [`PricerConfig`]: the same call always returns bit-identical results.

mod cf;
mod lsmc;
mod paths;
mod quadrature;
mod reference;
mod regression;

pub use cf::{
    price_european_call_cf, price_european_calls_cf, price_european_put_cf, price_european_puts_cf,
};
pub use lsmc::{price_american_put_lsmc, price_american_puts_lsmc, LsmcEstimate};
pub use paths::{simulate_paths, PathGrid};
pub use quadrature::{integrate_adaptive, QuadratureError};
pub use reference::{bs_call, bs_put, crr_american_put};
pub use regression::{basis_size, evaluate_basis};

use thiserror::Error;

use crate::heston::ParamError;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("invalid pricer configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(#[from] ParamError),
    #[error("invalid instrument: {0}")]
    InvalidInput(String),
    #[error("characteristic-function quadrature did not converge: {0}")]
    Quadrature(#[from] QuadratureError),
}

/// Monte Carlo settings for the Longstaff–Schwartz pricer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PricerConfig {
    /// Total simulated paths; must be even.
    pub n_paths: usize,
    /// Time steps (and exercise dates) per year; a maturity `T` uses
    /// `ceil(T * n_steps_per_year)` steps.
    pub n_steps_per_year: usize,
    pub seed: u64,
    /// Total degree of the monomial regression basis in `(S/K, V)`.
    pub basis_degree: usize,
    /// Pair each path with its negated-shock twin.
    pub antithetic: bool,
}

impl Default for PricerConfig {
    fn default() -> Self {
        Self {
            n_paths: 20_000,
            n_steps_per_year: 100,
            seed: 0,
            basis_degree: 2,
            antithetic: true,
        }
    }
}

impl PricerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), PricingError> {
        if self.n_paths == 0 || !self.n_paths.is_multiple_of(2) {
            return Err(PricingError::InvalidConfig(format!(
                "n_paths must be positive and even, got {}",
                self.n_paths
            )));
        }
        if self.n_steps_per_year < 12 {
            return Err(PricingError::InvalidConfig(format!(
                "n_steps_per_year must be at least 12, got {}",
                self.n_steps_per_year
            )));
        }
        if !(1..=3).contains(&self.basis_degree) {
            return Err(PricingError::InvalidConfig(format!(
                "basis_degree must be 1, 2 or 3, got {}",
                self.basis_degree
            )));
        }
        Ok(())
    }

    /// Number of time steps used for maturity `t`.
    pub fn steps_for<T: Real>(&self, t: T) -> usize {
        let raw = t.as_f64() * self.n_steps_per_year as f64;
        // Absorb rounding in products such as (1/12) * 12, also for f32 inputs.
        let steps = (raw * (1.0 - 1e-6)).ceil();
        (steps as usize).max(1)
    }
}

pub(crate) fn check_positive<T: Real>(name: &str, x: T) -> Result<(), PricingError> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(PricingError::InvalidInput(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

pub(crate) fn check_finite<T: Real>(name: &str, x: T) -> Result<(), PricingError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(PricingError::InvalidInput(format!("{name} must be finite")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(PricerConfig::default().validate().is_ok());
        let odd = PricerConfig {
            n_paths: 101,
            ..Default::default()
        };
        assert!(odd.validate().is_err());
        let coarse = PricerConfig {
            n_steps_per_year: 11,
            ..Default::default()
        };
        assert!(coarse.validate().is_err());
        for degree in [0, 4] {
            let cfg = PricerConfig {
                basis_degree: degree,
                ..Default::default()
            };
            assert!(cfg.validate().is_err());
        }
    }

    #[test]
    fn step_counts() {
        let cfg = PricerConfig::default();
        assert_eq!(cfg.steps_for(1.0 / 12.0), 9);
        assert_eq!(cfg.steps_for(0.25), 25);
        assert_eq!(cfg.steps_for(0.5), 50);
        assert_eq!(cfg.steps_for(1.0), 100);
        assert_eq!(cfg.steps_for(1e-6), 1);
        let monthly = PricerConfig {
            n_steps_per_year: 12,
            ..Default::default()
        };
        assert_eq!(monthly.steps_for(1.0 / 12.0), 1);
        assert_eq!(monthly.steps_for(1.0f32 / 12.0), 1);
    }
}
