//! Fitting Heston parameters to option quotes.
//!
//! [`calibrate`] minimizes [`sse_objective`] with Cuckoo Search over the box
//! `(sqrt_v0, sigma, kappa, theta, rho)`. Monte Carlo quotes are priced with
//! one fixed seed throughout a run (common random numbers), so the objective
//! is a deterministic function of the parameters.

mod dataset;
mod experiments;
mod objective;
mod presets;

pub use dataset::{generate_dataset, DatasetSpec, GridAxis};
pub use experiments::{
    nest_count_experiment, price_count_experiment, subsample_indices, ExperimentSetup,
    NestCountRun, PriceCountRun,
};
pub use objective::{model_prices, sse_objective};
pub use presets::{parameter_set, parameter_set_by_name, BoundsPreset};

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cuckoo::{optimize, CuckooConfig, CuckooError, SearchSpace, TraceRecord};
use crate::heston::{HestonParams, ParamError, QuoteError, QuoteSet};
use crate::pricing::{PricerConfig, PricingError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("invalid calibration setup: {0}")]
    InvalidProblem(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Quote(#[from] QuoteError),
    #[error(transparent)]
    Config(PricingError),
    #[error("pricing failed at strike {strike}, maturity {maturity}: {source}")]
    Pricing {
        strike: f64,
        maturity: f64,
        source: PricingError,
    },
    #[error(transparent)]
    Optimizer(#[from] CuckooError),
    #[error("no finite objective value was found in the search box")]
    NoFeasiblePoint,
}

impl CalibrationError {
    pub(crate) fn pricing<T: Real>(strike: T, maturity: T, source: PricingError) -> Self {
        Self::Pricing {
            strike: strike.as_f64(),
            maturity: maturity.as_f64(),
            source,
        }
    }
}

/// Everything one calibration run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProblem<T> {
    pub quotes: QuoteSet<T>,
    /// Box over `(sqrt_v0, sigma, kappa, theta, rho)`.
    pub space: SearchSpace<T>,
    /// Monte Carlo settings and seed shared by every objective evaluation.
    pub pricer: PricerConfig,
    pub cuckoo: CuckooConfig<T>,
}

impl<T: Real> CalibrationProblem<T> {
    pub fn new(
        quotes: QuoteSet<T>,
        space: SearchSpace<T>,
        pricer: PricerConfig,
        cuckoo: CuckooConfig<T>,
    ) -> Result<Self, CalibrationError> {
        let problem = Self {
            quotes,
            space,
            pricer,
            cuckoo,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        if self.space.dim() != 5 {
            return Err(CalibrationError::InvalidProblem(format!(
                "search space must have 5 coordinates, has {}",
                self.space.dim()
            )));
        }
        self.pricer.validate().map_err(CalibrationError::Config)?;
        self.cuckoo.validate()?;
        Ok(())
    }

    /// Objective at optimizer coordinates; `NaN` where the point is not a
    /// valid parameter set or pricing fails.
    pub fn objective_at(&self, x: &[T]) -> T {
        HestonParams::from_coordinates(x)
            .map_err(CalibrationError::from)
            .and_then(|p| sse_objective(&p, &self.quotes, &self.pricer))
            .unwrap_or_else(|_| T::nan())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult<T> {
    pub best: HestonParams<T>,
    /// Objective recomputed at `best`.
    pub objective: T,
    pub trace: Vec<TraceRecord<T>>,
    pub n_objective_evaluations: usize,
    /// Objective evaluations times quotes priced per evaluation.
    pub n_price_evaluations: usize,
    pub wall_time: Duration,
}

impl<T: Real> CalibrationResult<T> {
    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |r| r.iteration)
    }

    /// First iteration whose best fitness is at or below `level`.
    pub fn iterations_to(&self, level: T) -> Option<usize> {
        self.trace
            .iter()
            .find(|r| r.best_fitness <= level)
            .map(|r| r.iteration)
    }
}

/// Runs Cuckoo Search on the problem's objective.
pub fn calibrate<T: Real>(
    problem: &CalibrationProblem<T>,
) -> Result<CalibrationResult<T>, CalibrationError> {
    problem.validate()?;
    let start = Instant::now();
    let outcome = optimize(|x| problem.objective_at(x), &problem.space, &problem.cuckoo)?;
    if !outcome.best.fitness.is_finite() {
        return Err(CalibrationError::NoFeasiblePoint);
    }
    let best = HestonParams::from_coordinates(&outcome.best.position)?;
    let objective = sse_objective(&best, &problem.quotes, &problem.pricer)?;
    let n_evals = outcome.n_evals();
    Ok(CalibrationResult {
        best,
        objective,
        trace: outcome.trace,
        n_objective_evaluations: n_evals,
        n_price_evaluations: n_evals * problem.quotes.len(),
        wall_time: start.elapsed(),
    })
}
