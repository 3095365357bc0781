//! Heston stochastic-volatility calibration with Cuckoo Search.
//!
//! * [`heston`]: parameters, quotes and their invariants.
//! * [`pricing`]: characteristic-function European prices and
//!   Longstaff–Schwartz American puts.
//! * [`cuckoo`]: a box-constrained Cuckoo Search optimizer.
//! * [`calibration`]: synthetic datasets, the squared-error objective and the
//!   calibration driver.
//!
//! Every numerical routine is generic over [`Real`] (`f64` or `f32`); the
//! aliases below fix the scalar for the common cases.
//!
//! ```
//! use heston_calib::{calibration, pricing, HestonParams64};
//!
//! let p: HestonParams64 = calibration::parameter_set(1).unwrap();
//! let put = pricing::price_european_put_cf(&p, 100.0, 100.0, 0.05, 1.0).unwrap();
//! assert!(put > 0.0 && put < 100.0);
//! ```

pub mod calibration;
pub mod cuckoo;
pub mod heston;
pub mod pricing;
pub mod scalar;

pub use calibration::{
    calibrate, generate_dataset, sse_objective, BoundsPreset, CalibrationError, CalibrationProblem,
    CalibrationResult, DatasetSpec, GridAxis,
};
pub use cuckoo::{
    optimize, CuckooConfig, CuckooError, Nest, SearchOutcome, SearchSpace, TraceRecord,
};
pub use heston::{
    validate_params, ExerciseStyle, HestonParams, OptionKind, OptionQuote, ParamError, QuoteError,
    QuoteSet,
};
pub use pricing::{LsmcEstimate, PathGrid, PricerConfig, PricingError};
pub use scalar::Real;

pub type HestonParams64 = HestonParams<f64>;
pub type HestonParams32 = HestonParams<f32>;
pub type OptionQuote64 = OptionQuote<f64>;
pub type OptionQuote32 = OptionQuote<f32>;
pub type QuoteSet64 = QuoteSet<f64>;
pub type QuoteSet32 = QuoteSet<f32>;
pub type SearchSpace64 = SearchSpace<f64>;
pub type SearchSpace32 = SearchSpace<f32>;
pub type CuckooConfig64 = CuckooConfig<f64>;
pub type CuckooConfig32 = CuckooConfig<f32>;
pub type DatasetSpec64 = DatasetSpec<f64>;
pub type DatasetSpec32 = DatasetSpec<f32>;
pub type CalibrationProblem64 = CalibrationProblem<f64>;
pub type CalibrationProblem32 = CalibrationProblem<f32>;
pub type CalibrationResult64 = CalibrationResult<f64>;
pub type CalibrationResult32 = CalibrationResult<f32>;
