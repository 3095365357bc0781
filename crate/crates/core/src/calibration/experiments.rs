//! The nest-count and price-count convergence experiments.

use super::{
    calibrate, generate_dataset, CalibrationError, CalibrationProblem, CalibrationResult,
    DatasetSpec,
};
use crate::cuckoo::{CuckooConfig, SearchSpace};
use crate::heston::{HestonParams, QuoteSet};
use crate::scalar::Real;

/// Dataset, box and optimizer settings shared by every run of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSetup<T> {
    pub dataset: DatasetSpec<T>,
    pub space: SearchSpace<T>,
    pub cuckoo: CuckooConfig<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestCountRun<T> {
    pub n_nests: usize,
    pub result: CalibrationResult<T>,
}

/// Calibrates `problem` once per nest count, all else equal.
pub fn nest_count_experiment<T: Real>(
    problem: &CalibrationProblem<T>,
    nest_counts: &[usize],
) -> Result<Vec<NestCountRun<T>>, CalibrationError> {
    nest_counts
        .iter()
        .map(|&n| {
            let mut p = problem.clone();
            p.cuckoo.n_nests = n;
            Ok(NestCountRun {
                n_nests: n,
                result: calibrate(&p)?,
            })
        })
        .collect()
}

/// `count` indices spread evenly over `0..len`, endpoints included. A single
/// index picks the middle of the range.
pub fn subsample_indices(len: usize, count: usize) -> Result<Vec<usize>, CalibrationError> {
    if count == 0 || count > len {
        return Err(CalibrationError::InvalidProblem(format!(
            "cannot pick {count} of {len} quotes"
        )));
    }
    if count == 1 {
        return Ok(vec![len / 2]);
    }
    let span = (len - 1) as f64 / (count - 1) as f64;
    Ok((0..count)
        .map(|i| (i as f64 * span).round() as usize)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceCountRun<T> {
    pub n_prices: usize,
    pub quotes: QuoteSet<T>,
    pub result: CalibrationResult<T>,
}

/// Calibrates against evenly spaced subsets of a single-maturity grid.
///
/// The full grid is priced once at `truth` for `maturity`; each run keeps
/// `count` of its quotes.
pub fn price_count_experiment<T: Real>(
    truth: &HestonParams<T>,
    counts: &[usize],
    maturity: T,
    setup: &ExperimentSetup<T>,
) -> Result<Vec<PriceCountRun<T>>, CalibrationError> {
    let spec = DatasetSpec {
        maturities: vec![maturity],
        ..setup.dataset.clone()
    };
    let full = generate_dataset(truth, &spec)?;
    counts
        .iter()
        .map(|&count| {
            let picked = subsample_indices(full.len(), count)?
                .into_iter()
                .map(|i| full.quotes()[i])
                .collect();
            let quotes = QuoteSet::new(format!("{} ({count} prices)", full.label()), picked)?;
            let problem = CalibrationProblem::new(
                quotes.clone(),
                setup.space.clone(),
                spec.pricer,
                setup.cuckoo.clone(),
            )?;
            Ok(PriceCountRun {
                n_prices: count,
                quotes,
                result: calibrate(&problem)?,
            })
        })
        .collect()
}
