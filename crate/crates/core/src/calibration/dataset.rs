//! Synthetic quote grids priced at known parameters.

use super::CalibrationError;
use crate::heston::{ExerciseStyle, HestonParams, OptionKind, OptionQuote, QuoteSet};
use crate::pricing::{price_american_puts_lsmc, price_european_put_cf, PricerConfig};
use crate::scalar::Real;

/// Which of spot and strike runs over the grid; the other is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridAxis {
    Strike,
    Spot,
}

/// Describes a put grid: one quote per (maturity, grid value).
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec<T> {
    pub fixed_price: T,
    pub grid_min: T,
    pub grid_max: T,
    pub grid_step: T,
    pub vary: GridAxis,
    pub rate: T,
    pub maturities: Vec<T>,
    pub style: ExerciseStyle,
    /// Used for American quotes only.
    pub pricer: PricerConfig,
}

impl<T: Real> Default for DatasetSpec<T> {
    /// 21 strikes from 80 to 120 around a spot of 100, four maturities, 84
    /// American puts.
    fn default() -> Self {
        Self {
            fixed_price: T::lit(100.0),
            grid_min: T::lit(80.0),
            grid_max: T::lit(120.0),
            grid_step: T::lit(2.0),
            vary: GridAxis::Strike,
            rate: T::lit(0.05),
            maturities: [1.0 / 12.0, 0.25, 0.5, 1.0].map(T::lit).to_vec(),
            style: ExerciseStyle::American,
            pricer: PricerConfig::default(),
        }
    }
}

impl<T: Real> DatasetSpec<T> {
    /// The grid values in ascending order.
    pub fn grid(&self) -> Result<Vec<T>, CalibrationError> {
        let bad = |msg: String| Err(CalibrationError::InvalidProblem(msg));
        let (lo, hi, step) = (self.grid_min, self.grid_max, self.grid_step);
        if !(lo > T::zero() && lo.is_finite() && hi.is_finite()) {
            return bad(format!(
                "grid bounds must be positive and finite, got [{lo}, {hi}]"
            ));
        }
        if hi < lo {
            return bad(format!("grid_max {hi} is below grid_min {lo}"));
        }
        if !(step > T::zero() && step.is_finite()) {
            return bad(format!("grid_step must be positive, got {step}"));
        }
        // Tolerate ranges that are a whole number of steps up to rounding.
        let n = ((hi - lo) / step + T::lit(1e-6))
            .floor()
            .to_usize()
            .unwrap_or(0)
            + 1;
        Ok((0..n).map(|i| lo + step * T::from_count(i)).collect())
    }

    fn sorted_maturities(&self) -> Result<Vec<T>, CalibrationError> {
        if self.maturities.is_empty() {
            return Err(CalibrationError::InvalidProblem(
                "no maturities given".into(),
            ));
        }
        let mut m = self.maturities.clone();
        if let Some(bad) = m.iter().find(|t| !(**t > T::zero() && t.is_finite())) {
            return Err(CalibrationError::InvalidProblem(format!(
                "maturities must be positive, got {bad}"
            )));
        }
        m.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(m)
    }

    fn pair(&self, value: T) -> (T, T) {
        match self.vary {
            GridAxis::Strike => (self.fixed_price, value),
            GridAxis::Spot => (value, self.fixed_price),
        }
    }
}

/// Prices every grid point at `truth`.
///
/// Quotes are ordered by maturity, then by grid value, and carry exact model
/// prices. European quotes come from the characteristic-function pricer,
/// one call per quote; American quotes from Longstaff–Schwartz with
/// `spec.pricer`.
pub fn generate_dataset<T: Real>(
    truth: &HestonParams<T>,
    spec: &DatasetSpec<T>,
) -> Result<QuoteSet<T>, CalibrationError> {
    truth.validate()?;
    if !(spec.fixed_price > T::zero() && spec.fixed_price.is_finite()) {
        return Err(CalibrationError::InvalidProblem(format!(
            "fixed_price must be positive, got {}",
            spec.fixed_price
        )));
    }
    if !spec.rate.is_finite() {
        return Err(CalibrationError::InvalidProblem(
            "rate must be finite".into(),
        ));
    }
    if spec.style == ExerciseStyle::American {
        spec.pricer.validate().map_err(CalibrationError::Config)?;
    }
    let grid = spec.grid()?;
    let pairs: Vec<(T, T)> = grid.iter().map(|&g| spec.pair(g)).collect();
    let mut quotes = Vec::with_capacity(pairs.len() * spec.maturities.len());

    for t in spec.sorted_maturities()? {
        let prices: Vec<T> = match spec.style {
            ExerciseStyle::European => pairs
                .iter()
                .map(|&(s, k)| {
                    price_european_put_cf(truth, s, k, spec.rate, t)
                        .map_err(|e| CalibrationError::pricing(k, t, e))
                })
                .collect::<Result<_, _>>()?,
            ExerciseStyle::American => {
                price_american_puts_lsmc(truth, &pairs, spec.rate, t, &spec.pricer)
                    .map_err(|e| CalibrationError::pricing(pairs[0].1, t, e))?
                    .into_iter()
                    .map(|est| est.price)
                    .collect()
            }
        };
        quotes.extend(
            pairs
                .iter()
                .zip(prices)
                .map(|(&(spot, strike), price)| OptionQuote {
                    spot,
                    strike,
                    maturity: t,
                    rate: spec.rate,
                    style: spec.style,
                    kind: OptionKind::Put,
                    price,
                }),
        );
    }
    let label = format!("synthetic {} puts", spec.style);
    Ok(QuoteSet::new(label, quotes)?)
}
