//! Sum of squared pricing errors over a quote set.

use super::CalibrationError;
use crate::heston::{ExerciseStyle, HestonParams, OptionKind, OptionQuote, QuoteSet};
use crate::pricing::{
    price_american_puts_lsmc, price_european_calls_cf, price_european_puts_cf, PricerConfig,
};
use crate::scalar::Real;

/// Quotes that can share one pricer call: same style, kind, maturity and rate.
#[derive(PartialEq, Eq)]
struct GroupKey {
    style: ExerciseStyle,
    kind: OptionKind,
    maturity: u64,
    rate: u64,
}

impl GroupKey {
    fn of<T: Real>(q: &OptionQuote<T>) -> Self {
        Self {
            style: q.style,
            kind: q.kind,
            maturity: q.maturity.as_f64().to_bits(),
            rate: q.rate.as_f64().to_bits(),
        }
    }
}

/// Model prices for every quote, in quote order.
pub fn model_prices<T: Real>(
    candidate: &HestonParams<T>,
    quotes: &QuoteSet<T>,
    pricer: &PricerConfig,
) -> Result<Vec<T>, CalibrationError> {
    candidate.validate()?;
    let all = quotes.quotes();
    let mut groups: Vec<(GroupKey, Vec<usize>)> = Vec::new();
    for (i, q) in all.iter().enumerate() {
        let key = GroupKey::of(q);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((key, vec![i])),
        }
    }

    let mut out = vec![T::zero(); all.len()];
    for (_, idx) in &groups {
        let first = &all[idx[0]];
        let (rate, t) = (first.rate, first.maturity);
        let pairs: Vec<(T, T)> = idx.iter().map(|&i| (all[i].spot, all[i].strike)).collect();
        let fail = |e| CalibrationError::pricing(first.strike, t, e);
        let prices = match (first.style, first.kind) {
            (ExerciseStyle::American, OptionKind::Put) => {
                price_american_puts_lsmc(candidate, &pairs, rate, t, pricer)
                    .map_err(fail)?
                    .into_iter()
                    .map(|e| e.price)
                    .collect()
            }
            (ExerciseStyle::European, OptionKind::Put) => {
                price_european_puts_cf(candidate, &pairs, rate, t).map_err(fail)?
            }
            // Without dividends early exercise of a call is never optimal.
            (_, OptionKind::Call) => {
                price_european_calls_cf(candidate, &pairs, rate, t).map_err(fail)?
            }
        };
        for (&i, p) in idx.iter().zip(prices) {
            out[i] = p;
        }
    }
    Ok(out)
}

/// `sum_i (model_i - observed_i)^2`, summed in quote order.
///
/// American quotes are priced with `pricer` and its fixed seed, so repeated
/// evaluations at the same candidate are bit-identical.
pub fn sse_objective<T: Real>(
    candidate: &HestonParams<T>,
    quotes: &QuoteSet<T>,
    pricer: &PricerConfig,
) -> Result<T, CalibrationError> {
    let model = model_prices(candidate, quotes, pricer)?;
    Ok(model
        .iter()
        .zip(quotes)
        .map(|(&m, q)| (m - q.price) * (m - q.price))
        .sum())
}
