//! Heston model parameters, option quotes and quote sets.
//!
//! Under the pricing measure the model reads
//!
//! ```text
//! dS/S = r dt + sqrt(V) dW1
//! dV   = kappa (theta - V) dt + sigma sqrt(V) dW2,    dW1 dW2 = rho dt
//! ```
//!
//! [`HestonParams`] stores the initial variance `v0` itself. Parameter tables
//! and the optimizer work in `sqrt(v0)`; [`HestonParams::from_sqrt_v0`] and
//! [`HestonParams::sqrt_v0`] convert at that boundary.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("initial variance v0 must be positive")]
    NonPositiveVariance,
    #[error("volatility of variance sigma must be positive")]
    NonPositiveVolOfVol,
    #[error("mean-reversion rate kappa must be positive")]
    NonPositiveMeanReversion,
    #[error("long-run variance theta must be positive")]
    NonPositiveLongRunVariance,
    #[error("correlation rho must lie in [-1, 1]")]
    CorrelationOutOfRange,
    #[error("sqrt(v0) must be positive")]
    NonPositiveSqrtVariance,
}

/// The five calibrated Heston parameters.
///
/// The Feller condition `2 kappa theta >= sigma^2` is deliberately not part of
/// validation: calibration routinely visits points that violate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HestonParams<T> {
    pub v0: T,
    pub sigma: T,
    pub kappa: T,
    pub theta: T,
    pub rho: T,
}

impl<T: Real> HestonParams<T> {
    pub fn new(v0: T, sigma: T, kappa: T, theta: T, rho: T) -> Result<Self, ParamError> {
        Self {
            v0,
            sigma,
            kappa,
            theta,
            rho,
        }
        .validate()
    }

    /// Builds parameters from `sqrt(v0)`, the form used by parameter tables.
    pub fn from_sqrt_v0(
        sqrt_v0: T,
        sigma: T,
        kappa: T,
        theta: T,
        rho: T,
    ) -> Result<Self, ParamError> {
        if !(sqrt_v0 > T::zero()) {
            return Err(ParamError::NonPositiveSqrtVariance);
        }
        Self::new(sqrt_v0 * sqrt_v0, sigma, kappa, theta, rho)
    }

    pub fn sqrt_v0(&self) -> T {
        self.v0.sqrt()
    }

    /// Returns `self` unchanged when every invariant holds, otherwise the
    /// first violated one in field order.
    pub fn validate(self) -> Result<Self, ParamError> {
        let zero = T::zero();
        // Written as negated comparisons so NaN fails every check.
        if !(self.v0 > zero) {
            return Err(ParamError::NonPositiveVariance);
        }
        if !(self.sigma > zero) {
            return Err(ParamError::NonPositiveVolOfVol);
        }
        if !(self.kappa > zero) {
            return Err(ParamError::NonPositiveMeanReversion);
        }
        if !(self.theta > zero) {
            return Err(ParamError::NonPositiveLongRunVariance);
        }
        if !(self.rho >= -T::one() && self.rho <= T::one()) {
            return Err(ParamError::CorrelationOutOfRange);
        }
        Ok(self)
    }

    /// Whether `2 kappa theta >= sigma^2`.
    pub fn satisfies_feller(&self) -> bool {
        T::lit(2.0) * self.kappa * self.theta >= self.sigma * self.sigma
    }

    /// Optimizer coordinates `(sqrt_v0, sigma, kappa, theta, rho)`.
    pub fn to_coordinates(&self) -> [T; 5] {
        [self.sqrt_v0(), self.sigma, self.kappa, self.theta, self.rho]
    }

    pub fn from_coordinates(x: &[T]) -> Result<Self, ParamError> {
        assert_eq!(x.len(), 5, "Heston coordinates are five-dimensional");
        Self::from_sqrt_v0(x[0], x[1], x[2], x[3], x[4])
    }

    pub fn cast<U: Real>(&self) -> HestonParams<U> {
        HestonParams {
            v0: U::lit(self.v0.as_f64()),
            sigma: U::lit(self.sigma.as_f64()),
            kappa: U::lit(self.kappa.as_f64()),
            theta: U::lit(self.theta.as_f64()),
            rho: U::lit(self.rho.as_f64()),
        }
    }
}

/// Free-function form of [`HestonParams::validate`].
pub fn validate_params<T: Real>(p: HestonParams<T>) -> Result<HestonParams<T>, ParamError> {
    p.validate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExerciseStyle {
    American,
    European,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Put,
    Call,
}

impl fmt::Display for ExerciseStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExerciseStyle::American => "american",
            ExerciseStyle::European => "european",
        })
    }
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptionKind::Put => "put",
            OptionKind::Call => "call",
        })
    }
}

impl std::str::FromStr for ExerciseStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "american" => Ok(ExerciseStyle::American),
            "european" => Ok(ExerciseStyle::European),
            other => Err(format!("unknown exercise style `{other}`")),
        }
    }
}

impl std::str::FromStr for OptionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "put" => Ok(OptionKind::Put),
            "call" => Ok(OptionKind::Call),
            other => Err(format!("unknown option kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuoteError {
    #[error("spot must be positive, got {0}")]
    NonPositiveSpot(f64),
    #[error("strike must be positive, got {0}")]
    NonPositiveStrike(f64),
    #[error("maturity must be positive, got {0}")]
    NonPositiveMaturity(f64),
    #[error("price must be non-negative, got {0}")]
    NegativePrice(f64),
    #[error("put price {price} exceeds strike {strike}")]
    PutAboveStrike { price: f64, strike: f64 },
    #[error("quote set is empty")]
    Empty,
    #[error("duplicate quote at spot {spot}, strike {strike}, maturity {maturity}")]
    Duplicate {
        spot: f64,
        strike: f64,
        maturity: f64,
    },
}

/// One observed (or synthetic) option price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionQuote<T> {
    pub spot: T,
    pub strike: T,
    pub maturity: T,
    pub rate: T,
    pub style: ExerciseStyle,
    pub kind: OptionKind,
    pub price: T,
}

impl<T: Real> OptionQuote<T> {
    pub fn validate(self) -> Result<Self, QuoteError> {
        let zero = T::zero();
        if !(self.spot > zero) {
            return Err(QuoteError::NonPositiveSpot(self.spot.as_f64()));
        }
        if !(self.strike > zero) {
            return Err(QuoteError::NonPositiveStrike(self.strike.as_f64()));
        }
        if !(self.maturity > zero) {
            return Err(QuoteError::NonPositiveMaturity(self.maturity.as_f64()));
        }
        if !(self.price >= zero) {
            return Err(QuoteError::NegativePrice(self.price.as_f64()));
        }
        if self.kind == OptionKind::Put && self.price > self.strike {
            return Err(QuoteError::PutAboveStrike {
                price: self.price.as_f64(),
                strike: self.strike.as_f64(),
            });
        }
        Ok(self)
    }
}

/// A non-empty, duplicate-free ordered list of quotes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuoteSet<T> {
    label: String,
    quotes: Vec<OptionQuote<T>>,
}

impl<T: Real> QuoteSet<T> {
    pub fn new(label: impl Into<String>, quotes: Vec<OptionQuote<T>>) -> Result<Self, QuoteError> {
        if quotes.is_empty() {
            return Err(QuoteError::Empty);
        }
        let mut seen = HashSet::with_capacity(quotes.len());
        for q in &quotes {
            q.validate()?;
            let key = (
                q.spot.as_f64().to_bits(),
                q.strike.as_f64().to_bits(),
                q.maturity.as_f64().to_bits(),
                q.style,
                q.kind,
            );
            if !seen.insert(key) {
                return Err(QuoteError::Duplicate {
                    spot: q.spot.as_f64(),
                    strike: q.strike.as_f64(),
                    maturity: q.maturity.as_f64(),
                });
            }
        }
        Ok(Self {
            label: label.into(),
            quotes,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn quotes(&self) -> &[OptionQuote<T>] {
        &self.quotes
    }

    pub fn len(&self) -> usize {
        self.quotes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OptionQuote<T>> {
        self.quotes.iter()
    }

    pub fn into_quotes(self) -> Vec<OptionQuote<T>> {
        self.quotes
    }
}

impl<'a, T> IntoIterator for &'a QuoteSet<T> {
    type Item = &'a OptionQuote<T>;
    type IntoIter = std::slice::Iter<'a, OptionQuote<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.quotes.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set1() -> HestonParams<f64> {
        HestonParams::new(0.04, 0.1, 3.0, 0.04, -0.1).unwrap()
    }

    fn put(strike: f64, price: f64) -> OptionQuote<f64> {
        OptionQuote {
            spot: 100.0,
            strike,
            maturity: 0.5,
            rate: 0.05,
            style: ExerciseStyle::American,
            kind: OptionKind::Put,
            price,
        }
    }

    #[test]
    fn first_parameter_set_is_valid() {
        let p = set1();
        assert_eq!(validate_params(p), Ok(p));
    }

    #[test]
    fn correlation_out_of_range() {
        let p = HestonParams {
            rho: -1.5,
            ..set1()
        };
        assert_eq!(p.validate(), Err(ParamError::CorrelationOutOfRange));
    }

    #[test]
    fn zero_variance_rejected() {
        let p = HestonParams { v0: 0.0, ..set1() };
        assert_eq!(p.validate(), Err(ParamError::NonPositiveVariance));
        let p = HestonParams {
            v0: f64::NAN,
            ..set1()
        };
        assert_eq!(p.validate(), Err(ParamError::NonPositiveVariance));
    }

    #[test]
    fn first_violation_is_reported() {
        let p = HestonParams {
            sigma: 0.0,
            theta: -1.0,
            rho: 2.0,
            ..set1()
        };
        assert_eq!(p.validate(), Err(ParamError::NonPositiveVolOfVol));
        let p = HestonParams {
            kappa: -1.0,
            ..set1()
        };
        assert_eq!(p.validate(), Err(ParamError::NonPositiveMeanReversion));
        let p = HestonParams {
            theta: 0.0,
            ..set1()
        };
        assert_eq!(p.validate(), Err(ParamError::NonPositiveLongRunVariance));
    }

    #[test]
    fn correlation_endpoints_allowed() {
        for rho in [-1.0, 1.0] {
            assert!(HestonParams { rho, ..set1() }.validate().is_ok());
        }
    }

    #[test]
    fn sqrt_v0_conversion() {
        let a = HestonParams::<f64>::from_sqrt_v0(0.2, 0.1, 3.0, 0.04, -0.1).unwrap();
        assert!((a.v0 - 0.04).abs() < 1e-17);
        let b = HestonParams::from_sqrt_v0(0.5, 0.1, 3.0, 0.25, -0.5).unwrap();
        assert_eq!(b.v0, 0.25);
        let c = HestonParams::from_sqrt_v0(1.0, 0.1, 3.0, 0.25, -0.5).unwrap();
        assert_eq!(c.v0, 1.0);
        assert_eq!(
            HestonParams::from_sqrt_v0(0.0, 0.1, 3.0, 0.25, -0.5),
            Err(ParamError::NonPositiveSqrtVariance)
        );
    }

    #[test]
    fn feller_is_informational_only() {
        let p = HestonParams::new(0.04, 1.0, 0.5, 0.04, 0.0).unwrap();
        assert!(!p.satisfies_feller());
        assert!(set1().satisfies_feller());
    }

    #[test]
    fn quote_invariants() {
        assert!(put(100.0, 5.0).validate().is_ok());
        assert!(matches!(
            put(100.0, 101.0).validate(),
            Err(QuoteError::PutAboveStrike { .. })
        ));
        assert!(matches!(
            put(100.0, -1.0).validate(),
            Err(QuoteError::NegativePrice(_))
        ));
        assert!(matches!(
            OptionQuote {
                maturity: 0.0,
                ..put(100.0, 1.0)
            }
            .validate(),
            Err(QuoteError::NonPositiveMaturity(_))
        ));
        // A call may trade above its strike.
        let call = OptionQuote {
            kind: OptionKind::Call,
            strike: 1.0,
            price: 99.0,
            ..put(1.0, 0.0)
        };
        assert!(call.validate().is_ok());
    }

    #[test]
    fn quote_set_rejects_empty_and_duplicates() {
        assert_eq!(QuoteSet::<f64>::new("x", vec![]), Err(QuoteError::Empty));
        let dup = QuoteSet::new("x", vec![put(100.0, 5.0), put(100.0, 5.1)]);
        assert!(matches!(dup, Err(QuoteError::Duplicate { .. })));
        let european = OptionQuote {
            style: ExerciseStyle::European,
            ..put(100.0, 5.0)
        };
        let ok = QuoteSet::new("x", vec![put(100.0, 5.0), european, put(102.0, 6.0)]).unwrap();
        assert_eq!(ok.len(), 3);
        assert_eq!(ok.label(), "x");
    }

    #[test]
    fn style_and_kind_parse() {
        assert_eq!(
            "American".parse::<ExerciseStyle>(),
            Ok(ExerciseStyle::American)
        );
        assert_eq!("put".parse::<OptionKind>(), Ok(OptionKind::Put));
        assert!("bermudan".parse::<ExerciseStyle>().is_err());
    }

    proptest! {
        #[test]
        fn sqrt_v0_round_trip(s in 0.01f64..=1.0) {
            let p = HestonParams::from_sqrt_v0(s, 0.1, 3.0, 0.04, -0.1).unwrap();
            prop_assert!((p.sqrt_v0() - s).abs() <= 2.0 * f64::EPSILON * s);
        }
    }
}
