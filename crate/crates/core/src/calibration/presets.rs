//! Named parameter sets and search boxes for the synthetic experiments.

use std::fmt;
use std::str::FromStr;

use super::CalibrationError;
use crate::cuckoo::SearchSpace;
use crate::heston::HestonParams;
use crate::scalar::Real;

/// `(sqrt_v0, sigma, kappa, theta, rho)` for the four reference sets.
const SETS: [[f64; 5]; 4] = [
    [0.2, 0.1, 3.0, 0.04, -0.1],
    [0.5, 0.1, 3.0, 0.25, -0.5],
    [0.3, 0.25, 2.0, 0.09, -0.1],
    [0.4, 0.25, 1.0, 0.16, -0.2],
];

/// Reference parameter set `n` (1 to 4).
pub fn parameter_set<T: Real>(n: usize) -> Result<HestonParams<T>, CalibrationError> {
    let row = n
        .checked_sub(1)
        .and_then(|i| SETS.get(i))
        .ok_or_else(|| CalibrationError::UnknownPreset(format!("set{n}")))?;
    let c: Vec<T> = row.iter().map(|&x| T::lit(x)).collect();
    Ok(HestonParams::from_coordinates(&c)?)
}

/// Looks up `set1` ... `set4`.
pub fn parameter_set_by_name<T: Real>(name: &str) -> Result<HestonParams<T>, CalibrationError> {
    name.strip_prefix("set")
        .and_then(|n| n.parse().ok())
        .map_or_else(
            || Err(CalibrationError::UnknownPreset(name.to_owned())),
            parameter_set,
        )
}

/// Box presets over `(sqrt_v0, sigma, kappa, theta, rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsPreset {
    /// The published bounds. They exclude several of the reference sets
    /// (`sqrt_v0 <= 0.1` and `theta <= 0.1`), so recovery runs use
    /// [`BoundsPreset::Wide`].
    Paper,
    Wide,
}

impl BoundsPreset {
    pub fn bounds(self) -> ([f64; 5], [f64; 5]) {
        match self {
            Self::Paper => ([0.01, 0.05, 0.5, 0.01, -0.8], [0.1, 0.3, 4.0, 0.1, 0.1]),
            Self::Wide => ([0.05, 0.01, 0.1, 0.005, -0.95], [0.8, 1.0, 6.0, 0.5, 0.2]),
        }
    }

    pub fn space<T: Real>(self) -> SearchSpace<T> {
        let (lo, hi) = self.bounds();
        SearchSpace::new(lo.map(T::lit).to_vec(), hi.map(T::lit).to_vec())
            .expect("preset bounds are well-formed")
    }
}

impl fmt::Display for BoundsPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper-bounds",
            Self::Wide => "wide-bounds",
        })
    }
}

impl FromStr for BoundsPreset {
    type Err = CalibrationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-bounds" => Ok(Self::Paper),
            "wide-bounds" => Ok(Self::Wide),
            _ => Err(CalibrationError::UnknownPreset(s.to_owned())),
        }
    }
}
