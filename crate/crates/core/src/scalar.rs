//! Floating-point abstraction shared by every numerical routine in the crate.
//!
//! All pricing, optimization and calibration code is written against [`Real`]
//! so that the same algorithms run in `f64` (the default, used by the CLI) and
//! in `f32` (useful for fast, low-precision Monte Carlo sweeps).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance the adaptive quadrature aims for on a price-level
    /// integral.
    const QUAD_TOL: f64;

    /// Relative threshold below which a regression column is treated as
    /// linearly dependent on the columns before it.
    const RANK_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform draw on `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    const QUAD_TOL: f64 = 1e-10;
    const RANK_TOL: f64 = 1e-12;

    #[inline]
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

impl Real for f32 {
    const QUAD_TOL: f64 = 1e-3;
    const RANK_TOL: f64 = 1e-5;

    #[inline]
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}

/// Orders two values with non-finite entries sorted last.
pub(crate) fn cmp_fitness<T: Real>(a: T, b: T) -> std::cmp::Ordering {
    let key = |x: T| if x.is_finite() { x } else { T::infinity() };
    key(a)
        .partial_cmp(&key(b))
        .unwrap_or(std::cmp::Ordering::Equal)
}
