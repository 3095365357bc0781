//! Semi-analytic European prices from the Heston characteristic function.
//!
//! The call is `S P1 - K e^{-rT} P2` with
//! `P_j = 1/2 + (1/pi) int_0^inf Re[e^{-i u ln K} f_j(u) / (i u)] du`.
//! Both probabilities are integrated together as one price-level integrand.
//!
//! `f_j` uses the rotation-count-free form `g = (c - d)/(c + d)` with
//! `e^{-dT}`, and rewrites `c - d = sigma^2 A / (c + d)` so that nothing
//! cancels when the vol-of-vol is tiny; the logarithm and exponential are
//! evaluated through `log1p`/`expm1` for the same reason.

use num_complex::Complex;

use super::quadrature::integrate_adaptive;
use super::{check_finite, check_positive, PricingError};
use crate::heston::HestonParams;
use crate::scalar::Real;

/// Lower truncation length for the frequency integral.
const MIN_UPPER_LIMIT: f64 = 200.0;
/// `-ln` of the characteristic-function magnitude treated as negligible.
const ENVELOPE_DECAY: f64 = 28.0;
const MAX_UPPER_LIMIT: f64 = 1e5;
/// Width of the initial quadrature pieces.
const PIECE_WIDTH: f64 = 25.0;
const MAX_INTERVALS: usize = 4_000;

fn log1p_c<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let re = (two * z.re + z.norm_sqr()).ln_1p() * T::lit(0.5);
    let im = z.im.atan2(T::one() + z.re);
    Complex::new(re, im)
}

fn expm1_c<T: Real>(z: Complex<T>) -> Complex<T> {
    let half_sin = (z.im * T::lit(0.5)).sin();
    Complex::new(
        z.re.exp_m1() * z.im.cos() - T::lit(2.0) * half_sin * half_sin,
        z.re.exp() * z.im.sin(),
    )
}

/// `C_j(u) + D_j(u) v0`, the exponent of `f_j` without the `i u ln S` term.
fn log_cf<T: Real>(p: &HestonParams<T>, u: T, rate: T, tau: T, first: bool) -> Complex<T> {
    let half = T::lit(0.5);
    let (uj, bj) = if first {
        (half, p.kappa - p.rho * p.sigma)
    } else {
        (-half, p.kappa)
    };
    let s2 = p.sigma * p.sigma;
    let a = Complex::new(-u * u, T::lit(2.0) * uj * u);
    let c = Complex::new(bj, -p.rho * p.sigma * u);
    let mut d = (c * c - a * s2).sqrt();
    if d.re < T::zero() {
        d = -d;
    }
    let sum = c + d;
    let a_over_sum = a / sum;
    let g = a_over_sum * s2 / sum;
    let e = (-d * tau).exp();
    let one_minus_e = -expm1_c(-d * tau);
    let one = Complex::new(T::one(), T::zero());
    let big_d = a_over_sum * one_minus_e / (one - g * e);
    let log_ratio = log1p_c(g * one_minus_e / (one - g));
    let big_c = Complex::new(T::zero(), u * rate * tau)
        + (a_over_sum * tau - log_ratio * (T::lit(2.0) / s2)) * (p.kappa * p.theta);
    big_c + big_d * p.v0
}

/// Frequency beyond which the Gaussian envelope `exp(-vbar T u^2 / 2)` of the
/// characteristic function is negligible, never below `MIN_UPPER_LIMIT`.
fn upper_limit<T: Real>(p: &HestonParams<T>, tau: T) -> T {
    let kt = p.kappa * tau;
    let mean_var = if kt.as_f64() < 1e-8 {
        p.v0
    } else {
        p.theta + (p.v0 - p.theta) * (-(-kt).exp_m1()) / kt
    };
    let envelope = (T::lit(2.0 * ENVELOPE_DECAY) / (mean_var * tau)).sqrt();
    envelope
        .max(T::lit(MIN_UPPER_LIMIT))
        .min(T::lit(MAX_UPPER_LIMIT))
}

/// Undiscounted call prices (before flooring) for pairs sharing `(rate, tau)`.
fn raw_calls<T: Real>(
    params: &HestonParams<T>,
    pairs: &[(T, T)],
    rate: T,
    tau: T,
) -> Result<Vec<T>, PricingError> {
    let p = params.validate()?;
    check_positive("maturity", tau)?;
    check_finite("rate", rate)?;
    for &(spot, strike) in pairs {
        check_positive("spot", spot)?;
        check_positive("strike", strike)?;
    }
    if pairs.is_empty() {
        return Ok(Vec::new());
    }

    let df = (-rate * tau).exp();
    let log_m: Vec<T> = pairs.iter().map(|&(s, k)| (s / k).ln()).collect();
    let pi = T::PI();
    let upper = upper_limit(&p, tau);
    let pieces = (upper.as_f64() / PIECE_WIDTH).ceil() as usize;

    let integrand = |u: T, out: &mut [T]| {
        let e1 = log_cf(&p, u, rate, tau, true).exp();
        let e2 = log_cf(&p, u, rate, tau, false).exp();
        for (k, o) in out.iter_mut().enumerate() {
            let (spot, strike) = pairs[k];
            let rot = Complex::from_polar(T::one(), u * log_m[k]);
            let z = e1 * rot * spot - e2 * rot * (strike * df);
            *o = z.im / (pi * u);
        }
    };

    let integrals = integrate_adaptive(
        integrand,
        T::zero(),
        upper,
        pairs.len(),
        T::lit(T::QUAD_TOL),
        pieces,
        MAX_INTERVALS.max(4 * pieces),
    )?;

    Ok(pairs
        .iter()
        .zip(integrals)
        .map(|(&(s, k), int)| (s - k * df) * T::lit(0.5) + int)
        .collect())
}

/// European call prices for `(spot, strike)` pairs sharing one maturity.
///
/// The quadrature mesh is refined until every pair meets the tolerance, so a
/// batch price can differ from the single-pair price in the last digits.
pub fn price_european_calls_cf<T: Real>(
    params: &HestonParams<T>,
    pairs: &[(T, T)],
    rate: T,
    maturity: T,
) -> Result<Vec<T>, PricingError> {
    Ok(raw_calls(params, pairs, rate, maturity)?
        .into_iter()
        .map(|c| c.max(T::zero()))
        .collect())
}

/// European put prices via put–call parity on [`price_european_calls_cf`].
pub fn price_european_puts_cf<T: Real>(
    params: &HestonParams<T>,
    pairs: &[(T, T)],
    rate: T,
    maturity: T,
) -> Result<Vec<T>, PricingError> {
    let df = (-rate * maturity).exp();
    Ok(raw_calls(params, pairs, rate, maturity)?
        .into_iter()
        .zip(pairs)
        .map(|(c, &(s, k))| (c - s + k * df).max(T::zero()))
        .collect())
}

pub fn price_european_call_cf<T: Real>(
    params: &HestonParams<T>,
    spot: T,
    strike: T,
    rate: T,
    maturity: T,
) -> Result<T, PricingError> {
    Ok(price_european_calls_cf(params, &[(spot, strike)], rate, maturity)?[0])
}

pub fn price_european_put_cf<T: Real>(
    params: &HestonParams<T>,
    spot: T,
    strike: T,
    rate: T,
    maturity: T,
) -> Result<T, PricingError> {
    Ok(price_european_puts_cf(params, &[(spot, strike)], rate, maturity)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing::bs_put;

    fn set(n: usize) -> HestonParams<f64> {
        let (s, sigma, kappa, theta, rho) = match n {
            1 => (0.2, 0.1, 3.0, 0.04, -0.1),
            2 => (0.5, 0.1, 3.0, 0.25, -0.5),
            3 => (0.3, 0.25, 2.0, 0.09, -0.1),
            _ => (0.4, 0.25, 1.0, 0.16, -0.2),
        };
        HestonParams::from_sqrt_v0(s, sigma, kappa, theta, rho).unwrap()
    }

    #[test]
    fn degenerate_limit_matches_black_scholes() {
        let p = HestonParams::<f64>::new(0.04, 1e-8, 3.0, 0.04, -0.1).unwrap();
        for t in [1.0 / 12.0, 0.25, 0.5, 1.0] {
            for k in [80.0, 100.0, 120.0] {
                let cf = price_european_put_cf(&p, 100.0, k, 0.05, t).unwrap();
                let bs = bs_put(100.0, k, 0.05, t, 0.2).unwrap();
                assert!((cf - bs).abs() < 1e-6, "T={t} K={k}: {cf} vs {bs}");
            }
        }
    }

    #[test]
    fn short_maturity_tends_to_intrinsic() {
        let price = price_european_put_cf(&set(1), 90.0, 100.0, 0.05, 1e-6).unwrap();
        assert!((price - 10.0).abs() < 1e-3, "{price}");
    }

    #[test]
    fn put_call_parity() {
        let p = set(3);
        let call = price_european_call_cf(&p, 100.0, 100.0, 0.05, 1.0).unwrap();
        let put = price_european_put_cf(&p, 100.0, 100.0, 0.05, 1.0).unwrap();
        let fwd = 100.0 - 100.0 * (-0.05f64).exp();
        assert!((call - put - fwd).abs() < 1e-8);
    }

    #[test]
    fn batch_matches_single_within_tolerance() {
        let p = set(2);
        let pairs: Vec<(f64, f64)> = (0..21).map(|i| (100.0, 80.0 + 2.0 * i as f64)).collect();
        let batch = price_european_puts_cf(&p, &pairs, 0.05, 0.25).unwrap();
        for (&(s, k), b) in pairs.iter().zip(&batch) {
            let single = price_european_put_cf(&p, s, k, 0.05, 0.25).unwrap();
            assert!((single - b).abs() < 1e-9);
        }
    }

    #[test]
    fn prices_are_arbitrage_consistent() {
        for n in 1..=4 {
            let p = set(n);
            let pairs: Vec<(f64, f64)> = (0..21).map(|i| (100.0, 80.0 + 2.0 * i as f64)).collect();
            let puts = price_european_puts_cf(&p, &pairs, 0.05, 0.5).unwrap();
            for (w, &(s, k)) in puts.windows(2).zip(&pairs) {
                assert!(w[1] >= w[0], "set {n}: puts must increase in strike");
                let lower = (k * (-0.025f64).exp() - s).max(0.0);
                assert!(w[0] >= lower - 1e-10 && w[0] <= k);
            }
        }
    }

    #[test]
    fn spot_homogeneity() {
        let p = set(4);
        let a = price_european_put_cf(&p, 90.0, 100.0, 0.05, 0.5).unwrap();
        let b = price_european_put_cf(&p, 180.0, 200.0, 0.05, 0.5).unwrap();
        assert!((2.0 * a - b).abs() < 1e-8);
    }

    #[test]
    fn feller_violating_parameters_price() {
        let p = HestonParams::<f64>::new(0.01, 1.0, 0.5, 0.01, -0.9).unwrap();
        let put = price_european_put_cf(&p, 100.0, 100.0, 0.05, 1.0).unwrap();
        assert!(put.is_finite() && put > 0.0 && put < 100.0);
    }

    #[test]
    fn correlation_endpoints() {
        for rho in [-1.0, 1.0] {
            let p = HestonParams { rho, ..set(3) };
            let put = price_european_put_cf(&p, 100.0, 100.0, 0.05, 1.0).unwrap();
            assert!(put.is_finite() && put > 0.0);
        }
    }

    #[test]
    fn single_precision_close_to_double() {
        let wide = price_european_put_cf(&set(1), 100.0, 100.0, 0.05, 0.5).unwrap();
        let narrow =
            price_european_put_cf(&set(1).cast::<f32>(), 100.0f32, 100.0, 0.05, 0.5).unwrap();
        assert!((narrow as f64 - wide).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(price_european_put_cf(&set(1), 100.0, 100.0, 0.05, 0.0).is_err());
        assert!(price_european_put_cf(&set(1), 0.0, 100.0, 0.05, 1.0).is_err());
        assert!(price_european_put_cf(&set(1), 100.0, 100.0, f64::NAN, 1.0).is_err());
    }
}
