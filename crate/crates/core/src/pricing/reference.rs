//! Constant-volatility reference prices.

use super::{check_finite, check_positive, PricingError};
use crate::scalar::Real;

fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn bs_d<T: Real>(s: T, k: T, r: T, t: T, vol: T) -> Result<(f64, f64, f64), PricingError> {
    check_positive("spot", s)?;
    check_positive("strike", k)?;
    check_positive("maturity", t)?;
    check_positive("volatility", vol)?;
    check_finite("rate", r)?;
    let (s, k, r, t, vol) = (s.as_f64(), k.as_f64(), r.as_f64(), t.as_f64(), vol.as_f64());
    let sd = vol * t.sqrt();
    let d1 = ((s / k).ln() + (r + 0.5 * vol * vol) * t) / sd;
    Ok((d1, d1 - sd, (-r * t).exp()))
}

/// Black–Scholes European put.
pub fn bs_put<T: Real>(s: T, k: T, r: T, t: T, vol: T) -> Result<T, PricingError> {
    let (d1, d2, df) = bs_d(s, k, r, t, vol)?;
    let (s, k) = (s.as_f64(), k.as_f64());
    Ok(T::lit(k * df * norm_cdf(-d2) - s * norm_cdf(-d1)))
}

/// Black–Scholes European call.
pub fn bs_call<T: Real>(s: T, k: T, r: T, t: T, vol: T) -> Result<T, PricingError> {
    let (d1, d2, df) = bs_d(s, k, r, t, vol)?;
    let (s, k) = (s.as_f64(), k.as_f64());
    Ok(T::lit(s * norm_cdf(d1) - k * df * norm_cdf(d2)))
}

/// Cox–Ross–Rubinstein binomial American put with `n_steps` periods.
pub fn crr_american_put<T: Real>(
    s: T,
    k: T,
    r: T,
    t: T,
    vol: T,
    n_steps: usize,
) -> Result<T, PricingError> {
    check_positive("spot", s)?;
    check_positive("strike", k)?;
    check_positive("maturity", t)?;
    check_positive("volatility", vol)?;
    check_finite("rate", r)?;
    if n_steps == 0 {
        return Err(PricingError::InvalidInput(
            "n_steps must be positive".into(),
        ));
    }
    let dt = t / T::from_count(n_steps);
    let up = (vol * dt.sqrt()).exp();
    let down = up.recip();
    let growth = (r * dt).exp();
    let prob = (growth - down) / (up - down);
    if !(prob > T::zero() && prob < T::one()) {
        return Err(PricingError::InvalidInput(format!(
            "risk-neutral probability {prob} outside (0, 1); use more steps"
        )));
    }
    let disc = growth.recip();

    let node = |i: usize, ups: usize| s * up.powi(ups as i32) * down.powi((i - ups) as i32);
    let mut values: Vec<T> = (0..=n_steps)
        .map(|j| (k - node(n_steps, j)).max(T::zero()))
        .collect();
    for i in (0..n_steps).rev() {
        for j in 0..=i {
            let hold = disc * (prob * values[j + 1] + (T::one() - prob) * values[j]);
            values[j] = hold.max(k - node(i, j));
        }
    }
    Ok(values[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_vol_at_the_money_is_worthless() {
        for t in [0.1, 1.0, 5.0] {
            let p = bs_put::<f64>(100.0, 100.0, 0.0, t, 1e-10).unwrap();
            assert!(p.abs() < 1e-8);
        }
    }

    #[test]
    fn black_scholes_parity_and_known_value() {
        let put = bs_put(100.0, 100.0, 0.05, 1.0, 0.2).unwrap();
        let call = bs_call::<f64>(100.0, 100.0, 0.05, 1.0, 0.2).unwrap();
        // Hull's textbook value for this contract.
        assert!((call - 10.450_583_572_185_565).abs() < 1e-9);
        assert!((call - put - (100.0 - 100.0 * (-0.05f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn tree_collapses_to_intrinsic_without_volatility_or_rates() {
        for (s, k) in [(100.0, 90.0), (100.0, 100.0), (80.0, 100.0)] {
            let p: f64 = crr_american_put(s, k, 0.0, 1.0, 1e-9, 200).unwrap();
            assert!((p - (k - s).max(0.0)).abs() < 1e-6, "{s} {k} {p}");
        }
    }

    #[test]
    fn tree_matches_fine_reference() {
        // Independent 10,000-step run.
        let fine = 4.655_623_211_510_636;
        let p: f64 = crr_american_put(100.0, 100.0, 0.05, 0.5, 0.2, 2_000).unwrap();
        assert!((p - fine).abs() < 1e-3, "{p}");
        // Same tree, independent implementation.
        assert!((p - 4.655_373_900_440_684).abs() < 1e-9, "{p}");
    }

    #[test]
    fn tree_dominates_european() {
        let am = crr_american_put(100.0, 100.0, 0.05, 1.0, 0.2, 500).unwrap();
        let eu = bs_put(100.0, 100.0, 0.05, 1.0, 0.2).unwrap();
        assert!(am > eu);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(bs_put(0.0, 100.0, 0.05, 1.0, 0.2).is_err());
        assert!(bs_put(100.0, 100.0, 0.05, 1.0, 0.0).is_err());
        assert!(crr_american_put(100.0, 100.0, 0.05, 1.0, 0.2, 0).is_err());
        assert!(crr_american_put(100.0, -1.0, 0.05, 1.0, 0.2, 10).is_err());
    }
}
