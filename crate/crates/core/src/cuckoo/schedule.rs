use super::CuckooError;
use crate::scalar::Real;

/// Discovery probability at iteration `iter` of an `n`-iteration run.
///
/// Decreases linearly from `p_max` at `iter = 0` to `p_min` at `iter = n`.
/// Written as an interpolation so both endpoints are returned exactly.
pub fn pa_schedule<T: Real>(iter: usize, n: usize, p_max: T, p_min: T) -> Result<T, CuckooError> {
    if n == 0 {
        return Err(CuckooError::InvalidConfig(
            "schedule horizon must be at least 1".into(),
        ));
    }
    if iter > n {
        return Err(CuckooError::ScheduleOutOfRange { iter, horizon: n });
    }
    let frac = T::from_count(iter) / T::from_count(n);
    Ok(p_max * (T::one() - frac) + p_min * frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_midpoint() {
        assert_eq!(pa_schedule(0, 1000, 0.95, 0.05).unwrap(), 0.95);
        assert_eq!(pa_schedule(1000, 1000, 0.95, 0.05).unwrap(), 0.05);
        let mid: f64 = pa_schedule(500, 1000, 0.95, 0.05).unwrap();
        assert!((mid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn second_difference_vanishes() {
        let n = 1000;
        let p: Vec<f64> = (0..=n)
            .map(|i| pa_schedule(i, n, 0.95, 0.05).unwrap())
            .collect();
        for w in p.windows(3) {
            assert!((w[2] - 2.0 * w[1] + w[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn past_the_horizon_is_an_error() {
        assert_eq!(
            pa_schedule(11, 10, 0.95f64, 0.05),
            Err(CuckooError::ScheduleOutOfRange {
                iter: 11,
                horizon: 10
            })
        );
        assert!(pa_schedule(0, 0, 0.95f64, 0.05).is_err());
    }
}
