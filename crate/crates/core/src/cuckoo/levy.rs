//! Heavy-tailed step generation by Mantegna's algorithm.

use rand::Rng;

use super::CuckooError;
use crate::scalar::Real;

fn check_beta(beta: f64) -> Result<(), CuckooError> {
    if beta > 1.0 && beta <= 2.0 {
        Ok(())
    } else {
        Err(CuckooError::InvalidBeta(beta))
    }
}

/// Scale of the numerator Gaussian in Mantegna's construction:
///
/// `σ_u = [Γ(1+β) sin(πβ/2) / (Γ((1+β)/2) β 2^((β-1)/2))]^(1/β)`
///
/// Defined for `1 < β ≤ 2`.
pub fn mantegna_sigma<T: Real>(beta: T) -> Result<T, CuckooError> {
    let b = beta.as_f64();
    check_beta(b)?;
    let num = libm::tgamma(1.0 + b) * (std::f64::consts::PI * b / 2.0).sin();
    let den = libm::tgamma((1.0 + b) / 2.0) * b * 2f64.powf((b - 1.0) / 2.0);
    Ok(T::lit((num / den).powf(1.0 / b)))
}

/// Samples Lévy-flight steps for a fixed stability index.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LevySampler<T> {
    sigma_u: T,
    inv_beta: T,
}

impl<T: Real> LevySampler<T> {
    pub(crate) fn new(beta: T) -> Result<Self, CuckooError> {
        Ok(Self {
            sigma_u: mantegna_sigma(beta)?,
            inv_beta: beta.recip(),
        })
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u = T::sample_standard_normal(rng) * self.sigma_u;
        let v = loop {
            let v = T::sample_standard_normal(rng);
            if v != T::zero() {
                break v;
            }
        };
        u / v.abs().powf(self.inv_beta)
    }
}

/// One `dim`-dimensional Lévy step, independent per component.
pub fn levy_step<T: Real, R: Rng + ?Sized>(
    dim: usize,
    beta: T,
    rng: &mut R,
) -> Result<Vec<T>, CuckooError> {
    let sampler = LevySampler::new(beta)?;
    Ok((0..dim).map(|_| sampler.draw(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Lanczos approximation (g = 7, n = 9), independent of libm.
    #[allow(clippy::excessive_precision)]
    fn lanczos_gamma(x: f64) -> f64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.999_999_999_999_809_93,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_13,
            -176.615_029_162_140_59,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_571_6e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }

    fn reference_sigma(b: f64) -> f64 {
        let num = lanczos_gamma(1.0 + b) * (std::f64::consts::PI * b / 2.0).sin();
        let den = lanczos_gamma((1.0 + b) / 2.0) * b * 2f64.powf((b - 1.0) / 2.0);
        (num / den).powf(1.0 / b)
    }

    #[test]
    fn sigma_at_three_halves() {
        // 40-digit evaluation of the closed form.
        let pinned = 0.696_574_502_557_696_8;
        let s: f64 = mantegna_sigma(1.5).unwrap();
        assert!((s - pinned).abs() < 5e-7);
        assert!((s - reference_sigma(1.5)).abs() < 5e-7);
    }

    #[test]
    fn sigma_is_finite_across_the_domain() {
        for b in [1.0001, 1.5, 1.9999, 2.0] {
            let s: f64 = mantegna_sigma(b).unwrap();
            assert!(s.is_finite() && s > 0.0, "beta {b}: {s}");
        }
        assert!((mantegna_sigma(1.0001f64).unwrap() - 0.999_936_484_057_892_4).abs() < 1e-9);
        assert!((mantegna_sigma(1.9999f64).unwrap() - 0.011_192_604_468_660_32).abs() < 1e-9);
    }

    #[test]
    fn rejects_beta_outside_domain() {
        for b in [1.0, 0.5, 2.0001, f64::NAN] {
            assert!(mantegna_sigma(b).is_err());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(levy_step::<f64, _>(3, 2.5, &mut rng).is_err());
    }

    /// Second construction: Box–Muller normals from raw uniforms and the
    /// Lanczos sigma.
    fn reference_tail_fraction(beta: f64, n: usize, threshold: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = reference_sigma(beta);
        let mut normal = || {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random::<f64>();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        };
        let mut hits = 0usize;
        for _ in 0..n {
            let u = sigma * normal();
            let v = normal();
            if (u / v.abs().powf(1.0 / beta)).abs() > threshold {
                hits += 1;
            }
        }
        hits as f64 / n as f64
    }

    #[test]
    fn heavy_tail_matches_reference_construction() {
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sampler = LevySampler::new(1.5f64).unwrap();
        let hits = (0..n)
            .filter(|_| sampler.draw(&mut rng).abs() > 10.0)
            .count();
        let ours = hits as f64 / n as f64;
        let reference = reference_tail_fraction(1.5, n, 10.0, 7);
        assert!(reference > 0.0);
        assert!(
            (ours / reference - 1.0).abs() < 0.3,
            "ours {ours} reference {reference}"
        );
    }

    #[test]
    fn steps_are_symmetric_with_finite_median() {
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = levy_step::<f64, _>(n, 1.5, &mut rng).unwrap();
        let sign_mean = draws.iter().map(|x| x.signum()).sum::<f64>() / n as f64;
        assert!(sign_mean.abs() < 0.005, "{sign_mean}");
        let mut mags: Vec<f64> = draws.iter().map(|x| x.abs()).collect();
        mags.select_nth_unstable_by(n / 2, |a, b| a.total_cmp(b));
        let median = mags[n / 2];
        assert!(median.is_finite() && median > 0.0);
    }

    #[test]
    fn single_precision_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = levy_step::<f32, _>(1000, 1.5, &mut rng).unwrap();
        assert!(s.iter().all(|x| x.is_finite()));
    }
}
