use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_finite, check_positive, PricerConfig, PricingError};
use crate::heston::HestonParams;
use crate::scalar::Real;

/// Simulated spot and variance paths on a uniform time grid.
///
/// Values are stored step-major so the backward induction in the
/// Longstaff–Schwartz pricer walks memory contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid<T> {
    n_paths: usize,
    n_steps: usize,
    dt: T,
    spot: Vec<T>,
    var: Vec<T>,
}

impl<T: Real> PathGrid<T> {
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn spot(&self, path: usize, step: usize) -> T {
        self.spot[step * self.n_paths + path]
    }

    pub fn variance(&self, path: usize, step: usize) -> T {
        self.var[step * self.n_paths + path]
    }

    /// Spot values of every path at one step.
    pub fn spots_at(&self, step: usize) -> &[T] {
        &self.spot[step * self.n_paths..(step + 1) * self.n_paths]
    }

    pub fn variances_at(&self, step: usize) -> &[T] {
        &self.var[step * self.n_paths..(step + 1) * self.n_paths]
    }

    /// One path as a row of `n_steps + 1` spot values.
    pub fn spot_path(&self, path: usize) -> Vec<T> {
        (0..=self.n_steps).map(|t| self.spot(path, t)).collect()
    }

    pub fn variance_path(&self, path: usize) -> Vec<T> {
        (0..=self.n_steps).map(|t| self.variance(path, t)).collect()
    }

    fn scaled(mut self, s0: T) -> Self {
        for x in &mut self.spot {
            *x *= s0;
        }
        self
    }
}

/// Simulates the Heston dynamics with a full-truncation Euler scheme.
///
/// Variance enters drift and diffusion as `max(V, 0)`; the spot moves in log
/// space with drift `(r - V+/2) dt`. Shocks are correlated through
/// `(Z1, rho Z1 + sqrt(1 - rho^2) Z2)`. Path `i` (or antithetic pair `i/2`)
/// draws from its own ChaCha stream, so results do not depend on evaluation
/// order.
pub fn simulate_paths<T: Real>(
    params: &HestonParams<T>,
    s0: T,
    rate: T,
    maturity: T,
    cfg: &PricerConfig,
) -> Result<PathGrid<T>, PricingError> {
    check_positive("spot", s0)?;
    Ok(simulate_unit_paths(params, rate, maturity, cfg)?.scaled(s0))
}

/// Paths for a unit initial spot. Prices are homogeneous in the spot, so one
/// unit grid serves every `(spot, strike)` pair sharing a maturity.
pub(crate) fn simulate_unit_paths<T: Real>(
    params: &HestonParams<T>,
    rate: T,
    maturity: T,
    cfg: &PricerConfig,
) -> Result<PathGrid<T>, PricingError> {
    let p = params.validate()?;
    cfg.validate()?;
    check_positive("maturity", maturity)?;
    check_finite("rate", rate)?;

    let n = cfg.n_paths;
    let n_steps = cfg.steps_for(maturity);
    let dt = maturity / T::from_count(n_steps);
    let sqrt_dt = dt.sqrt();
    let half = T::lit(0.5);
    let rho_c = (T::one() - p.rho * p.rho).max(T::zero()).sqrt();

    let mut spot = vec![T::zero(); n * (n_steps + 1)];
    let mut var = vec![T::zero(); n * (n_steps + 1)];
    spot[..n].fill(T::one());
    var[..n].fill(p.v0);

    let n_streams = if cfg.antithetic { n / 2 } else { n };
    let mut rngs: Vec<ChaCha8Rng> = (0..n_streams)
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream as u64);
            rng
        })
        .collect();
    let mut log_spot = vec![T::zero(); n];

    let step = |log_s: &mut T, v: T, z1: T, z2: T| -> (T, T) {
        let vp = v.max(T::zero());
        let sd = (vp).sqrt() * sqrt_dt;
        let w2 = p.rho * z1 + rho_c * z2;
        *log_s += (rate - half * vp) * dt + sd * z1;
        let v_next = v + p.kappa * (p.theta - vp) * dt + p.sigma * sd * w2;
        (log_s.exp(), v_next)
    };

    for t in 0..n_steps {
        let (prev_v, next) = var.split_at_mut((t + 1) * n);
        let prev_v = &prev_v[t * n..];
        let next_v = &mut next[..n];
        let next_s = &mut spot[(t + 1) * n..(t + 2) * n];
        for (stream, rng) in rngs.iter_mut().enumerate() {
            let z1 = T::sample_standard_normal(rng);
            let z2 = T::sample_standard_normal(rng);
            if cfg.antithetic {
                for (i, sign) in [(2 * stream, T::one()), (2 * stream + 1, -T::one())] {
                    let (s, v) = step(&mut log_spot[i], prev_v[i], sign * z1, sign * z2);
                    next_s[i] = s;
                    next_v[i] = v;
                }
            } else {
                let i = stream;
                let (s, v) = step(&mut log_spot[i], prev_v[i], z1, z2);
                next_s[i] = s;
                next_v[i] = v;
            }
        }
    }

    Ok(PathGrid {
        n_paths: n,
        n_steps,
        dt,
        spot,
        var,
    })
}
