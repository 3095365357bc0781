//! Cuckoo Search over a box, with a linearly decaying discovery probability.
//!
//! Each iteration lays one Lévy-flight egg per nest, lets it displace a
//! randomly chosen nest when strictly better, and then abandons a fraction
//! `p_a` of the non-best nests; an abandoned nest keeps its new site only if
//! it improves on the old one. `p_a` falls from `p_max` to `p_min` over the
//! run (see [`pa_schedule`]), shifting the search from exploration to
//! refinement around the best nests.
//!
//! ```
//! use heston_calib::cuckoo::{optimize, CuckooConfig, SearchSpace};
//!
//! let space = SearchSpace::new(vec![-5.0; 3], vec![5.0; 3]).unwrap();
//! let cfg = CuckooConfig { max_iter: Some(200), ..CuckooConfig::with_seed(1) };
//! let run = optimize(|x: &[f64]| x.iter().map(|v| v * v).sum(), &space, &cfg).unwrap();
//! assert!(run.best.fitness < 1e-2);
//! ```

mod levy;
mod schedule;

pub use levy::{levy_step, mantegna_sigma};
pub use schedule::pa_schedule;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{cmp_fitness, Real};
use levy::LevySampler;

/// Schedule length used when a run is bounded only by `tol`. Past it, `p_a`
/// stays at `p_min`.
pub const DEFAULT_SCHEDULE_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CuckooError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("Lévy stability index must lie in (1, 2], got {0}")]
    InvalidBeta(f64),
    #[error("iteration {iter} is past the schedule horizon {horizon}")]
    ScheduleOutOfRange { iter: usize, horizon: usize },
    #[error("position has {got} coordinates, search space has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Axis-aligned box `lower[i] <= x[i] <= upper[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Real> SearchSpace<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self, CuckooError> {
        if lower.len() != upper.len() {
            return Err(CuckooError::InvalidSpace(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(CuckooError::InvalidSpace("zero-dimensional box".into()));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CuckooError::InvalidSpace(format!(
                    "coordinate {i}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    pub fn clamp(&self, x: &mut [T]) {
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(lo).min(hi);
        }
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let mut x: Vec<T> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * T::sample_unit(rng))
            .collect();
        // lo + (hi - lo) * u can round up to hi or past it.
        self.clamp(&mut x);
        x
    }

    fn check_dim(&self, x: &[T]) -> Result<(), CuckooError> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(CuckooError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuckooConfig<T> {
    pub n_nests: usize,
    /// Iteration cap. Also the length of the `p_a` schedule.
    pub max_iter: Option<usize>,
    /// Stop as soon as the best fitness is at or below this value.
    pub tol: Option<T>,
    pub p_max: T,
    pub p_min: T,
    pub levy_beta: T,
    /// Lévy step size as a fraction of each coordinate's box width.
    pub step_scale: T,
    pub seed: u64,
}

impl<T: Real> Default for CuckooConfig<T> {
    fn default() -> Self {
        Self {
            n_nests: 20,
            max_iter: Some(1000),
            tol: None,
            p_max: T::lit(0.95),
            p_min: T::lit(0.05),
            levy_beta: T::lit(1.5),
            step_scale: T::lit(0.01),
            seed: 0,
        }
    }
}

impl<T: Real> CuckooConfig<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), CuckooError> {
        let bad = |msg: String| Err(CuckooError::InvalidConfig(msg));
        if self.n_nests < 2 {
            return bad(format!("need at least 2 nests, got {}", self.n_nests));
        }
        if !(self.p_min >= T::zero() && self.p_min <= self.p_max && self.p_max <= T::one()) {
            return bad(format!(
                "need 0 <= p_min <= p_max <= 1, got p_min={} p_max={}",
                self.p_min, self.p_max
            ));
        }
        if !(self.levy_beta > T::one() && self.levy_beta <= T::lit(2.0)) {
            return Err(CuckooError::InvalidBeta(self.levy_beta.as_f64()));
        }
        if !(self.step_scale >= T::zero() && self.step_scale.is_finite()) {
            return bad(format!(
                "step_scale must be finite and >= 0, got {}",
                self.step_scale
            ));
        }
        match (self.max_iter, self.tol) {
            (None, None) => return bad("set max_iter, tol or both".into()),
            (Some(0), _) => return bad("max_iter must be at least 1".into()),
            _ => {}
        }
        if let Some(tol) = self.tol {
            if tol.is_nan() {
                return bad("tol is NaN".into());
            }
        }
        Ok(())
    }

    fn horizon(&self) -> usize {
        self.max_iter.unwrap_or(DEFAULT_SCHEDULE_HORIZON)
    }
}

/// A candidate position and its objective value. Non-finite objective values
/// are stored as `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Nest<T> {
    pub position: Vec<T>,
    pub fitness: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    pub iteration: usize,
    /// Best fitness seen so far; never increases.
    pub best_fitness: T,
    pub best_position: Vec<T>,
    /// Discovery probability applied in this iteration.
    pub p_a: T,
    /// Cumulative objective evaluations.
    pub n_evals: usize,
    /// Cumulative evaluations that returned a non-finite value.
    pub n_nonfinite: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome<T> {
    pub best: Nest<T>,
    /// One record for the initial population (iteration 0) and one per
    /// completed iteration.
    pub trace: Vec<TraceRecord<T>>,
}

impl<T> SearchOutcome<T> {
    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |r| r.iteration)
    }

    pub fn n_evals(&self) -> usize {
        self.trace.last().map_or(0, |r| r.n_evals)
    }
}

/// Lays one egg from `current` by a Lévy flight directed away from `best`.
///
/// `candidate = current + α ⊙ L ⊙ d` with `α = step_scale * (upper - lower)`
/// and `d` the offset `current - best` measured in box widths and scaled so
/// its largest component has magnitude one. The step length therefore does
/// not shrink as the population contracts. Components where `current` and
/// `best` coincide (all of them when `current == best`) get `d = 1`. The
/// result is clamped to the box.
pub fn generate_cuckoo<T: Real, R: Rng + ?Sized>(
    current: &[T],
    best: &[T],
    space: &SearchSpace<T>,
    cfg: &CuckooConfig<T>,
    rng: &mut R,
) -> Result<Vec<T>, CuckooError> {
    space.check_dim(current)?;
    space.check_dim(best)?;
    let sampler = LevySampler::new(cfg.levy_beta)?;
    Ok(lay_egg(current, best, space, cfg.step_scale, &sampler, rng))
}

fn lay_egg<T: Real, R: Rng + ?Sized>(
    current: &[T],
    best: &[T],
    space: &SearchSpace<T>,
    step_scale: T,
    sampler: &LevySampler<T>,
    rng: &mut R,
) -> Vec<T> {
    let widths: Vec<T> = space
        .lower
        .iter()
        .zip(&space.upper)
        .map(|(&lo, &hi)| hi - lo)
        .collect();
    let offsets: Vec<T> = current
        .iter()
        .zip(best)
        .zip(&widths)
        .map(|((&x, &b), &w)| (x - b) / w)
        .collect();
    let largest = offsets.iter().fold(T::zero(), |m, o| m.max(o.abs()));
    let mut out: Vec<T> = current
        .iter()
        .zip(offsets)
        .zip(&widths)
        .map(|((&x, o), &w)| {
            // A coordinate that already agrees with the best would otherwise
            // never move again, which traps nests clamped onto a bound.
            let direction = if o == T::zero() {
                T::one()
            } else {
                o / largest
            };
            x + step_scale * w * sampler.draw(rng) * direction
        })
        .collect();
    space.clamp(&mut out);
    out
}

/// Abandons each non-best nest with probability `p_a`.
///
/// `nests` must be ranked best first; `nests[0]` is never touched. An
/// abandoned nest moves to `x + U ⊙ (x_j - x_k)` for two distinct random
/// nests `j`, `k` and per-coordinate uniforms `U`, clamped to the box. With
/// fewer than three nests it is instead redrawn uniformly. Returns the
/// indices of abandoned nests; their fitness is reset to `NaN` until
/// re-evaluated.
pub fn abandon_worst<T: Real, R: Rng + ?Sized>(
    nests: &mut [Nest<T>],
    p_a: T,
    space: &SearchSpace<T>,
    rng: &mut R,
) -> Vec<usize> {
    let n = nests.len();
    let mut moved = Vec::new();
    for i in 1..n {
        if T::sample_unit(rng) >= p_a {
            continue;
        }
        let position = if n < 3 {
            space.sample_uniform(rng)
        } else {
            let j = rng.random_range(0..n);
            let k = loop {
                let k = rng.random_range(0..n);
                if k != j {
                    break k;
                }
            };
            let mut x: Vec<T> = nests[i]
                .position
                .iter()
                .zip(nests[j].position.iter().zip(&nests[k].position))
                .map(|(&x, (&a, &b))| x + T::sample_unit(rng) * (a - b))
                .collect();
            space.clamp(&mut x);
            x
        };
        nests[i].position = position;
        nests[i].fitness = T::nan();
        moved.push(i);
    }
    moved
}

/// Wraps the objective, counting calls and mapping non-finite values to
/// `+inf`.
struct Counted<F> {
    objective: F,
    n_evals: usize,
    n_nonfinite: usize,
}

impl<F> Counted<F> {
    fn new(objective: F) -> Self {
        Self {
            objective,
            n_evals: 0,
            n_nonfinite: 0,
        }
    }

    fn eval<T: Real>(&mut self, x: &[T]) -> T
    where
        F: FnMut(&[T]) -> T,
    {
        self.n_evals += 1;
        let f = (self.objective)(x);
        if f.is_finite() {
            f
        } else {
            self.n_nonfinite += 1;
            T::infinity()
        }
    }
}

fn rank<T: Real>(nests: &mut [Nest<T>]) {
    nests.sort_by(|a, b| cmp_fitness(a.fitness, b.fitness));
}

/// Minimizes `objective` over `space`.
///
/// Deterministic for a fixed `cfg.seed`. The returned best nest is the best
/// position ever evaluated.
pub fn optimize<T, F>(
    objective: F,
    space: &SearchSpace<T>,
    cfg: &CuckooConfig<T>,
) -> Result<SearchOutcome<T>, CuckooError>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    cfg.validate()?;
    let sampler = LevySampler::new(cfg.levy_beta)?;
    let horizon = cfg.horizon();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut eval = Counted::new(objective);

    let mut nests: Vec<Nest<T>> = (0..cfg.n_nests)
        .map(|_| {
            let position = space.sample_uniform(&mut rng);
            let fitness = eval.eval(&position);
            Nest { position, fitness }
        })
        .collect();
    rank(&mut nests);
    let mut best = nests[0].clone();
    let record = |iteration: usize, p_a: T, best: &Nest<T>, eval: &Counted<F>| TraceRecord {
        iteration,
        best_fitness: best.fitness,
        best_position: best.position.clone(),
        p_a,
        n_evals: eval.n_evals,
        n_nonfinite: eval.n_nonfinite,
    };
    let mut trace = vec![record(0, cfg.p_max, &best, &eval)];
    let done = |best: &Nest<T>, iter: usize| {
        cfg.tol.is_some_and(|tol| best.fitness <= tol) || cfg.max_iter.is_some_and(|m| iter >= m)
    };

    let mut iter = 0;
    while !done(&best, iter) {
        iter += 1;

        // Lay all eggs first, then settle replacements in nest order.
        let eggs: Vec<(Vec<T>, usize)> = nests
            .iter()
            .map(|nest| {
                let egg = lay_egg(
                    &nest.position,
                    &nests[0].position,
                    space,
                    cfg.step_scale,
                    &sampler,
                    &mut rng,
                );
                (egg, rng.random_range(0..cfg.n_nests))
            })
            .collect();
        let fitness: Vec<T> = eggs.iter().map(|(egg, _)| eval.eval(egg)).collect();
        for ((egg, j), f) in eggs.into_iter().zip(fitness) {
            if cmp_fitness(f, nests[j].fitness).is_lt() {
                nests[j] = Nest {
                    position: egg,
                    fitness: f,
                };
            }
        }
        rank(&mut nests);

        let p_a = pa_schedule(iter.min(horizon), horizon, cfg.p_max, cfg.p_min)?;
        // An abandoned nest only takes its new site if that site is better.
        let previous = nests.clone();
        for i in abandon_worst(&mut nests, p_a, space, &mut rng) {
            nests[i].fitness = eval.eval(&nests[i].position);
            if !cmp_fitness(nests[i].fitness, previous[i].fitness).is_lt() {
                nests[i] = previous[i].clone();
            }
        }
        rank(&mut nests);

        if cmp_fitness(nests[0].fitness, best.fitness).is_lt() {
            best = nests[0].clone();
        }
        trace.push(record(iter, p_a, &best, &eval));
    }

    Ok(SearchOutcome { best, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn rastrigin(x: &[f64]) -> f64 {
        let tau = 2.0 * std::f64::consts::PI;
        10.0 * x.len() as f64
            + x.iter()
                .map(|v| v * v - 10.0 * (tau * v).cos())
                .sum::<f64>()
    }

    fn cube(dim: usize, half: f64) -> SearchSpace<f64> {
        SearchSpace::new(vec![-half; dim], vec![half; dim]).unwrap()
    }

    fn cfg(seed: u64, iters: usize) -> CuckooConfig<f64> {
        CuckooConfig {
            max_iter: Some(iters),
            ..CuckooConfig::with_seed(seed)
        }
    }

    #[test]
    fn space_validation() {
        assert!(SearchSpace::new(vec![0.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SearchSpace::<f64>::new(vec![], vec![]).is_err());
        assert!(SearchSpace::new(vec![f64::NEG_INFINITY], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, -1.0], vec![1.0, 1.0]).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(CuckooConfig::<f64>::default().validate().is_ok());
        let cases = [
            CuckooConfig {
                n_nests: 1,
                ..Default::default()
            },
            CuckooConfig {
                p_min: 0.96,
                ..Default::default()
            },
            CuckooConfig {
                p_max: 1.1,
                ..Default::default()
            },
            CuckooConfig {
                p_min: -0.1,
                ..Default::default()
            },
            CuckooConfig {
                levy_beta: 1.0,
                ..Default::default()
            },
            CuckooConfig {
                step_scale: -1.0,
                ..Default::default()
            },
            CuckooConfig {
                max_iter: None,
                tol: None,
                ..Default::default()
            },
            CuckooConfig {
                max_iter: Some(0),
                ..Default::default()
            },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
        let tol_only = CuckooConfig {
            max_iter: None,
            tol: Some(1e-3),
            ..Default::default()
        };
        assert!(tol_only.validate().is_ok());
    }

    #[test]
    fn sphere_converges() {
        let run = optimize(sphere, &cube(5, 5.0), &cfg(1, 500)).unwrap();
        assert!(run.best.fitness < 1e-4, "{}", run.best.fitness);
        assert_eq!(run.iterations(), 500);
    }

    fn rastrigin_finals(seeds: std::ops::Range<u64>) -> Vec<f64> {
        let space = cube(5, 5.12);
        seeds
            .map(|seed| {
                let c = CuckooConfig {
                    n_nests: 25,
                    ..cfg(seed, 2000)
                };
                optimize(rastrigin, &space, &c).unwrap().best.fitness
            })
            .collect()
    }

    #[test]
    fn rastrigin_solved_in_eight_of_ten_seeds() {
        let solved = rastrigin_finals(0..10).iter().filter(|&&f| f < 1.0).count();
        assert!(solved >= 8, "solved {solved}/10");
    }

    #[test]
    fn constant_objective_runs_to_the_cap() {
        let run = optimize(|_: &[f64]| 3.0, &cube(2, 1.0), &cfg(4, 25)).unwrap();
        assert_eq!(run.trace.len(), 26);
        assert!(run.trace.iter().all(|r| r.best_fitness == 3.0));
    }

    #[test]
    fn trace_is_monotone_and_schedule_linear() {
        let run = optimize(rastrigin, &cube(3, 5.12), &cfg(11, 300)).unwrap();
        for w in run.trace.windows(2) {
            assert!(w[1].best_fitness <= w[0].best_fitness);
        }
        let p: Vec<f64> = run.trace.iter().map(|r| r.p_a).collect();
        assert_eq!(p[0], 0.95);
        assert_eq!(*p.last().unwrap(), 0.05);
        for w in p.windows(3) {
            assert!((w[2] - 2.0 * w[1] + w[0]).abs() < 1e-15);
        }
        assert_eq!(run.best.fitness, run.trace.last().unwrap().best_fitness);
    }

    #[test]
    fn evaluation_budget_is_accounted_exactly() {
        let mut calls = 0usize;
        let c = cfg(5, 40);
        let run = optimize(
            |x: &[f64]| {
                calls += 1;
                sphere(x)
            },
            &cube(4, 2.0),
            &c,
        )
        .unwrap();
        assert_eq!(run.n_evals(), calls);
        assert_eq!(run.trace[0].n_evals, c.n_nests);
        for w in run.trace.windows(2) {
            let used = w[1].n_evals - w[0].n_evals;
            // One egg per nest plus at most every non-best nest abandoned.
            assert!(used >= c.n_nests && used < 2 * c.n_nests);
        }
    }

    #[test]
    fn every_evaluation_is_inside_the_box() {
        let space = SearchSpace::new(vec![0.0, -1.0, 10.0], vec![0.5, 1.0, 10.1]).unwrap();
        let mut outside = 0;
        optimize(
            |x: &[f64]| {
                if !space.contains(x) {
                    outside += 1;
                }
                // Pulls hard toward a corner so clamping is exercised.
                -x.iter().sum::<f64>()
            },
            &space,
            &CuckooConfig {
                step_scale: 5.0,
                ..cfg(2, 100)
            },
        )
        .unwrap();
        assert_eq!(outside, 0);
    }

    #[test]
    fn seed_determines_the_trace() {
        let a = optimize(rastrigin, &cube(3, 5.12), &cfg(99, 100)).unwrap();
        let b = optimize(rastrigin, &cube(3, 5.12), &cfg(99, 100)).unwrap();
        assert_eq!(a, b);
        let c = optimize(rastrigin, &cube(3, 5.12), &cfg(100, 100)).unwrap();
        assert_ne!(a.trace, c.trace);
    }

    #[test]
    fn tolerance_stops_early() {
        let c = CuckooConfig {
            max_iter: None,
            tol: Some(1e-3),
            ..CuckooConfig::with_seed(3)
        };
        let run = optimize(sphere, &cube(2, 5.0), &c).unwrap();
        assert!(run.best.fitness <= 1e-3);
        assert!(run.iterations() < DEFAULT_SCHEDULE_HORIZON);
    }

    #[test]
    fn non_finite_values_are_rejected_not_fatal() {
        let run = optimize(
            |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { sphere(x) },
            &cube(2, 1.0),
            &cfg(8, 100),
        )
        .unwrap();
        assert!(run.best.fitness.is_finite());
        assert!(run.best.position[0] <= 0.0);
        assert!(run.trace.last().unwrap().n_nonfinite > 0);
    }

    #[test]
    fn egg_laying_contracts() {
        let space = cube(3, 1.0);
        let c = cfg(0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x = vec![0.2, -0.3, 0.9];
        let moved = generate_cuckoo(&x, &x, &space, &c, &mut rng).unwrap();
        assert_ne!(moved, x);

        let wild = CuckooConfig {
            step_scale: 50.0,
            ..c.clone()
        };
        let best = vec![-0.9, 0.9, -0.9];
        for _ in 0..10_000 {
            let egg = generate_cuckoo(&x, &best, &space, &wild, &mut rng).unwrap();
            assert!(space.contains(&egg));
        }

        let frozen = CuckooConfig {
            step_scale: 0.0,
            ..c.clone()
        };
        assert_eq!(
            generate_cuckoo(&x, &best, &space, &frozen, &mut rng).unwrap(),
            x
        );
        assert!(generate_cuckoo(&x[..2], &best, &space, &c, &mut rng).is_err());
    }

    #[test]
    fn eggs_leave_a_bound_shared_with_the_best() {
        let space = cube(2, 1.0);
        let c = cfg(0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let (x, best) = (vec![0.5, -1.0], vec![0.0, -1.0]);
        let off_bound = (0..100)
            .filter(|_| generate_cuckoo(&x, &best, &space, &c, &mut rng).unwrap()[1] > -1.0)
            .count();
        assert!(off_bound > 20, "{off_bound}");
    }

    fn population(space: &SearchSpace<f64>, n: usize, rng: &mut ChaCha8Rng) -> Vec<Nest<f64>> {
        let mut nests: Vec<Nest<f64>> = (0..n)
            .map(|_| {
                let position = space.sample_uniform(rng);
                Nest {
                    fitness: sphere(&position),
                    position,
                }
            })
            .collect();
        rank(&mut nests);
        nests
    }

    #[test]
    fn abandonment_contracts() {
        let space = cube(3, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nests = population(&space, 10, &mut rng);

        let mut none = nests.clone();
        assert!(abandon_worst(&mut none, 0.0, &space, &mut rng).is_empty());
        assert_eq!(none, nests);

        let mut all = nests.clone();
        let moved = abandon_worst(&mut all, 1.0, &space, &mut rng);
        assert_eq!(moved, (1..10).collect::<Vec<_>>());
        assert_eq!(all[0], nests[0]);
        for i in 1..10 {
            assert_ne!(all[i].position, nests[i].position);
            assert!(space.contains(&all[i].position));
        }

        for p in [0.3, 0.7] {
            let mut some = nests.clone();
            abandon_worst(&mut some, p, &space, &mut rng);
            assert_eq!(some[0], nests[0]);
        }
    }

    #[test]
    fn tiny_populations_resample_uniformly() {
        let space = cube(2, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut nests = population(&space, 2, &mut rng);
        let before = nests.clone();
        assert_eq!(abandon_worst(&mut nests, 1.0, &space, &mut rng), vec![1]);
        assert_eq!(nests[0], before[0]);
        assert!(space.contains(&nests[1].position));
        assert_ne!(nests[1].position, before[1].position);
    }

    #[test]
    fn single_precision_sphere() {
        let space = SearchSpace::new(vec![-5.0f32; 3], vec![5.0f32; 3]).unwrap();
        let c = CuckooConfig {
            max_iter: Some(300),
            ..CuckooConfig::<f32>::with_seed(2)
        };
        let run = optimize(|x: &[f32]| x.iter().map(|v| v * v).sum(), &space, &c).unwrap();
        assert!(run.best.fitness < 1e-3);
    }
}
