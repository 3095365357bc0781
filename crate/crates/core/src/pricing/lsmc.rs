//! Longstaff–Schwartz least-squares Monte Carlo for American puts.

use super::paths::{simulate_unit_paths, PathGrid};
use super::regression::{add_outer, basis_size, evaluate_basis, NormalEquations};
use super::{check_positive, PricerConfig, PricingError};
use crate::heston::HestonParams;
use crate::scalar::Real;

/// Monte Carlo price with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsmcEstimate<T> {
    pub price: T,
    pub std_error: T,
}

/// Prices one American put. Identical to the single-element case of
/// [`price_american_puts_lsmc`].
pub fn price_american_put_lsmc<T: Real>(
    params: &HestonParams<T>,
    spot: T,
    strike: T,
    rate: T,
    maturity: T,
    cfg: &PricerConfig,
) -> Result<LsmcEstimate<T>, PricingError> {
    let mut out = price_american_puts_lsmc(params, &[(spot, strike)], rate, maturity, cfg)?;
    Ok(out.remove(0))
}

/// Prices American puts for several `(spot, strike)` pairs sharing one
/// maturity and rate.
///
/// All pairs reuse one set of unit-spot paths. Each pair's result depends
/// only on its own inputs and the seed, so batching never changes a price.
pub fn price_american_puts_lsmc<T: Real>(
    params: &HestonParams<T>,
    pairs: &[(T, T)],
    rate: T,
    maturity: T,
    cfg: &PricerConfig,
) -> Result<Vec<LsmcEstimate<T>>, PricingError> {
    for &(spot, strike) in pairs {
        check_positive("spot", spot)?;
        check_positive("strike", strike)?;
    }
    let grid = simulate_unit_paths(params, rate, maturity, cfg)?;
    Ok(backward_induction(&grid, pairs, rate, cfg))
}

/// Rows per block of precomputed `X^T X` partial sums.
const BLOCK: usize = 256;

/// Regression inputs at one exercise date, shared by every strike.
///
/// Paths are sorted by spot, so the in-the-money set of any put is a prefix
/// of `order`. The Gram matrix of a prefix is assembled from whole-block
/// cumulative sums plus the rows of one partial block, which depends only on
/// the prefix length. A strike's fit is therefore the same whichever other
/// strikes share the batch.
struct StepFit<T> {
    nb: usize,
    keyed: Vec<(f64, usize)>,
    order: Vec<usize>,
    basis: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> StepFit<T> {
    fn new(n_paths: usize, nb: usize) -> Self {
        Self {
            nb,
            keyed: Vec::with_capacity(n_paths),
            order: (0..n_paths).collect(),
            basis: vec![T::zero(); n_paths * nb],
            cumulative: vec![T::zero(); (n_paths / BLOCK + 1) * nb * nb],
        }
    }

    fn prepare(&mut self, xs: &[T], vs: &[T], degree: usize) {
        let nb = self.nb;
        // Stable radix sort from index order: ties stay in index order.
        self.keyed.clear();
        self.keyed
            .extend(xs.iter().enumerate().map(|(i, &x)| (x.as_f64(), i)));
        radsort::sort_by_key(&mut self.keyed, |k| k.0);
        for (o, &(_, i)) in self.order.iter_mut().zip(&self.keyed) {
            *o = i;
        }
        for (row, &i) in self.basis.chunks_exact_mut(nb).zip(&self.order) {
            evaluate_basis(xs[i], vs[i], degree, row);
        }
        let size = nb * nb;
        let (first, rest) = self.cumulative.split_at_mut(size);
        first.fill(T::zero());
        let mut prev: &mut [T] = first;
        for (block, next) in self
            .basis
            .chunks_exact(BLOCK * nb)
            .zip(rest.chunks_exact_mut(size))
        {
            next.copy_from_slice(prev);
            for row in block.chunks_exact(nb) {
                add_outer(next, row);
            }
            prev = next;
        }
    }

    fn row(&self, r: usize) -> &[T] {
        &self.basis[r * self.nb..(r + 1) * self.nb]
    }

    /// Normal equations over the first `count` sorted paths.
    fn normal_equations(&self, count: usize, cash: &[T], normal: &mut NormalEquations<T>) {
        let size = self.nb * self.nb;
        let whole = count / BLOCK;
        normal.start_from(&self.cumulative[whole * size..(whole + 1) * size]);
        for r in whole * BLOCK..count {
            normal.add_gram(self.row(r));
        }
        let rows = self.basis[..count * self.nb].chunks_exact(self.nb);
        for (row, &i) in rows.zip(&self.order[..count]) {
            normal.add_rhs(row, cash[i]);
        }
    }
}

/// Works in units of the strike: pair `p` has spot coordinate
/// `s = (S0/K) X` and payoff `max(1 - s, 0)`. The regression basis is built
/// on the unit spot `X` instead of `s`, which rescales its columns and leaves
/// the fitted continuation values unchanged.
fn backward_induction<T: Real>(
    grid: &PathGrid<T>,
    pairs: &[(T, T)],
    rate: T,
    cfg: &PricerConfig,
) -> Vec<LsmcEstimate<T>> {
    let n = grid.n_paths();
    let last = grid.n_steps();
    let degree = cfg.basis_degree;
    let nb = basis_size(degree);
    let disc = (-rate * grid.dt()).exp();
    let moneyness: Vec<T> = pairs.iter().map(|&(spot, strike)| spot / strike).collect();

    let terminal = grid.spots_at(last);
    let mut cash: Vec<Vec<T>> = moneyness
        .iter()
        .map(|&m| {
            terminal
                .iter()
                .map(|&x| (T::one() - m * x).max(T::zero()))
                .collect()
        })
        .collect();
    let mut fit = StepFit::new(n, nb);
    let mut normal = NormalEquations::new(nb);
    let mut coef = vec![T::zero(); nb];

    for t in (1..last).rev() {
        for c in cash.iter_mut().flatten() {
            *c *= disc;
        }
        let xs = grid.spots_at(t);
        fit.prepare(xs, grid.variances_at(t), degree);
        for (cash, &m) in cash.iter_mut().zip(&moneyness) {
            let itm = fit
                .order
                .partition_point(|&i| T::one() - m * xs[i] > T::zero());
            // Too few in-the-money paths to identify the fit: hold everywhere.
            if itm < nb {
                continue;
            }
            fit.normal_equations(itm, cash, &mut normal);
            normal.solve(&mut coef);
            let rows = fit.basis[..itm * nb].chunks_exact(nb);
            for (row, &i) in rows.zip(&fit.order[..itm]) {
                let continuation = row
                    .iter()
                    .zip(&coef)
                    .fold(T::zero(), |acc, (&b, &c)| acc + b * c);
                let exercise = T::one() - m * xs[i];
                if exercise > continuation {
                    cash[i] = exercise;
                }
            }
        }
    }

    cash.iter_mut()
        .zip(pairs)
        .map(|(cash, &(spot, strike))| {
            for c in cash.iter_mut() {
                *c *= disc;
            }
            let (mean, se) = if cfg.antithetic {
                let pairs: Vec<T> = cash
                    .chunks_exact(2)
                    .map(|p| (p[0] + p[1]) * T::lit(0.5))
                    .collect();
                mean_and_std_error(&pairs)
            } else {
                mean_and_std_error(cash)
            };
            let intrinsic = (strike - spot).max(T::zero());
            LsmcEstimate {
                price: (strike * mean).max(intrinsic),
                std_error: strike * se,
            }
        })
        .collect()
}

fn mean_and_std_error<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::from_count(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    if xs.len() < 2 {
        return (mean, T::zero());
    }
    let ss: T = xs.iter().map(|&x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - T::one()) / n).sqrt())
}
